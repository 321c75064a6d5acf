#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rangeinfo/config.hpp"
#include "rangeinfo/posterior.hpp"
#include "rangeinfo/rng.hpp"
#include "rangeinfo/signal_model.hpp"

namespace rangeinfo {

enum class EstimatorKind { MAP, MLE, SAP };

struct EstimateRecord {
    EstimatorKind estimator = EstimatorKind::MAP;
    double x_hat = 0.0;
    double x_true = 0.0;
    double sq_err = 0.0;
};

inline EstimateRecord make_estimate_record(EstimatorKind kind, double x_hat, double x_true) {
    double d = x_hat - x_true;
    return {kind, x_hat, x_true, d * d};
}

struct PeakEstimate {
    double x_hat = 0.0;
    bool degenerate = false;
};

namespace detail {

/// Argmax over a uniform grid with 3-point parabolic refinement on the
/// log-scale values. Ties break toward the smallest abscissa.
inline PeakEstimate refine_peak(const std::vector<double>& xs, const std::vector<double>& logv,
                                double dx) {
    if (xs.empty() || xs.size() != logv.size())
        throw std::invalid_argument("refine_peak: bad grid");
    std::size_t best = 0;
    double lo = logv[0], hi = logv[0];
    for (std::size_t i = 1; i < logv.size(); ++i) {
        if (logv[i] > logv[best]) best = i;
        if (logv[i] < lo) lo = logv[i];
        if (logv[i] > hi) hi = logv[i];
    }
    if (hi - lo < 1e-12) return {0.5 * (xs.front() + xs.back()), true};
    double x = xs[best];
    if (best > 0 && best + 1 < logv.size()) {
        double a = logv[best - 1], b = logv[best], c = logv[best + 1];
        double denom = a - 2.0 * b + c;
        if (denom < 0.0) {
            double offset = 0.5 * (a - c) / denom;
            if (offset > 0.5) offset = 0.5;
            if (offset < -0.5) offset = -0.5;
            x += offset * dx;
        }
    }
    return {x, false};
}

}  // namespace detail

inline PeakEstimate map_estimate_detail(const PosteriorGrid& p) {
    return detail::refine_peak(p.xs, p.log_density, p.cell_width);
}

/// MAP: abscissa of the posterior mode, parabolic-refined.
inline double map_estimate(const PosteriorGrid& p) { return map_estimate_detail(p).x_hat; }

/// MLE: mode of the likelihood over the same grid. Under the uniform prior
/// this matches map_estimate exactly, argmax cell and refinement included.
inline double mle_estimate(const ReceivedSignal& y, const SystemConfig& cfg) {
    std::vector<double> ll = log_likelihood_grid(y, cfg);
    std::vector<double> xs = grid_abscissae(cfg);
    return detail::refine_peak(xs, ll, cfg.cell_width()).x_hat;
}

/// SAP: one exact inverse-CDF draw from the piecewise-constant grid density.
inline double sap_estimate(const PosteriorGrid& p, Rng& rng) {
    if (p.xs.empty()) throw std::invalid_argument("sap_estimate: empty grid");
    double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double mass = p.density[i] * p.cell_width;
        if (cum + mass >= u && mass > 0.0) {
            double frac = (u - cum) / mass;
            return p.xs[i] + (frac - 0.5) * p.cell_width;
        }
        cum += mass;
    }
    // numerical leftover: fall back to the last nonempty cell
    for (std::size_t i = p.size(); i-- > 0;)
        if (p.density[i] > 0.0) return p.xs[i];
    throw std::runtime_error("sap_estimate: zero-mass grid");
}

}  // namespace rangeinfo
