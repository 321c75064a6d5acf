#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rangeinfo/config.hpp"
#include "rangeinfo/math.hpp"
#include "rangeinfo/signal_model.hpp"

namespace rangeinfo {

/// Discretized a posteriori PDF of range on a uniform grid of cell centers.
struct PosteriorGrid {
    std::vector<double> xs;           // cell centers, strictly increasing
    std::vector<double> log_density;  // ln of normalized density
    std::vector<double> density;
    double cell_width = 0.0;

    std::size_t size() const { return xs.size(); }
};

/// High-SNR Gaussian shape of the posterior: variance 1/(rho^2 beta^2).
struct GaussianApprox {
    double mean = 0.0;
    double variance = 0.0;
    double beta_sq = kBetaSq;
};

inline GaussianApprox gaussian_approx(double x0, double rho_sq) {
    if (!(rho_sq > 0.0)) throw std::invalid_argument("gaussian_approx: rho_sq must be positive");
    return {x0, 1.0 / (rho_sq * kBetaSq), kBetaSq};
}

/// Matched filter output u^H(x) y at each query point.
inline std::vector<cdouble> matched_filter(const ReceivedSignal& y, const std::vector<double>& xs) {
    int n = y.tbp();
    double half = n / 2.0;
    std::vector<cdouble> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double x = xs[i];
        if (!(x >= -half) || !(x < half))
            throw std::invalid_argument("matched_filter: query point outside interval");
        double s = std::sin(kPi * x);
        cdouble acc = 0.0;
        for (int k = -n / 2; k < n / 2; ++k) {
            double w;
            if (std::abs(x - k) < 1e-9) {
                w = sinc(k - x);
            } else {
                double sign = (k & 1) ? -1.0 : 1.0;
                w = sign * s / (kPi * (x - k));
            }
            acc += y.samples[static_cast<std::size_t>(k + n / 2)] * w;
        }
        out[i] = acc;
    }
    return out;
}

inline double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double squared_norm(const std::vector<cdouble>& v) {
    double s = 0.0;
    for (const cdouble& x : v) s += std::norm(x);
    return s;
}

/// Swerling 0 log-likelihood at one range hypothesis. Proportional form is
/// ln I0((2 alpha / n0) |u^H(x) y|), the only x-dependent part when ||u(x)||^2
/// is treated as constant. With keep_constants the exact log-density is
/// returned: -N ln(pi n0) - (||y||^2 + alpha^2 ||u(x)||^2)/n0 + ln I0(.).
inline double log_likelihood_sw0(const ReceivedSignal& y, double x, double alpha, double n0,
                                 bool keep_constants = false) {
    std::vector<cdouble> mf = matched_filter(y, {x});
    double z = 2.0 * alpha / n0 * std::abs(mf[0]);
    double li0 = log_bessel_i0(z);
    if (!keep_constants) return li0;
    int n = y.tbp();
    double u_sq = squared_norm(steering_vector(x, n));
    double y_sq = squared_norm(y.samples);
    return -n * std::log(kPi * n0) - (y_sq + alpha * alpha * u_sq) / n0 + li0;
}

/// Swerling 1 log-likelihood exponent |u^H(x) y|^2 / (n0 (1 + 2/rho^2)).
inline double log_likelihood_sw1(const ReceivedSignal& y, double x, double n0, double rho_sq) {
    if (!(rho_sq > 0.0)) throw std::invalid_argument("log_likelihood_sw1: rho_sq must be positive");
    std::vector<cdouble> mf = matched_filter(y, {x});
    return std::norm(mf[0]) / (n0 * (1.0 + 2.0 / rho_sq));
}

/// Swerling 1 exact log-density: y ~ CN(0, n0 I + c u u^H) with
/// c = rho^2 n0 / 2 (rank-one update evaluated in closed form).
inline double log_likelihood_sw1_full(const ReceivedSignal& y, double x, double n0,
                                      double rho_sq) {
    if (!(rho_sq > 0.0))
        throw std::invalid_argument("log_likelihood_sw1_full: rho_sq must be positive");
    int n = y.tbp();
    double c = rho_sq * n0 / 2.0;
    double u_sq = squared_norm(steering_vector(x, n));
    std::vector<cdouble> mf = matched_filter(y, {x});
    double y_sq = squared_norm(y.samples);
    double denom = n0 + c * u_sq;
    return -n * std::log(kPi * n0) - std::log(denom / n0) - y_sq / n0 +
           c * std::norm(mf[0]) / (n0 * denom);
}

/// Known amplitude implied by the configured SNR (Swerling 0 constant modulus,
/// Swerling 1 root-mean-square).
inline double known_alpha(const SystemConfig& cfg) {
    return std::sqrt(cfg.rho_sq() * cfg.n0 / 2.0);
}

/// Uniform grid of cell centers over [-N/2, N/2).
inline std::vector<double> grid_abscissae(const SystemConfig& cfg) {
    int m = cfg.grid_size();
    double dx = cfg.cell_width();
    double lo = -cfg.half_width();
    std::vector<double> xs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) xs[static_cast<std::size_t>(i)] = lo + (i + 0.5) * dx;
    return xs;
}

/// Swerling-appropriate log-likelihood over the whole grid, proportional form.
inline std::vector<double> log_likelihood_grid(const ReceivedSignal& y, const SystemConfig& cfg) {
    std::vector<double> xs = grid_abscissae(cfg);
    std::vector<cdouble> mf = matched_filter(y, xs);
    std::vector<double> ll(xs.size());
    if (cfg.swerling == Swerling::Sw0) {
        double scale = 2.0 * known_alpha(cfg) / cfg.n0;
        for (std::size_t i = 0; i < xs.size(); ++i) ll[i] = log_bessel_i0(scale * std::abs(mf[i]));
    } else {
        double denom = cfg.n0 * (1.0 + 2.0 / cfg.rho_sq());
        for (std::size_t i = 0; i < xs.size(); ++i) ll[i] = std::norm(mf[i]) / denom;
    }
    return ll;
}

namespace detail {

/// ||u(x)||^2 at every grid abscissa, memoized per (tbp, grid density); the
/// typicality runs evaluate this grid for every snapshot.
inline const std::vector<double>& steering_norm_sq_grid(const SystemConfig& cfg) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(cfg.tbp, cfg.grid_points_per_sample);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> xs = grid_abscissae(cfg);
    std::vector<double> u_sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        u_sq[i] = squared_norm(steering_vector(xs[i], cfg.tbp));
    return cache.emplace(key, std::move(u_sq)).first->second;
}

}  // namespace detail

/// Exact log-density ln p(y|x) over the whole grid (constants kept).
inline std::vector<double> log_likelihood_grid_full(const ReceivedSignal& y,
                                                    const SystemConfig& cfg) {
    std::vector<double> xs = grid_abscissae(cfg);
    std::vector<cdouble> mf = matched_filter(y, xs);
    const std::vector<double>& u_sq = detail::steering_norm_sq_grid(cfg);
    int n = cfg.tbp;
    double n0 = cfg.n0;
    double y_sq = squared_norm(y.samples);
    std::vector<double> ll(xs.size());
    if (cfg.swerling == Swerling::Sw0) {
        double alpha = known_alpha(cfg);
        double scale = 2.0 * alpha / n0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ll[i] = -n * std::log(kPi * n0) - (y_sq + alpha * alpha * u_sq[i]) / n0 +
                    log_bessel_i0(scale * std::abs(mf[i]));
        }
    } else {
        double c = cfg.rho_sq() * n0 / 2.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double denom = n0 + c * u_sq[i];
            ll[i] = -n * std::log(kPi * n0) - std::log(denom / n0) - y_sq / n0 +
                    c * std::norm(mf[i]) / (n0 * denom);
        }
    }
    return ll;
}

/// Normalize grid log-likelihoods into a PosteriorGrid (uniform prior cancels).
inline PosteriorGrid posterior_from_log_likelihood(std::vector<double> ll,
                                                   const SystemConfig& cfg) {
    PosteriorGrid p;
    p.xs = grid_abscissae(cfg);
    p.cell_width = cfg.cell_width();
    if (ll.size() != p.xs.size())
        throw std::invalid_argument("posterior_from_log_likelihood: grid size mismatch");
    double lse = log_sum_exp(ll);
    if (!std::isfinite(lse))
        throw std::runtime_error("posterior_from_log_likelihood: degenerate likelihood");
    double log_norm = lse + std::log(p.cell_width);
    p.log_density = std::move(ll);
    p.density.resize(p.log_density.size());
    for (std::size_t i = 0; i < p.log_density.size(); ++i) {
        p.log_density[i] -= log_norm;
        p.density[i] = std::exp(p.log_density[i]);
    }
    return p;
}

inline PosteriorGrid posterior_grid(const ReceivedSignal& y, const SystemConfig& cfg) {
    return posterior_from_log_likelihood(log_likelihood_grid(y, cfg), cfg);
}

/// Swerling 0 posterior with an explicit amplitude (alpha = 0 recovers the
/// uniform prior exactly).
inline PosteriorGrid posterior_grid_alpha(const ReceivedSignal& y, const SystemConfig& cfg,
                                          double alpha) {
    std::vector<double> xs = grid_abscissae(cfg);
    std::vector<cdouble> mf = matched_filter(y, xs);
    std::vector<double> ll(xs.size());
    double scale = 2.0 * alpha / cfg.n0;
    for (std::size_t i = 0; i < xs.size(); ++i) ll[i] = log_bessel_i0(scale * std::abs(mf[i]));
    return posterior_from_log_likelihood(std::move(ll), cfg);
}

/// Debug dump as CSV (x, density).
inline void dump_posterior_csv(const PosteriorGrid& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_posterior_csv: cannot open " + path);
    out << "# posterior-grid-csv v1\n";
    out << "x,density\n";
    out.precision(17);
    for (std::size_t i = 0; i < p.size(); ++i) out << p.xs[i] << ',' << p.density[i] << '\n';
}

}  // namespace rangeinfo
