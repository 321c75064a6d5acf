#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rangeinfo/config.hpp"
#include "rangeinfo/math.hpp"
#include "rangeinfo/posterior.hpp"
#include "rangeinfo/rng.hpp"
#include "rangeinfo/signal_model.hpp"
#include "rangeinfo/threads.hpp"

namespace rangeinfo {

inline constexpr double kLn2 = 0.69314718055994531;

struct EntropyEstimate {
    double value_nats = 0.0;
    double value_bits = 0.0;
    double std_error = 0.0;  // in bits; 0 for deterministic quantities
    int trials = 0;
};

inline EntropyEstimate make_entropy_estimate(double nats, double se_bits, int trials) {
    return {nats, nats / kLn2, se_bits, trials};
}

/// Differential entropy of a grid density, -sum d ln(d) dx in nats.
inline double grid_entropy(const PosteriorGrid& p) {
    double total = 0.0, h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = p.density[i];
        total += d * p.cell_width;
        if (d > 0.0) h -= d * p.log_density[i] * p.cell_width;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("grid_entropy: density is not normalized");
    return h;
}

/// Draws the truth uniformly over the configured central span.
inline double draw_truth(const SystemConfig& cfg, Rng& rng) {
    double half = cfg.half_width() * cfg.truth_span;
    return rng.uniform(-half, half);
}

/// Monte Carlo mean posterior entropy h(X|Y); one echo per trial.
inline EntropyEstimate posterior_entropy_mc(const SystemConfig& cfg, int threads = 1) {
    cfg.validate();
    std::vector<double> h(static_cast<std::size_t>(cfg.trials));
    parallel_for(h.size(), threads, [&](std::size_t t) {
        Rng rng = Rng::for_trial(cfg.seed, t);
        double x0 = draw_truth(cfg, rng);
        ReceivedSignal y = generate_echo(cfg, x0, rng);
        h[t] = grid_entropy(posterior_grid(y, cfg));
    });
    MeanAndError m = mean_and_error(h);
    return make_entropy_estimate(m.mean, m.std_error / kLn2, cfg.trials);
}

/// Range information I(Y;X) = h(X) - E[h(X|Y)], h(X) = ln N for the uniform
/// prior over the full interval.
inline EntropyEstimate range_information(const SystemConfig& cfg, int threads = 1) {
    EntropyEstimate hxy = posterior_entropy_mc(cfg, threads);
    double ri_nats = std::log(static_cast<double>(cfg.tbp)) - hxy.value_nats;
    return make_entropy_estimate(ri_nats, hxy.std_error, cfg.trials);
}

/// Same Monte Carlo with the signal amplitude forced to zero in both the echo
/// and the posterior (pure-noise sanity path).
inline EntropyEstimate range_information_no_signal(const SystemConfig& cfg, int threads = 1) {
    cfg.validate();
    std::vector<double> h(static_cast<std::size_t>(cfg.trials));
    parallel_for(h.size(), threads, [&](std::size_t t) {
        Rng rng = Rng::for_trial(cfg.seed, t);
        double x0 = draw_truth(cfg, rng);
        ReceivedSignal y;
        y.truth_range = x0;
        y.truth_scatter = {0.0, rng.uniform(0.0, 2.0 * kPi)};
        double sd = std::sqrt(cfg.n0 / 2.0);
        y.samples.resize(static_cast<std::size_t>(cfg.tbp));
        for (auto& s : y.samples) s = cdouble(sd * rng.normal(), sd * rng.normal());
        h[t] = grid_entropy(posterior_grid_alpha(y, cfg, 0.0));
    });
    MeanAndError m = mean_and_error(h);
    double ri_nats = std::log(static_cast<double>(cfg.tbp)) - m.mean;
    return make_entropy_estimate(ri_nats, m.std_error / kLn2, cfg.trials);
}

/// Entropy power 2^{2h}/(2 pi e) for h in bits.
inline double entropy_error(double h_bits) {
    return std::exp(2.0 * h_bits * kLn2) / (2.0 * kPi * std::exp(1.0));
}

/// Ambiguity p_s = e^{rho^2/2+1} / (T rho^2 beta + e^{rho^2/2+1}), evaluated
/// in a form that cannot overflow at high SNR.
inline double ambiguity_ps(double rho_sq, double t) {
    if (!(rho_sq > 0.0) || !(t > 0.0))
        throw std::invalid_argument("ambiguity_ps: inputs must be positive");
    return 1.0 / (1.0 + t * rho_sq * kBeta * std::exp(-(rho_sq / 2.0 + 1.0)));
}

struct EEBreakdown {
    double h_s = 0.0;       // high-SNR entropy component, nats
    double h_w = 0.0;       // low-SNR (prior-like) component, nats
    double h_ps = 0.0;      // binary uncertainty, bits
    double p_s = 0.0;
    double ee_closed = 0.0;
    double ee_mc = 0.0;     // filled by sweeps, 0 here
};

/// Closed-form entropy error 1/(rho^2 beta^2 p_s^2) plus its mixture
/// components. The mixture p_s h_s + (1-p_s) h_w + h_ps reproduces the
/// closed-form posterior entropy ln sqrt(2 pi e) - ln(rho beta p_s) exactly.
inline EEBreakdown ee_closed_form(double rho_sq, double t) {
    EEBreakdown b;
    b.p_s = ambiguity_ps(rho_sq, t);
    double rho = std::sqrt(rho_sq);
    b.h_s = 0.5 * std::log(2.0 * kPi * std::exp(1.0)) - std::log(rho * kBeta);
    b.h_w = std::log(t * rho) + 0.5 * std::log(2.0 * kPi) - (rho_sq + 1.0) / 2.0;
    double q = 1.0 - b.p_s;
    double h_ps_nats = 0.0;
    if (b.p_s > 0.0 && q > 0.0) h_ps_nats = -b.p_s * std::log(b.p_s) - q * std::log(q);
    b.h_ps = h_ps_nats / kLn2;
    b.ee_closed = 1.0 / (rho_sq * kBetaSq * b.p_s * b.p_s);
    return b;
}

/// Posterior entropy implied by the Appendix-style mixture, in nats.
inline double ee_mixture_entropy(const EEBreakdown& b) {
    return b.p_s * b.h_s + (1.0 - b.p_s) * b.h_w + b.h_ps * kLn2;
}

/// Closed-form posterior entropy ln sqrt(2 pi e) - ln(rho beta p_s), nats.
inline double ee_closed_entropy(double rho_sq, double t) {
    double p_s = ambiguity_ps(rho_sq, t);
    return 0.5 * std::log(2.0 * kPi * std::exp(1.0)) -
           std::log(std::sqrt(rho_sq) * kBeta * p_s);
}

/// Information upper bound in bits: log2(T beta rho / sqrt(2 pi e)), reduced
/// by gamma/(2 ln 2) for the fluctuating-amplitude model.
inline double ri_upper_bound(Swerling model, double t, double rho_sq) {
    if (!(rho_sq > 0.0) || !(t > 0.0))
        throw std::invalid_argument("ri_upper_bound: inputs must be positive");
    double bound = std::log2(t * kBeta * std::sqrt(rho_sq) /
                             std::sqrt(2.0 * kPi * std::exp(1.0)));
    if (model == Swerling::Sw1) bound -= kEulerGamma / (2.0 * kLn2);
    return bound;
}

/// Predicted entropy-deviation ratio 2^{-RI}.
inline double theorem1_ratio(double ri_bits) { return std::exp2(-ri_bits); }

}  // namespace rangeinfo
