#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rangeinfo/config.hpp"
#include "rangeinfo/math.hpp"
#include "rangeinfo/rng.hpp"

namespace rangeinfo {

using cdouble = std::complex<double>;

struct ScatterCoefficient {
    double amplitude = 0.0;  // alpha >= 0
    double phase = 0.0;      // in [0, 2*pi)

    cdouble value() const { return std::polar(amplitude, phase); }
};

/// One snapshot: samples indexed n = -N/2 .. N/2-1 plus the ground truth.
struct ReceivedSignal {
    std::vector<cdouble> samples;
    double truth_range = 0.0;
    ScatterCoefficient truth_scatter;

    int tbp() const { return static_cast<int>(samples.size()); }
};

/// u(x): components sinc(n - x) for n = -N/2 .. N/2-1.
inline std::vector<double> steering_vector(double x, int n) {
    double half = n / 2.0;
    if (!(x >= -half) || !(x < half))
        throw std::invalid_argument("steering_vector: x outside observation interval");
    std::vector<double> u(static_cast<std::size_t>(n));
    // sinc(k - x) = (-1)^k sin(pi x) / (pi (x - k)); one sin for the whole row
    double s = std::sin(kPi * x);
    for (int k = -n / 2; k < n / 2; ++k) {
        std::size_t i = static_cast<std::size_t>(k + n / 2);
        if (std::abs(x - k) < 1e-9) {
            u[i] = sinc(k - x);
        } else {
            double sign = (k & 1) ? -1.0 : 1.0;
            u[i] = sign * s / (kPi * (x - k));
        }
    }
    return u;
}

/// Swerling0: constant amplitude sqrt(rho^2 n0 / 2). Swerling1: Rayleigh
/// amplitude with E[alpha^2] = rho^2 n0 / 2. Phase uniform in both.
inline ScatterCoefficient sample_scattering(Swerling model, double rho_sq, double n0, Rng& rng) {
    if (!(rho_sq > 0.0) || !(n0 > 0.0))
        throw std::invalid_argument("sample_scattering: rho_sq and n0 must be positive");
    ScatterCoefficient s;
    s.phase = rng.uniform(0.0, 2.0 * kPi);
    double mean_sq = rho_sq * n0 / 2.0;
    switch (model) {
        case Swerling::Sw0:
            s.amplitude = std::sqrt(mean_sq);
            break;
        case Swerling::Sw1: {
            // Rayleigh with sigma^2 = mean_sq/2 so E[alpha^2] = mean_sq
            double sigma = std::sqrt(mean_sq / 2.0);
            double a = sigma * rng.normal();
            double b = sigma * rng.normal();
            s.amplitude = std::hypot(a, b);
            break;
        }
        default:
            throw std::invalid_argument("sample_scattering: unknown model");
    }
    return s;
}

/// y = s u(x0) + w with w i.i.d. complex Gaussian, variance n0 per complex
/// sample (n0/2 per real and imaginary part).
inline ReceivedSignal generate_echo(const SystemConfig& cfg, double x0, Rng& rng) {
    double half = cfg.half_width();
    if (!(x0 >= -half) || !(x0 < half))
        throw std::invalid_argument("generate_echo: x0 outside observation interval");
    ReceivedSignal y;
    y.truth_range = x0;
    y.truth_scatter = sample_scattering(cfg.swerling, cfg.rho_sq(), cfg.n0, rng);
    cdouble s = y.truth_scatter.value();
    std::vector<double> u = steering_vector(x0, cfg.tbp);
    double noise_sd = std::sqrt(cfg.n0 / 2.0);
    y.samples.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        cdouble w(noise_sd * rng.normal(), noise_sd * rng.normal());
        y.samples[i] = s * u[i] + w;
    }
    return y;
}

/// Noise-free variant for analytic tests.
inline ReceivedSignal generate_echo_noiseless(const SystemConfig& cfg, double x0,
                                              const ScatterCoefficient& sc) {
    ReceivedSignal y;
    y.truth_range = x0;
    y.truth_scatter = sc;
    cdouble s = sc.value();
    std::vector<double> u = steering_vector(x0, cfg.tbp);
    y.samples.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) y.samples[i] = s * u[i];
    return y;
}

}  // namespace rangeinfo
