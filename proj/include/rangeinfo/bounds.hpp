#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangeinfo/estimators.hpp"
#include "rangeinfo/math.hpp"

namespace rangeinfo {

enum class BoundKind { CRB, ZZB, EEClosed, EEMc };

struct BoundCurve {
    std::vector<double> snr_db;
    std::vector<double> value;  // variance units, normalized range squared
    BoundKind kind = BoundKind::CRB;
};

/// Cramer-Rao bound 1/(rho^2 beta^2) for the sinc pulse.
inline double crb(double rho_sq) {
    if (!(rho_sq > 0.0)) throw std::invalid_argument("crb: rho_sq must be positive");
    return 1.0 / (rho_sq * kBetaSq);
}

/// Single-pulse Ziv-Zakai bound for a uniform prior of width n:
/// (1/n) integral_0^n (n-h) h Q(sqrt(rho^2 (1-sinc(h)))) dh.
///
/// The integrand has a step-like drop of width ~1/(rho beta) at h=0 once the
/// SNR is high, so the quadrature splits [0,n] at geometrically growing
/// breakpoints near zero before switching to unit-width segments.
inline double zzb(double rho_sq, int n) {
    if (!(rho_sq > 0.0)) throw std::invalid_argument("zzb: rho_sq must be positive");
    if (n < 4) throw std::invalid_argument("zzb: n must be >= 4");
    auto f = [rho_sq, n](double h) {
        double arg = rho_sq * (1.0 - sinc(h));
        if (arg < 0.0) arg = 0.0;  // guards tiny negative rounding near h=0
        return (n - h) * h * gaussian_q(std::sqrt(arg));
    };
    std::vector<double> pts{0.0};
    for (double b = 1e-6; b < 1.0; b *= 2.0) pts.push_back(b);
    for (int k = 1; k <= n; ++k) pts.push_back(static_cast<double>(k));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], 1e-12 * n * n);
    if (!std::isfinite(total) || total < 0.0) throw std::runtime_error("zzb: quadrature failed");
    return total / n;
}

/// Mean squared error with its Monte Carlo standard error.
inline MeanAndError empirical_mse(const std::vector<EstimateRecord>& records) {
    if (records.empty()) throw std::invalid_argument("empirical_mse: empty input");
    std::vector<double> sq(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) sq[i] = records[i].sq_err;
    return mean_and_error(sq);
}

inline std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::CRB: return "crb";
        case BoundKind::ZZB: return "zzb";
        case BoundKind::EEClosed: return "ee_closed";
        case BoundKind::EEMc: return "ee_mc";
    }
    return "unknown";
}

}  // namespace rangeinfo
