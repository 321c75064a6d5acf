#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace rangeinfo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = 0.57721566490153286;

// Normalized mean-square bandwidth of the sinc pulse.
inline constexpr double kBetaSq = kPi * kPi / 3.0;
inline const double kBeta = kPi / std::sqrt(3.0);

/// sin(pi t)/(pi t) with the removable singularity filled.
inline double sinc(double t) {
    if (std::abs(t) < 1e-9) {
        double z = kPi * t;
        return 1.0 - z * z / 6.0;
    }
    return std::sin(kPi * t) / (kPi * t);
}

/// ln I0(z) for z >= 0, overflow-free over the full double range.
///
/// Power series below the crossover, asymptotic expansion
/// I0(z) ~ e^z/sqrt(2 pi z) * sum_k a_k z^-k above it.
inline double log_bessel_i0(double z) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::domain_error("log_bessel_i0: z must be finite and nonnegative");
    if (z < 25.0) {
        // sum_k (z^2/4)^k / (k!)^2
        double q = z * z / 4.0;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return std::log(sum);
    }
    // a_0 = 1, a_k = a_{k-1} * (2k-1)^2 / (8k)
    double inv = 1.0 / z;
    double a = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k) * inv;
        sum += a;
    }
    return z - 0.5 * std::log(2.0 * kPi * z) + std::log(sum);
}

/// Gaussian right-tail probability Q(x) = P(N(0,1) > x).
inline double gaussian_q(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double log_sum_exp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        if (x > m) m = x;
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

struct MeanAndError {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MeanAndError mean_and_error(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean_and_error: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    double mean = s / static_cast<double>(v.size());
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) {
        double d = x - mean;
        ss += d * d;
    }
    double var = ss / static_cast<double>(v.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b].
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace rangeinfo
