#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rangeinfo/math.hpp"

using namespace rangeinfo;

TEST_CASE("sinc basic values") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(3.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(sinc(-7.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(sinc(0.5) == Catch::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(sinc(0.5) == Catch::Approx(0.636619772).margin(1e-9));
    for (double t : {0.1, 0.7, 1.3, -2.4}) CHECK(std::abs(sinc(t)) <= 1.0);
    CHECK(sinc(1e-12) == Catch::Approx(1.0).margin(1e-15));
}

namespace {

// independent long-double power series, small z only
long double series_i0(long double z) {
    long double q = z * z / 4.0L, term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (term < sum * 1e-25L) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("log_bessel_i0 against oracles") {
    CHECK(log_bessel_i0(0.0) == 0.0);
    // frozen series value at z=1
    CHECK(log_bessel_i0(1.0) == Catch::Approx(0.2359143587).margin(1e-9));

    // small/moderate z: long-double series oracle
    for (double z : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 24.9, 25.1, 30.0, 50.0}) {
        long double ref = std::log(series_i0(static_cast<long double>(z)));
        CHECK(log_bessel_i0(z) ==
              Catch::Approx(static_cast<double>(ref)).epsilon(1e-10).margin(1e-12));
    }
    // both branches agree with the series oracle right at the crossover
    for (double z : {24.999999, 25.000001}) {
        long double ref = std::log(series_i0(static_cast<long double>(z)));
        CHECK(log_bessel_i0(z) == Catch::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }

    // large z: truncated asymptotic oracle from the op contract
    for (double z : {700.0, 1e3, 1e4, 1e5}) {
        double ref = z - 0.5 * std::log(2.0 * kPi * z) + std::log(1.0 + 1.0 / (8.0 * z));
        CHECK(log_bessel_i0(z) == Catch::Approx(ref).epsilon(1e-7));
    }
    CHECK(log_bessel_i0(700.0) ==
          Catch::Approx(700.0 - 0.5 * std::log(2.0 * kPi * 700.0) +
                        std::log(1.0 + 1.0 / 5600.0)).epsilon(1e-8));

    CHECK(std::isfinite(log_bessel_i0(1e5)));
    CHECK_THROWS(log_bessel_i0(-1.0));
    CHECK_THROWS(log_bessel_i0(std::nan("")));
}

TEST_CASE("gaussian_q values") {
    CHECK(gaussian_q(0.0) == Catch::Approx(0.5));
    CHECK(gaussian_q(1.0) == Catch::Approx(0.158655253931).epsilon(1e-9));
    CHECK(gaussian_q(-1.0) == Catch::Approx(1.0 - 0.158655253931).epsilon(1e-9));
    CHECK(gaussian_q(10.0) < 1e-20);
}

TEST_CASE("log_sum_exp") {
    std::vector<double> v{0.0, 0.0};
    CHECK(log_sum_exp(v) == Catch::Approx(std::log(2.0)));
    std::vector<double> big{1000.0, 1000.0, 1000.0};
    CHECK(log_sum_exp(big) == Catch::Approx(1000.0 + std::log(3.0)));
    std::vector<double> one{-5.0};
    CHECK(log_sum_exp(one) == Catch::Approx(-5.0));
}

TEST_CASE("mean_and_error") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    MeanAndError m = mean_and_error(v);
    CHECK(m.mean == Catch::Approx(2.5));
    // sample sd = sqrt(5/3), se = sd/2
    CHECK(m.std_error == Catch::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK_THROWS(mean_and_error(std::vector<double>{}));
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == Catch::Approx(9.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi) ==
          Catch::Approx(2.0).epsilon(1e-10));
    // narrow spike resolved by adaptivity
    double spike = integrate([](double x) { return std::exp(-1e4 * x * x); }, -1.0, 1.0, 1e-12);
    CHECK(spike == Catch::Approx(std::sqrt(kPi / 1e4)).epsilon(1e-8));
}
