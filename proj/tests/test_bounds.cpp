#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rangeinfo/bounds.hpp"
#include "rangeinfo/info_metrics.hpp"

using namespace rangeinfo;

TEST_CASE("reciprocal-curvature bound") {
    CHECK(crb(10.0) == Catch::Approx(0.030396).margin(1e-5));
    CHECK(crb(10.0) / crb(100.0) == Catch::Approx(10.0).epsilon(1e-12));
    // limit of the closed-form entropy error as p_s -> 1
    double rho_sq = 1e6;
    CHECK(ee_closed_form(rho_sq, 16.0).ee_closed == Catch::Approx(crb(rho_sq)).epsilon(1e-9));
    CHECK_THROWS(crb(0.0));
}

TEST_CASE("threshold bound asymptotes") {
    const int n = 16;
    SECTION("low SNR approaches the uniform-prior variance") {
        double v = zzb(1e-6, n);
        CHECK(v == Catch::Approx(n * n / 12.0).epsilon(0.001));
    }
    SECTION("high SNR tracks the asymptotic bound within a small factor") {
        double rho_sq = 100.0;  // 20 dB
        double ratio = zzb(rho_sq, n) / crb(rho_sq);
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
    SECTION("monotone nonincreasing in SNR") {
        double prev = 1e300;
        for (double db = -5.0; db <= 20.0; db += 1.0) {
            double v = zzb(std::pow(10.0, db / 10.0), n);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
    SECTION("dominates the local bound through the threshold region") {
        // the two bounds cross above ~10 dB for this pulse; dominance is a
        // low-to-mid SNR property of this ZZB form
        for (double db = -5.0; db <= 10.0; db += 1.0) {
            double rho_sq = std::pow(10.0, db / 10.0);
            CHECK(crb(rho_sq) <= zzb(rho_sq, n));
        }
    }
    CHECK_THROWS(zzb(1.0, 2));
}

TEST_CASE("bound curves stay positive and finite") {
    for (double db = -5.0; db <= 20.0; db += 5.0) {
        double rho_sq = std::pow(10.0, db / 10.0);
        for (double v : {crb(rho_sq), zzb(rho_sq, 16), ee_closed_form(rho_sq, 16.0).ee_closed}) {
            CHECK(v > 0.0);
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("empirical mse aggregation") {
    std::vector<EstimateRecord> zero{make_estimate_record(EstimatorKind::MAP, 1.0, 1.0),
                                     make_estimate_record(EstimatorKind::MAP, -2.0, -2.0)};
    CHECK(empirical_mse(zero).mean == 0.0);

    std::vector<EstimateRecord> constant;
    for (int i = 0; i < 10; ++i)
        constant.push_back(make_estimate_record(EstimatorKind::SAP, 3.5, 3.0));
    MeanAndError m = empirical_mse(constant);
    CHECK(m.mean == Catch::Approx(0.25));
    CHECK(m.std_error == Catch::Approx(0.0).margin(1e-15));

    CHECK_THROWS(empirical_mse({}));
}
