#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rangeinfo/estimators.hpp"
#include "rangeinfo/info_metrics.hpp"

using namespace rangeinfo;

TEST_CASE("mode estimators find the noise-free truth") {
    SystemConfig cfg;
    cfg.snr_db = 15.0;
    ScatterCoefficient sc{known_alpha(cfg), 0.2};
    for (double x0 : {-3.8, 0.1, 5.55}) {
        ReceivedSignal y = generate_echo_noiseless(cfg, x0, sc);
        PosteriorGrid p = posterior_grid(y, cfg);
        CHECK(std::abs(map_estimate(p) - x0) <= cfg.cell_width());
        CHECK(std::abs(mle_estimate(y, cfg) - x0) <= cfg.cell_width());
    }
}

TEST_CASE("flat posterior flags degeneracy") {
    SystemConfig cfg;
    Rng rng(7);
    ReceivedSignal y = generate_echo(cfg, 0.0, rng);
    PosteriorGrid p = posterior_grid_alpha(y, cfg, 0.0);
    PeakEstimate e = map_estimate_detail(p);
    CHECK(e.degenerate);
    CHECK(e.x_hat == Catch::Approx(0.5 * (p.xs.front() + p.xs.back())));
}

TEST_CASE("posterior mode and likelihood mode coincide under the uniform prior") {
    SystemConfig cfg;
    cfg.snr_db = 8.0;
    for (int t = 0; t < 200; ++t) {
        Rng rng = Rng::for_trial(77, static_cast<std::uint64_t>(t));
        double x0 = rng.uniform(-6.4, 6.4);
        ReceivedSignal y = generate_echo(cfg, x0, rng);
        PosteriorGrid p = posterior_grid(y, cfg);
        CHECK(map_estimate(p) == Catch::Approx(mle_estimate(y, cfg)).margin(1e-12));
    }
}

namespace {

double ks_statistic(std::vector<double> draws, const PosteriorGrid& p) {
    std::sort(draws.begin(), draws.end());
    // grid CDF at cell right edges
    std::vector<double> cdf(p.size());
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        c += p.density[i] * p.cell_width;
        cdf[i] = c;
    }
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        double x = draws[i];
        double right = (x - (p.xs.front() - 0.5 * p.cell_width)) / p.cell_width;
        long cell = static_cast<long>(std::floor(right));
        double frac = right - cell;
        double model;
        if (cell < 0) model = 0.0;
        else if (cell >= static_cast<long>(p.size())) model = 1.0;
        else model = (cell == 0 ? 0.0 : cdf[static_cast<std::size_t>(cell) - 1]) +
                     frac * p.density[static_cast<std::size_t>(cell)] * p.cell_width;
        double emp_hi = static_cast<double>(i + 1) / draws.size();
        double emp_lo = static_cast<double>(i) / draws.size();
        ks = std::max(ks, std::max(std::abs(emp_hi - model), std::abs(emp_lo - model)));
    }
    return ks;
}

}  // namespace

TEST_CASE("sampling estimator reproduces the grid distribution") {
    SystemConfig cfg;
    const int n = 100000;

    SECTION("uniform posterior") {
        Rng rng(9);
        ReceivedSignal y = generate_echo(cfg, 0.0, rng);
        PosteriorGrid p = posterior_grid_alpha(y, cfg, 0.0);
        std::vector<double> draws(n);
        for (auto& d : draws) d = sap_estimate(p, rng);
        CHECK(ks_statistic(std::move(draws), p) < 1.63 / std::sqrt(static_cast<double>(n)));
    }
    SECTION("structured posterior at moderate SNR") {
        Rng rng(15);
        SystemConfig c = cfg;
        c.snr_db = 6.0;
        ReceivedSignal y = generate_echo(c, 1.3, rng);
        PosteriorGrid p = posterior_grid(y, c);
        std::vector<double> draws(n);
        for (auto& d : draws) d = sap_estimate(p, rng);
        CHECK(ks_statistic(std::move(draws), p) < 1.63 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("sampling from a concentrated posterior stays at the peak") {
    SystemConfig cfg;
    cfg.snr_db = 15.0;
    ScatterCoefficient sc{known_alpha(cfg) * 40.0, 0.0};  // peak width well under one cell
    ReceivedSignal y = generate_echo_noiseless(cfg, 2.0, sc);
    PosteriorGrid p = posterior_grid_alpha(y, cfg, sc.amplitude);
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) CHECK(std::abs(sap_estimate(p, rng) - 2.0) <= p.cell_width);
}

TEST_CASE("sampling is deterministic under a fixed handle") {
    SystemConfig cfg;
    cfg.snr_db = 6.0;
    Rng gen(33);
    ReceivedSignal y = generate_echo(cfg, -1.0, gen);
    PosteriorGrid p = posterior_grid(y, cfg);
    Rng a(55), b(55);
    for (int i = 0; i < 200; ++i) CHECK(sap_estimate(p, a) == sap_estimate(p, b));
}

TEST_CASE("sampling error decomposes into spread plus mode offset") {
    // on a fixed posterior, E[(xhat_sap - x0)^2] = Var(X|Y) + (E[X|Y] - x0)^2
    SystemConfig cfg;
    cfg.snr_db = 7.0;
    Rng gen(61);
    double x0 = 0.9;
    ReceivedSignal y = generate_echo(cfg, x0, gen);
    PosteriorGrid p = posterior_grid(y, cfg);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean += p.xs[i] * p.density[i] * p.cell_width;
        second += p.xs[i] * p.xs[i] * p.density[i] * p.cell_width;
    }
    second += p.cell_width * p.cell_width / 12.0;  // within-cell jitter variance
    double expect = second - 2.0 * mean * x0 + x0 * x0;
    const int n = 200000;
    Rng rng(67);
    double mse = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = sap_estimate(p, rng) - x0;
        mse += d * d;
    }
    mse /= n;
    CHECK(mse == Catch::Approx(expect).epsilon(0.02));
}

TEST_CASE("estimate records") {
    EstimateRecord r = make_estimate_record(EstimatorKind::MLE, 1.5, 1.0);
    CHECK(r.sq_err == Catch::Approx(0.25));
    CHECK(r.x_hat == 1.5);
    CHECK(r.x_true == 1.0);
}
