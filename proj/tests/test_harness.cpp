#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rangeinfo/plot.hpp"
#include "rangeinfo/sweep.hpp"

using namespace rangeinfo;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::ofstream out(name);
    out << content;
    return name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig tiny_run() {
    RunConfig rc;
    rc.sys.trials = 50;
    rc.sweep_snr_start = 5.0;
    rc.sweep_snr_stop = 7.0;
    rc.sweep_snr_step = 1.0;
    return rc;
}

}  // namespace

TEST_CASE("config file parsing") {
    SECTION("valid file") {
        std::string path = write_temp("cfg_ok.txt",
                                      "# comment\n"
                                      "tbp = 16\n"
                                      "snr_db = 9.5\n"
                                      "swerling = swerling1\n"
                                      "trials = 321\n"
                                      "seed = 99\n"
                                      "theorem_m = 4, 8\n"
                                      "theorem_epsilon = 0.25\n"
                                      "sweep_snr_step = 0.5\n");
        RunConfig rc = parse_config_file(path);
        CHECK(rc.sys.tbp == 16);
        CHECK(rc.sys.snr_db == 9.5);
        CHECK(rc.sys.swerling == Swerling::Sw1);
        CHECK(rc.sys.trials == 321);
        CHECK(rc.sys.seed == 99);
        CHECK(rc.theorem_m == std::vector<int>{4, 8});
        CHECK(rc.theorem_epsilon == std::vector<double>{0.25});
        CHECK(rc.sweep_snr_step == 0.5);
        std::remove(path.c_str());
    }
    SECTION("unknown key reports the line") {
        std::string path = write_temp("cfg_bad.txt", "tbp = 16\nbogus = 1\n");
        try {
            parse_config_file(path);
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            std::string msg = e.what();
            CHECK(msg.find("config_parse") != std::string::npos);
            CHECK(msg.find(":2:") != std::string::npos);
            CHECK(msg.find("bogus") != std::string::npos);
        }
        std::remove(path.c_str());
    }
    SECTION("bad value reports the key") {
        std::string path = write_temp("cfg_bad2.txt", "trials = lots\n");
        CHECK_THROWS_AS(parse_config_file(path), std::runtime_error);
        std::remove(path.c_str());
    }
    SECTION("invalid field values are rejected after parsing") {
        std::string path = write_temp("cfg_bad3.txt", "tbp = 2\n");
        CHECK_THROWS(parse_config_file(path));
        std::remove(path.c_str());
    }
    SECTION("missing file") { CHECK_THROWS(parse_config_file("no_such_config.txt")); }
}

TEST_CASE("default sweep lattice has 26 points") {
    RunConfig rc;
    std::vector<double> pts = rc.sweep_points();
    REQUIRE(pts.size() == 26);
    CHECK(pts.front() == -5.0);
    CHECK(pts.back() == 20.0);
}

TEST_CASE("sweep CSV round trip and determinism") {
    RunConfig rc = tiny_run();
    std::vector<SweepRecord> rec = run_sweep(rc);
    REQUIRE(rec.size() == 3);
    write_sweep_csv(rec, "sweep_a.csv");
    std::vector<SweepRecord> rec2 = run_sweep(rc);
    write_sweep_csv(rec2, "sweep_b.csv");
    CHECK(slurp("sweep_a.csv") == slurp("sweep_b.csv"));

    std::vector<SweepRecord> back = read_sweep_csv("sweep_a.csv");
    REQUIRE(back.size() == rec.size());
    CHECK(back[1].snr_db == rec[1].snr_db);
    CHECK(back[1].ri_bits == rec[1].ri_bits);
    CHECK(back[1].mse_sap == rec[1].mse_sap);
    CHECK(back[1].trials == rec[1].trials);

    SECTION("different seed changes the records") {
        RunConfig other = tiny_run();
        other.sys.seed = 43;
        std::vector<SweepRecord> rec3 = run_sweep(other);
        CHECK(rec3[0].ri_bits != rec[0].ri_bits);
    }
    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
}

TEST_CASE("unknown CSV schema is rejected") {
    write_temp("sweep_bad.csv", "# sweep-csv v99\nsnr_db\n1\n");
    CHECK_THROWS(read_sweep_csv("sweep_bad.csv"));
    std::remove("sweep_bad.csv");
}

TEST_CASE("per-record physical sanity of a tiny sweep") {
    RunConfig rc = tiny_run();
    for (const SweepRecord& r : run_sweep(rc)) {
        CHECK(r.ee_mc > 0.0);
        CHECK(r.ee_closed > 0.0);
        CHECK(r.crb_value > 0.0);
        CHECK(r.zzb_value > 0.0);
        CHECK(r.mse_map >= 0.0);
        CHECK(r.ri_bits > 0.0);
        CHECK(r.trials == 50);
    }
}

TEST_CASE("posterior demo emits a grid plus annotations") {
    RunConfig rc = tiny_run();
    PosteriorDemo d = run_posterior_demo(rc, 12.0);
    CHECK(d.grid.size() == 1024);
    CHECK(d.stats.snr_db == 12.0);
    write_posterior_demo_csv(d, "demo.csv");
    std::string text = slurp("demo.csv");
    CHECK(text.find("# posterior-demo-csv v1") != std::string::npos);
    CHECK(text.find("ri_bits=") != std::string::npos);
    std::remove("demo.csv");
}

TEST_CASE("plot emission from a sweep CSV") {
    RunConfig rc = tiny_run();
    write_sweep_csv(run_sweep(rc), "sweep_plot.csv");
    std::filesystem::create_directories("plots_test");
    std::vector<std::string> files = emit_plots("sweep_plot.csv", "plots_test");
    REQUIRE(files.size() == 3);
    for (const std::string& f : files) {
        std::string svg = slurp(f);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("polyline") != std::string::npos);
    }
    SECTION("empty CSV produces an error and no files") {
        write_temp("sweep_empty.csv", std::string(kSweepCsvSchema) + "\n");
        std::filesystem::create_directories("plots_empty");
        CHECK_THROWS(emit_plots("sweep_empty.csv", "plots_empty"));
        CHECK(std::filesystem::is_empty("plots_empty"));
        std::filesystem::remove_all("plots_empty");
        std::remove("sweep_empty.csv");
    }
    std::filesystem::remove_all("plots_test");
    std::remove("sweep_plot.csv");
}

TEST_CASE("theorem suite lattice shape") {
    RunConfig rc;
    rc.sys.snr_db = 10.0;
    rc.theorem_m = {2, 4};
    rc.theorem_epsilon = {0.5};
    rc.theorem_trials = 20;
    rc.ref_trials = 300;
    std::string dir = "suite_cache_test";
    TheoremSuite s = run_theorem_suite(rc, dir);
    REQUIRE(s.reports.size() == 2);
    CHECK(s.reports[0].m == 2);
    CHECK(s.reports[1].m == 4);
    write_theorem_csv(s, "theorem_test.csv");
    std::string text = slurp("theorem_test.csv");
    CHECK(text.find("# theorem-csv v1") != std::string::npos);
    CHECK(text.find("i_xy=") != std::string::npos);
    std::remove("theorem_test.csv");
    std::filesystem::remove_all(dir);
}
