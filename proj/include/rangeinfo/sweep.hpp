#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangeinfo/bounds.hpp"
#include "rangeinfo/config.hpp"
#include "rangeinfo/estimators.hpp"
#include "rangeinfo/info_metrics.hpp"
#include "rangeinfo/posterior.hpp"
#include "rangeinfo/rng.hpp"
#include "rangeinfo/signal_model.hpp"
#include "rangeinfo/threads.hpp"
#include "rangeinfo/typicality.hpp"

namespace rangeinfo {

/// Everything a run needs: the statistical model plus sweep/verification
/// ranges. One config file drives every subcommand.
struct RunConfig {
    SystemConfig sys;
    double sweep_snr_start = -5.0;
    double sweep_snr_stop = 20.0;
    double sweep_snr_step = 1.0;
    std::vector<int> theorem_m{8, 32, 128};
    std::vector<double> theorem_epsilon{0.3, 0.5};
    int theorem_trials = 1000;
    int ref_trials = 20000;
    int threads = 1;

    std::vector<double> sweep_points() const {
        if (!(sweep_snr_step > 0.0))
            throw std::invalid_argument("config: sweep_snr_step must be positive");
        std::vector<double> pts;
        for (double s = sweep_snr_start; s <= sweep_snr_stop + 1e-9; s += sweep_snr_step)
            pts.push_back(s);
        return pts;
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

/// key=value config file; '#' starts a comment. Unknown keys are errors so
/// typos do not silently fall back to defaults.
inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config_parse: cannot open " + path);
    RunConfig rc;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("config_parse: " + path + ":" + std::to_string(lineno) + ": " +
                                 what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::trim(line);
        auto hash = s.find('#');
        if (hash != std::string::npos) s = detail::trim(s.substr(0, hash));
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        std::string key = detail::trim(s.substr(0, eq));
        std::string val = detail::trim(s.substr(eq + 1));
        try {
            if (key == "tbp") rc.sys.tbp = std::stoi(val);
            else if (key == "snr_db") rc.sys.snr_db = std::stod(val);
            else if (key == "swerling") {
                if (val == "swerling0" || val == "0") rc.sys.swerling = Swerling::Sw0;
                else if (val == "swerling1" || val == "1") rc.sys.swerling = Swerling::Sw1;
                else fail("swerling must be swerling0 or swerling1");
            } else if (key == "grid_points_per_sample") rc.sys.grid_points_per_sample = std::stoi(val);
            else if (key == "n0") rc.sys.n0 = std::stod(val);
            else if (key == "trials") rc.sys.trials = std::stoi(val);
            else if (key == "seed") rc.sys.seed = std::stoull(val);
            else if (key == "truth_span") rc.sys.truth_span = std::stod(val);
            else if (key == "sweep_snr_start") rc.sweep_snr_start = std::stod(val);
            else if (key == "sweep_snr_stop") rc.sweep_snr_stop = std::stod(val);
            else if (key == "sweep_snr_step") rc.sweep_snr_step = std::stod(val);
            else if (key == "theorem_m") {
                rc.theorem_m.clear();
                for (const auto& p : detail::split(val, ','))
                    rc.theorem_m.push_back(std::stoi(detail::trim(p)));
            } else if (key == "theorem_epsilon") {
                rc.theorem_epsilon.clear();
                for (const auto& p : detail::split(val, ','))
                    rc.theorem_epsilon.push_back(std::stod(detail::trim(p)));
            } else if (key == "theorem_trials") rc.theorem_trials = std::stoi(val);
            else if (key == "ref_trials") rc.ref_trials = std::stoi(val);
            else if (key == "threads") rc.threads = std::stoi(val);
            else fail("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            fail("cannot parse value '" + val + "' for key '" + key + "'");
        } catch (const std::out_of_range&) {
            fail("value out of range for key '" + key + "'");
        }
    }
    rc.sys.validate();
    return rc;
}

/// Per-SNR aggregate of one sweep point.
struct SweepRecord {
    double snr_db = 0.0;
    double ri_bits = 0.0;
    double ri_se_bits = 0.0;
    double ee_mc = 0.0;
    double ee_closed = 0.0;
    double crb_value = 0.0;
    double zzb_value = 0.0;
    double mse_map = 0.0, mse_map_se = 0.0;
    double mse_mle = 0.0, mse_mle_se = 0.0;
    double mse_sap = 0.0, mse_sap_se = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// distinct trial streams per SNR point: fold the millidecibel value into the seed
inline std::uint64_t snr_stream_seed(std::uint64_t seed, double snr_db) {
    auto key = static_cast<std::int64_t>(std::llround(snr_db * 1000.0));
    return seed ^ (static_cast<std::uint64_t>(key) * 0x9e3779b97f4a7c15ULL + 0x51776565ULL);
}

}  // namespace detail

/// One sweep point: RI, entropies, estimator MSEs, and reference bounds, all
/// from the same per-trial posteriors.
inline SweepRecord run_sweep_point(const SystemConfig& base, double snr_db, int threads = 1) {
    SystemConfig cfg = base;
    cfg.snr_db = snr_db;
    cfg.validate();
    std::size_t n = static_cast<std::size_t>(cfg.trials);
    std::vector<double> h(n), sq_map(n), sq_mle(n), sq_sap(n);
    std::uint64_t stream = detail::snr_stream_seed(cfg.seed, snr_db);
    parallel_for(n, threads, [&](std::size_t t) {
        Rng rng = Rng::for_trial(stream, t);
        double x0 = draw_truth(cfg, rng);
        ReceivedSignal y = generate_echo(cfg, x0, rng);
        PosteriorGrid p = posterior_grid(y, cfg);
        h[t] = grid_entropy(p);
        double map = map_estimate(p);
        double mle = mle_estimate(y, cfg);
        double sap = sap_estimate(p, rng);
        sq_map[t] = (map - x0) * (map - x0);
        sq_mle[t] = (mle - x0) * (mle - x0);
        sq_sap[t] = (sap - x0) * (sap - x0);
    });
    MeanAndError mh = mean_and_error(h);
    MeanAndError mm = mean_and_error(sq_map);
    MeanAndError ml = mean_and_error(sq_mle);
    MeanAndError ms = mean_and_error(sq_sap);
    SweepRecord r;
    r.snr_db = snr_db;
    double h_bits = mh.mean / kLn2;
    r.ri_bits = std::log2(static_cast<double>(cfg.tbp)) - h_bits;
    r.ri_se_bits = mh.std_error / kLn2;
    r.ee_mc = entropy_error(h_bits);
    r.ee_closed = ee_closed_form(cfg.rho_sq(), static_cast<double>(cfg.tbp)).ee_closed;
    r.crb_value = crb(cfg.rho_sq());
    r.zzb_value = zzb(cfg.rho_sq(), cfg.tbp);
    r.mse_map = mm.mean;
    r.mse_map_se = mm.std_error;
    r.mse_mle = ml.mean;
    r.mse_mle_se = ml.std_error;
    r.mse_sap = ms.mean;
    r.mse_sap_se = ms.std_error;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    return r;
}

inline std::vector<SweepRecord> run_sweep(const RunConfig& rc) {
    std::vector<double> pts = rc.sweep_points();
    std::vector<SweepRecord> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        out[i] = run_sweep_point(rc.sys, pts[i], rc.threads);
    return out;
}

inline constexpr const char* kSweepCsvSchema = "# sweep-csv v1";

inline void write_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open " + path);
    out.precision(17);
    out << kSweepCsvSchema << '\n';
    out << "# variance columns in normalized range squared; dB means 10*log10\n";
    out << "snr_db,ri_bits,ri_se_bits,ee_mc,ee_closed,crb,zzb,"
           "mse_map,mse_map_se,mse_mle,mse_mle_se,mse_sap,mse_sap_se,trials,seed\n";
    for (const auto& r : records) {
        out << r.snr_db << ',' << r.ri_bits << ',' << r.ri_se_bits << ',' << r.ee_mc << ','
            << r.ee_closed << ',' << r.crb_value << ',' << r.zzb_value << ',' << r.mse_map << ','
            << r.mse_map_se << ',' << r.mse_mle << ',' << r.mse_mle_se << ',' << r.mse_sap << ','
            << r.mse_sap_se << ',' << r.trials << ',' << r.seed << '\n';
    }
}

/// Reads back a sweep CSV (used by the plotting subcommand).
inline std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvSchema)
        throw std::runtime_error("io: unknown sweep CSV schema in " + path);
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("snr_db,", 0) == 0) continue;  // header row
        std::vector<std::string> f = detail::split(line, ',');
        if (f.size() != 15) throw std::runtime_error("io: malformed sweep CSV row");
        SweepRecord r;
        r.snr_db = std::stod(f[0]);
        r.ri_bits = std::stod(f[1]);
        r.ri_se_bits = std::stod(f[2]);
        r.ee_mc = std::stod(f[3]);
        r.ee_closed = std::stod(f[4]);
        r.crb_value = std::stod(f[5]);
        r.zzb_value = std::stod(f[6]);
        r.mse_map = std::stod(f[7]);
        r.mse_map_se = std::stod(f[8]);
        r.mse_mle = std::stod(f[9]);
        r.mse_mle_se = std::stod(f[10]);
        r.mse_sap = std::stod(f[11]);
        r.mse_sap_se = std::stod(f[12]);
        r.trials = std::stoi(f[13]);
        r.seed = std::stoull(f[14]);
        out.push_back(r);
    }
    return out;
}

/// One posterior snapshot plus sweep-point annotations, for the demo plots.
struct PosteriorDemo {
    PosteriorGrid grid;
    double x0 = 0.0;
    SweepRecord stats;
};

inline PosteriorDemo run_posterior_demo(const RunConfig& rc, double snr_db) {
    SystemConfig cfg = rc.sys;
    cfg.snr_db = snr_db;
    cfg.validate();
    PosteriorDemo d;
    Rng rng = Rng::for_trial(detail::snr_stream_seed(cfg.seed, snr_db), 0);
    d.x0 = draw_truth(cfg, rng);
    ReceivedSignal y = generate_echo(cfg, d.x0, rng);
    d.grid = posterior_grid(y, cfg);
    d.stats = run_sweep_point(cfg, snr_db, rc.threads);
    return d;
}

inline void write_posterior_demo_csv(const PosteriorDemo& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open " + path);
    out.precision(17);
    out << "# posterior-demo-csv v1\n";
    out << "# snr_db=" << d.stats.snr_db << " x0=" << d.x0 << '\n';
    out << "# ri_bits=" << d.stats.ri_bits << " ee_mc=" << d.stats.ee_mc
        << " ee_closed=" << d.stats.ee_closed << " mse_mle=" << d.stats.mse_mle << '\n';
    out << "x,density\n";
    for (std::size_t i = 0; i < d.grid.size(); ++i)
        out << d.grid.xs[i] << ',' << d.grid.density[i] << '\n';
}

/// Full (m, epsilon) lattice of typicality runs sharing one reference set.
struct TheoremSuite {
    EntropyReferences refs;
    std::vector<TypicalityReport> reports;
};

inline TheoremSuite run_theorem_suite(const RunConfig& rc, const std::string& cache_dir) {
    TheoremSuite s;
    s.refs = entropy_references_cached(rc.sys, rc.ref_trials, cache_dir, rc.threads);
    for (double eps : rc.theorem_epsilon)
        for (int m : rc.theorem_m)
            s.reports.push_back(
                run_theorem_trial(rc.sys, m, eps, rc.theorem_trials, s.refs, rc.threads));
    return s;
}

inline void write_theorem_csv(const TheoremSuite& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open " + path);
    out.precision(17);
    out << "# theorem-csv v1\n";
    out << "# entropies in nats; i_xy=" << s.refs.i_xy << " se=" << s.refs.i_xy_se
        << " h_x=" << s.refs.h_x << " h_x_given_y=" << s.refs.h_x_given_y
        << " h_y=" << s.refs.h_y << '\n';
    out << "m,epsilon,p_fail,empirical_entropy,empirical_entropy_se,empirical_info,"
           "fano_lhs,fano_rhs,successes,trials\n";
    for (const auto& r : s.reports) {
        out << r.m << ',' << r.epsilon << ',' << r.p_fail << ',' << r.empirical_entropy << ','
            << r.empirical_entropy_se << ',' << r.empirical_info << ',' << r.fano_lhs << ','
            << r.fano_rhs << ',' << r.successes << ',' << r.trials << '\n';
    }
}

}  // namespace rangeinfo
