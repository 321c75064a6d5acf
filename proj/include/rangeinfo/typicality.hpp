#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangeinfo/config.hpp"
#include "rangeinfo/estimators.hpp"
#include "rangeinfo/info_metrics.hpp"
#include "rangeinfo/math.hpp"
#include "rangeinfo/posterior.hpp"
#include "rangeinfo/rng.hpp"
#include "rangeinfo/signal_model.hpp"
#include "rangeinfo/threads.hpp"

namespace rangeinfo {

/// True entropies of the snapshot channel, estimated once and shared by all
/// typicality tests. All values in nats.
struct EntropyReferences {
    double h_x = 0.0;           // ln N, exact
    double h_y = 0.0;
    double h_y_se = 0.0;
    double h_x_given_y = 0.0;
    double h_x_given_y_se = 0.0;
    double h_xy = 0.0;          // h_y + h_x_given_y by construction
    double h_xy_se = 0.0;
    double i_xy = 0.0;          // h_x - h_x_given_y
    double i_xy_se = 0.0;
    int ref_trials = 0;
    std::uint64_t cfg_hash = 0;
};

/// Exact log-density ln p(y|x) at one range hypothesis, constants kept.
inline double log_likelihood_full_point(const ReceivedSignal& y, double x,
                                        const SystemConfig& cfg) {
    if (cfg.swerling == Swerling::Sw0)
        return log_likelihood_sw0(y, x, known_alpha(cfg), cfg.n0, true);
    return log_likelihood_sw1_full(y, x, cfg.n0, cfg.rho_sq());
}

/// ln p(y) = ln integral p(y|x) pi(x) dx on the grid; with pi = 1/N and cell
/// width N/M this is logsumexp(grid) - ln M.
inline double log_marginal_y(const std::vector<double>& ll_full, const SystemConfig& cfg) {
    return log_sum_exp(ll_full) - std::log(static_cast<double>(cfg.grid_size()));
}

/// Monte Carlo estimate of the snapshot entropies. The truth is drawn uniform
/// over the FULL interval so that h(X) = ln N is exact.
inline EntropyReferences entropy_references(const SystemConfig& cfg, int ref_trials,
                                            int threads = 1) {
    if (ref_trials < 100)
        throw std::invalid_argument("entropy_references: ref_trials too small");
    SystemConfig c = cfg;
    c.truth_span = 1.0;
    c.validate();
    std::vector<double> neg_log_py(static_cast<std::size_t>(ref_trials));
    std::vector<double> h_post(static_cast<std::size_t>(ref_trials));
    parallel_for(neg_log_py.size(), threads, [&](std::size_t t) {
        Rng rng = Rng::for_trial(c.seed ^ 0x7265667374726d73ULL, t);
        double x0 = rng.uniform(-c.half_width(), c.half_width());
        ReceivedSignal y = generate_echo(c, x0, rng);
        std::vector<double> ll = log_likelihood_grid_full(y, c);
        neg_log_py[t] = -log_marginal_y(ll, c);
        h_post[t] = grid_entropy(posterior_from_log_likelihood(std::move(ll), c));
    });
    MeanAndError my = mean_and_error(neg_log_py);
    MeanAndError mh = mean_and_error(h_post);
    EntropyReferences r;
    r.h_x = std::log(static_cast<double>(c.tbp));
    r.h_y = my.mean;
    r.h_y_se = my.std_error;
    r.h_x_given_y = mh.mean;
    r.h_x_given_y_se = mh.std_error;
    r.h_xy = r.h_y + r.h_x_given_y;
    r.h_xy_se = std::sqrt(my.std_error * my.std_error + mh.std_error * mh.std_error);
    r.i_xy = r.h_x - r.h_x_given_y;
    r.i_xy_se = mh.std_error;
    r.ref_trials = ref_trials;
    r.cfg_hash = config_hash(c);
    return r;
}

// -------- disk cache (plain text, written atomically) --------

inline std::optional<EntropyReferences> load_entropy_references(const std::string& path,
                                                                std::uint64_t cfg_hash,
                                                                int ref_trials) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string header;
    std::getline(in, header);
    if (header != "# entropy-refs-cache v1") return std::nullopt;
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    try {
        if (std::stoull(kv.at("cfg_hash")) != cfg_hash) return std::nullopt;
        if (std::stoi(kv.at("ref_trials")) != ref_trials) return std::nullopt;
        EntropyReferences r;
        r.h_x = std::stod(kv.at("h_x"));
        r.h_y = std::stod(kv.at("h_y"));
        r.h_y_se = std::stod(kv.at("h_y_se"));
        r.h_x_given_y = std::stod(kv.at("h_x_given_y"));
        r.h_x_given_y_se = std::stod(kv.at("h_x_given_y_se"));
        r.h_xy = std::stod(kv.at("h_xy"));
        r.h_xy_se = std::stod(kv.at("h_xy_se"));
        r.i_xy = std::stod(kv.at("i_xy"));
        r.i_xy_se = std::stod(kv.at("i_xy_se"));
        r.ref_trials = ref_trials;
        r.cfg_hash = cfg_hash;
        if (!std::isfinite(r.h_y) || !std::isfinite(r.h_x_given_y)) return std::nullopt;
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline void save_entropy_references(const EntropyReferences& r, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("save_entropy_references: cannot open " + tmp);
        out.precision(17);
        out << "# entropy-refs-cache v1\n";
        out << "cfg_hash=" << r.cfg_hash << '\n';
        out << "ref_trials=" << r.ref_trials << '\n';
        out << "h_x=" << r.h_x << '\n';
        out << "h_y=" << r.h_y << '\n';
        out << "h_y_se=" << r.h_y_se << '\n';
        out << "h_x_given_y=" << r.h_x_given_y << '\n';
        out << "h_x_given_y_se=" << r.h_x_given_y_se << '\n';
        out << "h_xy=" << r.h_xy << '\n';
        out << "h_xy_se=" << r.h_xy_se << '\n';
        out << "i_xy=" << r.i_xy << '\n';
        out << "i_xy_se=" << r.i_xy_se << '\n';
    }
    std::filesystem::rename(tmp, path);
}

inline EntropyReferences entropy_references_cached(const SystemConfig& cfg, int ref_trials,
                                                   const std::string& cache_dir,
                                                   int threads = 1) {
    SystemConfig c = cfg;
    c.truth_span = 1.0;
    std::uint64_t h = config_hash(c);
    std::filesystem::create_directories(cache_dir);
    std::ostringstream name;
    name << cache_dir << "/refs_" << std::hex << h << std::dec << "_" << ref_trials << ".txt";
    if (auto cached = load_entropy_references(name.str(), h, ref_trials)) return *cached;
    EntropyReferences r = entropy_references(cfg, ref_trials, threads);
    save_entropy_references(r, name.str());
    return r;
}

// -------- m-extension machinery --------

/// One m-extension draw plus all the log-densities the typicality conditions
/// need. Log-densities of the product channel accumulate per snapshot.
struct ExtensionTrial {
    int m = 0;
    std::vector<double> x_seq;
    std::vector<ReceivedSignal> y_seq;
    std::vector<double> xhat_seq;
    double log_pi_x = 0.0;          // ln pi(x^m) = -m ln N
    double log_p_y = 0.0;           // sum ln p(y_i)
    double log_p_xy = 0.0;          // ln pi(x^m) + sum ln p(y_i|x_i)
    double log_p_xy_hat = 0.0;      // same with xhat in place of x
    double log_p_xhat_given_y = 0.0;  // sum ln p(xhat_i|y_i)
};

inline bool is_typical_x(const std::vector<double>& x_seq, double epsilon,
                         const EntropyReferences& refs, int tbp) {
    double half = tbp / 2.0;
    for (double x : x_seq)
        if (!(x >= -half) || !(x < half)) return false;
    // uniform prior: -(1/m) ln pi(x^m) = ln N for every in-interval sequence
    double emp = std::log(static_cast<double>(tbp));
    return std::abs(emp - refs.h_x) < epsilon;
}

/// Def.-style joint typicality: marginal-x, marginal-y, and joint empirical
/// entropy rates all within epsilon (nats) of the references.
inline bool is_jointly_typical(double log_pi_x, double log_p_y, double log_p_xy, int m,
                               double epsilon, const EntropyReferences& refs) {
    double inv_m = 1.0 / static_cast<double>(m);
    if (std::abs(-inv_m * log_pi_x - refs.h_x) >= epsilon) return false;
    if (std::abs(-inv_m * log_p_y - refs.h_y) >= epsilon) return false;
    return std::abs(-inv_m * log_p_xy - refs.h_xy) < epsilon;
}

inline bool is_jointly_typical(const ExtensionTrial& t, double epsilon,
                               const EntropyReferences& refs) {
    return is_jointly_typical(t.log_pi_x, t.log_p_y, t.log_p_xy, t.m, epsilon, refs);
}

/// Component-wise posterior draws from each snapshot of the extension.
inline std::vector<double> sap_sequence_estimate(const std::vector<ReceivedSignal>& y_seq,
                                                 const SystemConfig& cfg, Rng& rng) {
    std::vector<double> xhat(y_seq.size());
    for (std::size_t i = 0; i < y_seq.size(); ++i) {
        PosteriorGrid p = posterior_from_log_likelihood(log_likelihood_grid_full(y_seq[i], cfg), cfg);
        xhat[i] = sap_estimate(p, rng);
    }
    return xhat;
}

namespace detail {

inline std::size_t grid_cell_index(double x, const SystemConfig& cfg) {
    double idx = (x + cfg.half_width()) / cfg.cell_width();
    long i = static_cast<long>(std::floor(idx));
    if (i < 0) i = 0;
    if (i >= cfg.grid_size()) i = cfg.grid_size() - 1;
    return static_cast<std::size_t>(i);
}

}  // namespace detail

/// Draws one m-extension from the true channel, runs the sampling estimator
/// on it, and fills every log-density in compensated order.
inline ExtensionTrial simulate_extension(const SystemConfig& cfg, int m, Rng& rng) {
    SystemConfig c = cfg;
    c.truth_span = 1.0;
    ExtensionTrial t;
    t.m = m;
    t.x_seq.resize(static_cast<std::size_t>(m));
    t.xhat_seq.resize(static_cast<std::size_t>(m));
    t.y_seq.reserve(static_cast<std::size_t>(m));
    double log_n = std::log(static_cast<double>(c.tbp));
    double sum_py = 0.0, sum_pyx = 0.0, sum_pyxhat = 0.0, sum_post = 0.0;
    for (int i = 0; i < m; ++i) {
        double x0 = rng.uniform(-c.half_width(), c.half_width());
        t.x_seq[static_cast<std::size_t>(i)] = x0;
        ReceivedSignal y = generate_echo(c, x0, rng);
        std::vector<double> ll = log_likelihood_grid_full(y, c);
        sum_py += log_marginal_y(ll, c);
        sum_pyx += log_likelihood_full_point(y, x0, c);
        PosteriorGrid p = posterior_from_log_likelihood(std::move(ll), c);
        double xhat = sap_estimate(p, rng);
        t.xhat_seq[static_cast<std::size_t>(i)] = xhat;
        sum_pyxhat += log_likelihood_full_point(y, xhat, c);
        sum_post += p.log_density[detail::grid_cell_index(xhat, c)];
        t.y_seq.push_back(std::move(y));
    }
    t.log_pi_x = -static_cast<double>(m) * log_n;
    t.log_p_y = sum_py;
    t.log_p_xy = t.log_pi_x + sum_pyx;
    t.log_p_xy_hat = t.log_pi_x + sum_pyxhat;
    t.log_p_xhat_given_y = sum_post;
    return t;
}

/// Per-(m, epsilon) verification result. Entropy and information rates in
/// nats, conditioned on successful trials.
struct TypicalityReport {
    int m = 0;
    double epsilon = 0.0;
    double p_fail = 0.0;
    double empirical_entropy = 0.0;
    double empirical_entropy_se = 0.0;
    double empirical_info = 0.0;
    double fano_lhs = 0.0;
    double fano_rhs = 0.0;
    int successes = 0;
    int trials = 0;
    bool valid = false;  // false when no trial succeeded
};

/// Runs `trials` independent m-extensions. A trial fails when either the true
/// pair or the estimated pair falls outside the jointly typical set.
inline TypicalityReport run_theorem_trial(const SystemConfig& cfg, int m, double epsilon,
                                          int trials, const EntropyReferences& refs,
                                          int threads = 1) {
    if (m < 1 || m > 256) throw std::invalid_argument("run_theorem_trial: m out of range");
    if (trials < 1 || trials > 2000)
        throw std::invalid_argument("run_theorem_trial: trials out of range");
    std::vector<char> success(static_cast<std::size_t>(trials));
    std::vector<double> per_trial_entropy(static_cast<std::size_t>(trials));
    parallel_for(success.size(), threads, [&](std::size_t t) {
        Rng rng = Rng::for_trial(cfg.seed ^ (0x6578746eULL + static_cast<std::uint64_t>(m)), t);
        ExtensionTrial trial = simulate_extension(cfg, m, rng);
        bool ok_true = is_jointly_typical(trial, epsilon, refs);
        bool ok_hat = is_jointly_typical(trial.log_pi_x, trial.log_p_y, trial.log_p_xy_hat,
                                         m, epsilon, refs);
        success[t] = ok_true && ok_hat;
        per_trial_entropy[t] = -trial.log_p_xhat_given_y / static_cast<double>(m);
    });
    TypicalityReport r;
    r.m = m;
    r.epsilon = epsilon;
    r.trials = trials;
    std::vector<double> good;
    good.reserve(success.size());
    for (std::size_t i = 0; i < success.size(); ++i)
        if (success[i]) good.push_back(per_trial_entropy[i]);
    r.successes = static_cast<int>(good.size());
    r.p_fail = 1.0 - static_cast<double>(r.successes) / static_cast<double>(trials);
    if (!good.empty()) {
        MeanAndError e = mean_and_error(good);
        r.empirical_entropy = e.mean;
        r.empirical_entropy_se = e.std_error;
        r.empirical_info = refs.h_x - e.mean;
        r.fano_lhs = e.mean;  // h(X) - I^(m)
        r.fano_rhs = 1.0 / static_cast<double>(m) + r.p_fail * (refs.h_x + epsilon) +
                     refs.h_x_given_y;
        r.valid = true;
    }
    return r;
}

}  // namespace rangeinfo
