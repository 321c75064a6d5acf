#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangeinfo/sweep.hpp"

namespace rangeinfo {

struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<double> xs;
    std::vector<double> ys;
};

namespace detail {

inline std::string fmt_tick(double v) {
    std::ostringstream os;
    if (std::abs(v) < 1e-12) v = 0.0;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace detail

/// Minimal static SVG line chart: axes, ticks, polylines, legend. Values are
/// plotted as given; callers convert to dB or bits beforehand.
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("plot: no series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::size_t points = 0;
    for (const auto& s : series) {
        if (s.xs.size() != s.ys.size()) throw std::invalid_argument("plot: ragged series");
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
            ++points;
        }
    }
    if (points == 0) throw std::invalid_argument("plot: no finite data points");
    if (xmax - xmin < 1e-12) { xmin -= 1.0; xmax += 1.0; }
    if (ymax - ymin < 1e-12) { ymin -= 1.0; ymax += 1.0; }
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double w = 720, hgt = 480;
    const double ml = 70, mr = 150, mt = 40, mb = 55;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return hgt - mb - (y - ymin) / (ymax - ymin) * (hgt - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hgt
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">" << title
        << "</text>\n";

    const int nticks = 6;
    for (int i = 0; i < nticks; ++i) {
        double fx = xmin + (xmax - xmin) * i / (nticks - 1);
        double fy = ymin + (ymax - ymin) * i / (nticks - 1);
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(fx)
            << "\" y2=\"" << py(ymax) << "\" stroke=\"#dddddd\"/>\n";
        out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(fy) << "\" x2=\"" << px(xmax)
            << "\" y2=\"" << py(fy) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << hgt - mb + 18
            << "\" text-anchor=\"middle\">" << detail::fmt_tick(fx) << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\">" << detail::fmt_tick(fy) << "</text>\n";
    }
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\""
        << hgt - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << hgt - 12
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + hgt - mb) / 2 << "\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << (mt + hgt - mb) / 2 << ")\">" << ylabel << "</text>\n";

    double ly = mt + 10;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        }
        out << "\"/>\n";
        out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 35
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 4 << "\">" << s.label
            << "</text>\n";
        ly += 18;
    }
    out << "</svg>\n";
}

inline double to_db(double v) { return 10.0 * std::log10(v); }

/// Renders the three standard figures from a sweep CSV. Fails without writing
/// anything when the CSV has no data rows.
inline std::vector<std::string> emit_plots(const std::string& csv_path,
                                           const std::string& out_dir) {
    std::vector<SweepRecord> rec = read_sweep_csv(csv_path);
    if (rec.empty()) throw std::runtime_error("plot: no data rows in " + csv_path);
    std::vector<double> snr;
    for (const auto& r : rec) snr.push_back(r.snr_db);
    auto col = [&](auto f) {
        std::vector<double> v;
        for (const auto& r : rec) v.push_back(f(r));
        return v;
    };
    std::vector<std::string> written;

    std::string p1 = out_dir + "/bounds_vs_snr.svg";
    write_svg_plot(p1, "Error bounds and entropy error vs SNR", "SNR (dB)",
                   "variance (dB rel. unit range^2)",
                   {{"EE (MC)", "#d62728", snr, col([](const SweepRecord& r) { return to_db(r.ee_mc); })},
                    {"EE (closed form)", "#ff7f0e", snr, col([](const SweepRecord& r) { return to_db(r.ee_closed); })},
                    {"CRB", "#2ca02c", snr, col([](const SweepRecord& r) { return to_db(r.crb_value); })},
                    {"ZZB", "#1f77b4", snr, col([](const SweepRecord& r) { return to_db(r.zzb_value); })},
                    {"MLE MSE", "#9467bd", snr, col([](const SweepRecord& r) { return to_db(r.mse_mle); })}});
    written.push_back(p1);

    std::string p2 = out_dir + "/ri_vs_snr.svg";
    write_svg_plot(p2, "Range information vs SNR", "SNR (dB)", "information (bits)",
                   {{"RI (MC)", "#1f77b4", snr, col([](const SweepRecord& r) { return r.ri_bits; })}});
    written.push_back(p2);

    std::string p3 = out_dir + "/mse_comparison.svg";
    write_svg_plot(p3, "Estimator MSE vs SNR", "SNR (dB)", "MSE (dB rel. unit range^2)",
                   {{"MAP", "#2ca02c", snr, col([](const SweepRecord& r) { return to_db(r.mse_map); })},
                    {"MLE", "#9467bd", snr, col([](const SweepRecord& r) { return to_db(r.mse_mle); })},
                    {"SAP", "#d62728", snr, col([](const SweepRecord& r) { return to_db(r.mse_sap); })},
                    {"CRB", "#1f77b4", snr, col([](const SweepRecord& r) { return to_db(r.crb_value); })}});
    written.push_back(p3);
    return written;
}

/// Single-posterior demo figure.
inline void emit_posterior_plot(const PosteriorDemo& d, const std::string& path) {
    std::ostringstream title;
    title.precision(3);
    title << "Posterior density, SNR " << d.stats.snr_db << " dB (RI " << d.stats.ri_bits
          << " bits)";
    write_svg_plot(path, title.str(), "normalized range x", "density",
                   {{"p(x|y)", "#1f77b4", d.grid.xs, d.grid.density}});
}

}  // namespace rangeinfo
