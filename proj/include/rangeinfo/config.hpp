#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rangeinfo {

enum class Swerling { Sw0, Sw1 };

inline std::string to_string(Swerling m) { return m == Swerling::Sw0 ? "swerling0" : "swerling1"; }

/// Full experiment parametrization. Normalized range units throughout:
/// the observation interval is [-N/2, N/2) with N = tbp.
struct SystemConfig {
    int tbp = 16;                     // time-bandwidth product N
    double snr_db = 10.0;             // 10 log10(rho^2)
    Swerling swerling = Swerling::Sw0;
    int grid_points_per_sample = 64;  // posterior grid density
    double n0 = 1.0;                  // noise PSD (per complex sample)
    int trials = 1500;
    std::uint64_t seed = 42;
    double truth_span = 0.8;          // truth drawn uniform over this central fraction

    double rho_sq() const { return std::pow(10.0, snr_db / 10.0); }
    double half_width() const { return tbp / 2.0; }
    int grid_size() const { return tbp * grid_points_per_sample; }
    double cell_width() const { return 1.0 / grid_points_per_sample; }

    void validate() const {
        if (tbp < 4) throw std::invalid_argument("config: tbp must be >= 4");
        if (grid_points_per_sample < 8)
            throw std::invalid_argument("config: grid_points_per_sample must be >= 8");
        if (!std::isfinite(snr_db)) throw std::invalid_argument("config: snr_db must be finite");
        if (!(n0 > 0.0)) throw std::invalid_argument("config: n0 must be positive");
        if (trials < 1) throw std::invalid_argument("config: trials must be positive");
        if (!(truth_span > 0.0) || truth_span > 1.0)
            throw std::invalid_argument("config: truth_span must be in (0, 1]");
    }
};

/// FNV-1a over the fields that determine the statistical model.
inline std::uint64_t config_hash(const SystemConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    auto mixd = [&](double d) {
        std::uint64_t v;
        static_assert(sizeof(v) == sizeof(d));
        __builtin_memcpy(&v, &d, 8);
        mix(v);
    };
    mix(static_cast<std::uint64_t>(c.tbp));
    mixd(c.snr_db);
    mix(c.swerling == Swerling::Sw0 ? 0 : 1);
    mix(static_cast<std::uint64_t>(c.grid_points_per_sample));
    mixd(c.n0);
    mixd(c.truth_span);
    return h;
}

}  // namespace rangeinfo
