#pragma once

// Text exports for every artifact the CLI writes.  All formatting goes
// through %.17g so repeated runs are byte-identical, and every document
// starts with a provenance header (tool version, profile hash, seed).

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cqsedram/array.hpp"
#include "cqsedram/calibration.hpp"
#include "cqsedram/cim.hpp"
#include "cqsedram/constants.hpp"
#include "cqsedram/dvs.hpp"

namespace cqsedram {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string profile_hash(const CalibrationProfile& profile) {
    return hash_hex(fnv1a64(profile_to_text(profile)));
}

inline std::string provenance_header(const std::string& profile_hash_hex,
                                     std::uint64_t seed) {
    std::ostringstream out;
    out << "# cqsedram " << kToolVersion << "\n";
    out << "# profile_hash = " << profile_hash_hex << "\n";
    out << "# seed = " << seed << "\n";
    return out.str();
}

// Plain numeric grid, one row per line, seconds.
inline std::string format_heat_map(const RetentionMap& map,
                                   const std::string& provenance) {
    std::ostringstream out;
    out << provenance;
    out << "# retention heat map, rows=" << map.rows << " cols=" << map.cols
        << ", seconds\n";
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            if (c) out << ' ';
            out << detail::fmt_g17(map.at(r, c));
        }
        out << '\n';
    }
    return out.str();
}

inline std::string format_stats(const ArrayStats& stats, const std::string& provenance) {
    std::ostringstream out;
    out << provenance;
    out << "mean_s = " << detail::fmt_g17(stats.mean) << "\n";
    out << "std_s = " << detail::fmt_g17(stats.std) << "\n";
    out << "min_s = " << detail::fmt_g17(stats.min) << "\n";
    out << "max_s = " << detail::fmt_g17(stats.max) << "\n";
    out << "cv = " << detail::fmt_g17(stats.cv) << "\n";
    out << "normality_ad = " << detail::fmt_g17(stats.normality_ad) << "\n";
    return out.str();
}

inline std::string format_sweep(const SweepTable& table, const SweepPoint& chosen,
                                const std::string& provenance) {
    std::ostringstream out;
    out << provenance;
    out << "vdd_V\tmean_ret_s\tstd_ret_s\tt_min_s\tp_retention_W\tp_dynamic_W\n";
    for (const SweepPoint& p : table.points) {
        out << detail::fmt_g17(p.vdd) << '\t' << detail::fmt_g17(p.mean_ret) << '\t'
            << detail::fmt_g17(p.std_ret) << '\t' << detail::fmt_g17(p.t_min) << '\t'
            << detail::fmt_g17(p.p_retention) << '\t' << detail::fmt_g17(p.p_dynamic)
            << '\n';
    }
    out << "chosen_vdd_V = " << detail::fmt_g17(chosen.vdd) << "\n";
    out << "chosen_p_retention_W = " << detail::fmt_g17(chosen.p_retention) << "\n";
    out << "chosen_p_dynamic_W = " << detail::fmt_g17(chosen.p_dynamic) << "\n";
    if (table.extended_range) out << "# extended_range = 1\n";
    return out.str();
}

inline std::string format_cim(const CimReport& rep, const std::string& provenance) {
    std::ostringstream out;
    out << provenance;
    out << "total_ops = " << rep.total_ops << "\n";
    out << "duration_s = " << detail::fmt_g17(rep.duration) << "\n";
    out << "energy_total_J = " << detail::fmt_g17(rep.energy_total) << "\n";
    out << "energy_compute_J = " << detail::fmt_g17(rep.energy_compute) << "\n";
    out << "energy_memory_J = " << detail::fmt_g17(rep.energy_memory) << "\n";
    out << "energy_refresh_J = " << detail::fmt_g17(rep.energy_refresh) << "\n";
    out << "refresh_fraction = " << detail::fmt_g17(rep.refresh_fraction) << "\n";
    out << "tops_per_watt = " << detail::fmt_g17(rep.tops_per_watt / 1e12) << "\n";
    out << "frame_rate_rel = " << detail::fmt_g17(rep.frame_rate_rel) << "\n";
    return out.str();
}

inline std::string format_comparison(const TemperatureComparison& cmp,
                                     const std::string& provenance) {
    std::ostringstream out;
    out << provenance;
    out << "efficiency_ratio = " << detail::fmt_g17(cmp.efficiency_ratio) << "\n";
    out << "frame_rate_ratio = " << detail::fmt_g17(cmp.frame_rate_ratio) << "\n";
    out << "equal_time_energy_ratio = " << detail::fmt_g17(cmp.equal_time_energy_ratio)
        << "\n";
    out << "refresh_fraction_room = " << detail::fmt_g17(cmp.refresh_fraction_room) << "\n";
    out << "refresh_fraction_cryo = " << detail::fmt_g17(cmp.refresh_fraction_cryo) << "\n";
    return out.str();
}

}  // namespace cqsedram
