#pragma once

// System-level CIM energy accounting: compute ops, memory traffic and
// refresh energy for a layer-wise workload running against the array
// model.  Energy/throughput bookkeeping only; no functional simulation.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cqsedram/array.hpp"
#include "cqsedram/refresh.hpp"

namespace cqsedram {

struct WorkloadLayer {
    std::string name;
    std::uint64_t mac_count = 0;
    std::uint64_t weight_bytes = 0;
    std::uint64_t activation_bytes = 0;
};

struct WorkloadSpec {
    std::vector<WorkloadLayer> layers;
    double t_cim_cycle = 4.84e-3;          // s
    double compute_energy_per_op = 0.0;    // J/op; 0 -> take the profile constant

    std::uint64_t total_macs() const {
        std::uint64_t sum = 0;
        for (const auto& l : layers) sum += l.mac_count;
        return sum;
    }
    // Reads of weights and activations plus activation write-back.
    std::uint64_t total_bytes_accessed() const {
        std::uint64_t sum = 0;
        for (const auto& l : layers) sum += l.weight_bytes + 2 * l.activation_bytes;
        return sum;
    }
};

struct CimReport {
    double energy_total = 0.0;    // J per inference
    double energy_refresh = 0.0;  // J
    double energy_memory = 0.0;   // J
    double energy_compute = 0.0;  // J
    double refresh_fraction = 0.0;
    double tops_per_watt = 0.0;   // ops per joule, reported in TOPS/W scale by the CLI
    double frame_rate_rel = 0.0;  // speed relative to the cryo cycle time
    double duration = 0.0;        // s per inference
    std::uint64_t total_ops = 0;
};

struct CimModelParams {
    double ops_per_mac = 2.0;        // multiply + accumulate counted separately
    double e_op = 6.0e-16;           // J/op, back-solved from the efficiency anchor
    double e_byte = 4.0e-14;         // J/byte of array traffic
    double macs_per_cycle = 1.19e6;  // CIM array throughput
    double cycle_time_cryo = 4.84e-3;   // s
    double cycle_time_room = 9.39e-3;   // s, includes refresh stall + periphery slowdown
};

namespace detail {

inline double cim_cycle_time(const CimModelParams& cm, double temperature) {
    return log_temp_interp(cm.cycle_time_cryo, cm.cycle_time_room, temperature);
}

}  // namespace detail

// Parses the line-oriented workload schema.  See FORMATS.md.
inline WorkloadSpec load_workload(const std::string& document) {
    WorkloadSpec spec;
    std::istringstream in(document);
    std::string line;
    int lineno = 0;
    bool saw_schema = false;

    auto parse_u64 = [&](const std::string& field, const std::string& text) {
        std::size_t pos = 0;
        long long value = 0;
        try {
            value = std::stoll(text, &pos);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": field '" + field +
                             "': not a number: '" + text + "'");
        }
        if (pos != text.size()) {
            throw ParseError("line " + std::to_string(lineno) + ": field '" + field +
                             "': trailing junk in '" + text + "'");
        }
        if (value < 0) {
            throw DomainError("line " + std::to_string(lineno) + ": field '" + field +
                              "': negative count " + text);
        }
        return static_cast<std::uint64_t>(value);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "schema") {
            std::string eq, tag, ver;
            ls >> eq >> tag >> ver;
            if (tag != "cqsedram-workload") {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": unknown schema tag '" + tag + "'");
            }
            saw_schema = true;
        } else if (head == "t_cim_cycle") {
            std::string eq, value;
            ls >> eq >> value;
            try {
                spec.t_cim_cycle = std::stod(value);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": field 't_cim_cycle': not a number: '" + value + "'");
            }
            if (!(spec.t_cim_cycle > 0.0)) {
                throw DomainError("t_cim_cycle must be > 0");
            }
        } else if (head == "layer") {
            WorkloadLayer layer;
            if (!(ls >> layer.name)) {
                throw ParseError("line " + std::to_string(lineno) + ": layer without a name");
            }
            std::string kv;
            while (ls >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": expected key=value, got '" + kv + "'");
                }
                const std::string key = kv.substr(0, eq);
                const std::string value = kv.substr(eq + 1);
                if (key == "macs") {
                    layer.mac_count = parse_u64("macs", value);
                } else if (key == "weight_bytes") {
                    layer.weight_bytes = parse_u64("weight_bytes", value);
                } else if (key == "activation_bytes") {
                    layer.activation_bytes = parse_u64("activation_bytes", value);
                } else {
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": unknown field '" + key + "'");
                }
            }
            spec.layers.push_back(layer);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown directive '" +
                             head + "'");
        }
    }
    if (!saw_schema) throw ParseError("missing 'schema = cqsedram-workload v1' header");
    return spec;
}

inline CimReport cim_energy(const WorkloadSpec& w, const ArrayConfig& cfg,
                            const ThermalOperatingPoint& op, const RefreshPolicy& policy,
                            const PowerModelParams& pm, const CimModelParams& cm,
                            const AccessModelParams& am = {}) {
    op.validate();
    policy.validate();
    CimReport rep;
    const std::uint64_t macs = w.total_macs();
    rep.total_ops = static_cast<std::uint64_t>(cm.ops_per_mac * static_cast<double>(macs));

    const double n_cycles = std::ceil(static_cast<double>(macs) / cm.macs_per_cycle);
    rep.duration = n_cycles * detail::cim_cycle_time(cm, op.temperature);

    const double e_op = w.compute_energy_per_op > 0.0 ? w.compute_energy_per_op : cm.e_op;
    rep.energy_compute = static_cast<double>(rep.total_ops) * e_op;
    rep.energy_memory = static_cast<double>(w.total_bytes_accessed()) * cm.e_byte;

    if (rep.duration > 0.0) {
        const EnergyBudget budget = energy_budget(cfg, op, policy.period, pm, am);
        rep.energy_refresh = retention_power(budget, policy.period) * rep.duration;
    }
    rep.energy_total = rep.energy_compute + rep.energy_memory + rep.energy_refresh;
    rep.refresh_fraction =
        rep.energy_total > 0.0 ? rep.energy_refresh / rep.energy_total : 0.0;
    rep.tops_per_watt =
        rep.energy_total > 0.0 ? static_cast<double>(rep.total_ops) / rep.energy_total : 0.0;
    rep.frame_rate_rel =
        rep.duration > 0.0 ? (n_cycles * cm.cycle_time_cryo) / rep.duration : 1.0;
    return rep;
}

struct TemperatureComparison {
    double efficiency_ratio = 1.0;       // TOPS/W cryo over room
    double frame_rate_ratio = 1.0;       // inference rate cryo over room
    double equal_time_energy_ratio = 1.0;  // room energy per unit time over cryo
    double refresh_fraction_room = 0.0;
    double refresh_fraction_cryo = 0.0;
    CimReport report_room;
    CimReport report_cryo;
};

// Full-yield refresh at each temperature, then the cross-temperature ratios.
inline TemperatureComparison compare_temperatures(const WorkloadSpec& w,
                                                  const ArrayConfig& cfg,
                                                  const PowerModelParams& pm,
                                                  const CimModelParams& cm,
                                                  const AccessModelParams& am = {},
                                                  int n_workers = 1) {
    TemperatureComparison out;
    const ThermalOperatingPoint op_room{kTempRoom, cfg.dev.vdd_nominal};
    const ThermalOperatingPoint op_cryo{kTempCryo, cfg.dev.vdd_nominal};
    const RetentionMap map_room = sample_array(cfg, op_room, n_workers);
    const RetentionMap map_cryo = sample_array(cfg, op_cryo, n_workers);
    RefreshPolicy pol_room{min_refresh_period(map_room), RefreshMode::FULL_YIELD, 0.0};
    RefreshPolicy pol_cryo{min_refresh_period(map_cryo), RefreshMode::FULL_YIELD, 0.0};
    out.report_room = cim_energy(w, cfg, op_room, pol_room, pm, cm, am);
    out.report_cryo = cim_energy(w, cfg, op_cryo, pol_cryo, pm, cm, am);
    out.refresh_fraction_room = out.report_room.refresh_fraction;
    out.refresh_fraction_cryo = out.report_cryo.refresh_fraction;
    if (out.report_room.tops_per_watt > 0.0) {
        out.efficiency_ratio = out.report_cryo.tops_per_watt / out.report_room.tops_per_watt;
    }
    if (out.report_cryo.duration > 0.0) {
        out.frame_rate_ratio = out.report_room.duration / out.report_cryo.duration;
    }
    const double p_room = out.report_room.duration > 0.0
                              ? out.report_room.energy_total / out.report_room.duration
                              : 0.0;
    const double p_cryo = out.report_cryo.duration > 0.0
                              ? out.report_cryo.energy_total / out.report_cryo.duration
                              : 0.0;
    if (p_cryo > 0.0) out.equal_time_energy_ratio = p_room / p_cryo;
    return out;
}

}  // namespace cqsedram
