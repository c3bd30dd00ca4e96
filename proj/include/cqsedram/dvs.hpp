#pragma once

// Supply-voltage sweep engine: per-vdd retention sampling, refresh-period
// selection, and operating-point optimization.

#include <string>
#include <vector>

#include "cqsedram/array.hpp"
#include "cqsedram/refresh.hpp"

namespace cqsedram {

struct SweepPoint {
    double vdd = 0.0;         // V
    double mean_ret = 0.0;    // s
    double std_ret = 0.0;     // s
    double t_min = 0.0;       // s
    double p_retention = 0.0; // W
    double p_dynamic = 0.0;   // W
};

struct SweepTable {
    std::vector<SweepPoint> points;
    bool extended_range = false;  // some vdd outside the calibrated 0.6-1.1 V window
};

inline std::vector<double> default_vdd_grid() {
    return {0.6, 0.7, 0.8, 0.9, 1.0, 1.1};
}

inline SweepTable vdd_sweep(const ArrayConfig& cfg, double temperature,
                            const std::vector<double>& vdds, const PowerModelParams& pm,
                            const AccessModelParams& am = {}, double guard = 1.0,
                            int n_workers = 1, bool allow_extended = false) {
    SweepTable table;
    for (double vdd : vdds) {
        if (vdd < 0.6 - 1e-12 || vdd > 1.1 + 1e-12) {
            if (!allow_extended) {
                throw DomainError("vdd " + std::to_string(vdd) +
                                  " V outside the calibrated 0.6-1.1 V window "
                                  "(pass allow_extended to override)");
            }
            table.extended_range = true;
        }
        const ThermalOperatingPoint op{temperature, vdd};
        const RetentionMap map = sample_array(cfg, op, n_workers);
        SweepPoint p;
        p.vdd = vdd;
        p.mean_ret = map.mean;
        p.std_ret = map.std;
        p.t_min = min_refresh_period(map, guard);
        const EnergyBudget budget = energy_budget(cfg, op, p.t_min, pm, am);
        p.p_retention = retention_power(budget, p.t_min);
        p.p_dynamic = dynamic_power(op, nominal_activity(pm, temperature), pm,
                                    cfg.dev.vdd_nominal);
        table.points.push_back(p);
    }
    return table;
}

enum class SweepObjective { MIN_RETENTION_POWER, MIN_DYNAMIC_POWER, MIN_TOTAL };

struct ObjectiveWeights {
    double retention = 1.0;
    double dynamic = 1.0;
};

// Argmin under the objective; ties break toward lower vdd.
inline SweepPoint optimal_vdd(const std::vector<SweepPoint>& points,
                              SweepObjective objective,
                              const ObjectiveWeights& weights = {}) {
    if (points.empty()) throw UsageError("optimal_vdd on empty sweep");
    auto cost = [&](const SweepPoint& p) {
        switch (objective) {
            case SweepObjective::MIN_RETENTION_POWER: return p.p_retention;
            case SweepObjective::MIN_DYNAMIC_POWER: return p.p_dynamic;
            case SweepObjective::MIN_TOTAL:
            default:
                return weights.retention * p.p_retention + weights.dynamic * p.p_dynamic;
        }
    };
    const SweepPoint* best = &points[0];
    for (const SweepPoint& p : points) {
        const double c = cost(p);
        const double cb = cost(*best);
        if (c < cb || (c == cb && p.vdd < best->vdd)) best = &p;
    }
    return *best;
}

struct DvsDrpsResult {
    double vdd = 0.0;
    double period = 0.0;
    double p_retention = 0.0;
};

// Combined DVS + DRPS: per-vdd the period relaxes to the error budget,
// then the minimum-retention-power point wins.
inline DvsDrpsResult joint_dvs_drps(const ArrayConfig& cfg, double temperature,
                                    double max_error, const PowerModelParams& pm,
                                    const AccessModelParams& am = {},
                                    const std::vector<double>& vdds = default_vdd_grid(),
                                    int n_workers = 1) {
    if (max_error < 0.0 || max_error >= 1.0) throw DomainError("max_error outside [0, 1)");
    DvsDrpsResult best;
    bool first = true;
    for (double vdd : vdds) {
        const ThermalOperatingPoint op{temperature, vdd};
        const RetentionMap map = sample_array(cfg, op, n_workers);
        const double period = drps_select(map, max_error);
        const EnergyBudget budget = energy_budget(cfg, op, period, pm, am);
        const double p = retention_power(budget, period);
        if (first || p < best.p_retention ||
            (p == best.p_retention && vdd < best.vdd)) {
            best = {vdd, period, p};
            first = false;
        }
    }
    return best;
}

}  // namespace cqsedram
