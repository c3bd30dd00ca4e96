#pragma once

// Refresh policy evaluation: minimum period for full yield, error-rate
// curves, retention power and DRPS period selection.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cqsedram/array.hpp"
#include "cqsedram/cell.hpp"
#include "cqsedram/errors.hpp"

namespace cqsedram {

enum class RefreshMode { FULL_YIELD, DRPS };

struct RefreshPolicy {
    double period = 1.0;  // s
    RefreshMode mode = RefreshMode::FULL_YIELD;
    double max_error_rate = 0.0;  // used by DRPS

    void validate() const {
        if (!(period > 0.0)) throw DomainError("refresh period must be > 0");
        if (max_error_rate < 0.0 || max_error_rate > 1.0) {
            throw DomainError("max_error_rate outside [0, 1]");
        }
    }
};

struct EnergyBudget {
    double e_read = 0.0;     // J per full-array refresh cycle
    double e_write = 0.0;    // J
    double e_leakage = 0.0;  // J

    double total() const { return e_read + e_write + e_leakage; }
};

inline double min_refresh_period(const RetentionMap& map, double guard = 1.0) {
    if (map.retention.empty()) throw UsageError("min_refresh_period on empty map");
    if (!(guard > 0.0 && guard <= 1.0)) throw DomainError("guard outside (0, 1]");
    return guard * *std::min_element(map.retention.begin(), map.retention.end());
}

// Fraction of cells whose retention falls short of the period.
inline double error_rate(const RetentionMap& map, double period) {
    if (!(period > 0.0)) throw DomainError("period must be > 0");
    size_t failed = 0;
    for (double t : map.retention) {
        if (t < period) ++failed;
    }
    return static_cast<double>(failed) / static_cast<double>(map.retention.size());
}

// Gaussian closed form: Phi((period - mean) / std).
inline double error_rate_analytic(double mean, double std, double period) {
    if (!(std > 0.0)) throw DomainError("std must be > 0");
    return 0.5 * std::erfc(-(period - mean) / (std * std::sqrt(2.0)));
}

inline double retention_power(const EnergyBudget& budget, double t_min) {
    if (!(t_min > 0.0)) throw DomainError("t_min must be > 0");
    return budget.total() / t_min;
}

// Largest period on the map's order statistics with error_rate <= max_error.
inline double drps_select(const RetentionMap& map, double max_error) {
    if (max_error < 0.0 || max_error >= 1.0) throw DomainError("max_error outside [0, 1)");
    std::vector<double> sorted = map.retention;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    const size_t allowed = static_cast<size_t>(max_error * static_cast<double>(n));
    return sorted[std::min(allowed, n - 1)];
}

// ---------------------------------------------------------------------------
// Calibrated power model constants (filled in by the calibration pipeline).

struct PowerModelParams {
    // E_read + E_write per full-array refresh cycle at vdd_nominal.
    double e_access_cycle_cryo = 7.446e-9;  // J
    double e_access_cycle_room = 1.540e-11; // J
    double access_vdd_exponent = 2.0;       // E ~ vdd^2

    // Dynamic power P = d * (vdd/vnom)^2 * (activity/nominal) + s.
    double dyn_d_cryo = 84.66e-6;  // W
    double dyn_s_cryo = 23.34e-6;  // W
    double dyn_d_room = 102.69e-6; // W
    double dyn_s_room = 28.31e-6;  // W
    double nominal_activity_cryo = 1.0 / 820e-12;   // Hz
    double nominal_activity_room = 1.0 / 1100e-12;  // Hz
};

namespace detail {

inline double log_temp_interp(double value_cryo, double value_room, double t) {
    if (t <= kTempCryo) return value_cryo;
    if (t >= kTempRoom) return value_room;
    const double w = (t - kTempCryo) / (kTempRoom - kTempCryo);
    return std::exp((1.0 - w) * std::log(value_cryo) + w * std::log(value_room));
}

}  // namespace detail

// Composes per-cell access energies and integrated leakage over t_min
// into the refresh-cycle budget.
inline EnergyBudget energy_budget(const ArrayConfig& cfg, const ThermalOperatingPoint& op,
                                  double t_min, const PowerModelParams& pm,
                                  const AccessModelParams& am = {}) {
    op.validate();
    EnergyBudget out;
    const long cells = static_cast<long>(cfg.rows) * cfg.cols;
    if (cells == 0) return out;
    if (!(t_min > 0.0)) throw DomainError("t_min must be > 0");

    const double e_cycle =
        detail::log_temp_interp(pm.e_access_cycle_cryo, pm.e_access_cycle_room,
                                op.temperature) *
        std::pow(op.vdd / cfg.dev.vdd_nominal, pm.access_vdd_exponent);

    // Read/write split follows the cell-level access model.
    const AccessMetrics w = write_access(cfg.cell, cfg.dev, op, am);
    const AccessMetrics r = read_access(cfg.cell, cfg.dev, op, 1, am);
    const double frac_read = r.energy / (r.energy + w.energy);
    out.e_read = e_cycle * frac_read;
    out.e_write = e_cycle * (1.0 - frac_read);

    // Leakage energy while the data sits between refreshes.
    const double i_leak = detail::port_leak_magnitude(cfg.dev, op);
    const double v_avg = 0.5 * (stored_one_level(cfg.cell, cfg.dev, op) +
                                cfg.cell.fail_voltage(op.vdd));
    out.e_leakage = static_cast<double>(cells) * i_leak * v_avg * t_min;
    return out;
}

inline double dynamic_power(const ThermalOperatingPoint& op, double activity,
                            const PowerModelParams& pm, double vdd_nominal = 1.1) {
    op.validate();
    if (!(activity > 0.0)) throw DomainError("activity must be > 0");
    const double d = detail::log_temp_interp(pm.dyn_d_cryo, pm.dyn_d_room, op.temperature);
    const double s = detail::log_temp_interp(pm.dyn_s_cryo, pm.dyn_s_room, op.temperature);
    const double act_nom = detail::log_temp_interp(pm.nominal_activity_cryo,
                                                   pm.nominal_activity_room, op.temperature);
    const double v = op.vdd / vdd_nominal;
    return d * v * v * (activity / act_nom) + s;
}

inline double nominal_activity(const PowerModelParams& pm, double temperature) {
    return detail::log_temp_interp(pm.nominal_activity_cryo, pm.nominal_activity_room,
                                   temperature);
}

}  // namespace cqsedram
