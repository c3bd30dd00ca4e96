#pragma once

// Behavioral 4T transmission-gate gain-cell model plus the comparison
// topologies.  Retention is the first-crossing time of the storage-node
// ODE; access energy/delay are calibrated ratio models, not netlists.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqsedram/device.hpp"
#include "cqsedram/errors.hpp"
#include "cqsedram/ode.hpp"

namespace cqsedram {

enum class CellTopology {
    TG_WRITE_2TN_READ,  // 4T TGGC: transmission-gate write, 2T NMOS read
    N_WRITE,
    P_WRITE,
    READ_1T,
    READ_2TN,
};

struct BitCellConfig {
    CellTopology topology = CellTopology::TG_WRITE_2TN_READ;
    double c_sn = 1e-15;       // F; arbitrary-but-fixed, rescales leakage only
    double wbl_bias = 0.0;     // V, WBL level during non-write periods
    std::optional<double> v_fail{};  // V; unset -> vdd/2 (symmetric default)
    double v_init_fraction = 1.0;    // fraction of VDD written onto SN

    // Stored-'0' disturb strength relative to the stored-'1' leak path
    // when the WBL sits high; calibrated to the measured bias sweep.
    double disturb_gain = 1.0;

    double retention_horizon = 1e4;  // s, "exceeds horizon" sentinel bound

    double fail_voltage(double vdd) const {
        return v_fail ? *v_fail : 0.5 * vdd;
    }

    void validate(double vdd) const {
        if (!(c_sn > 0.0)) throw DomainError("c_sn must be > 0");
        if (wbl_bias < 0.0 || wbl_bias > vdd) {
            throw DomainError("wbl_bias outside [0, vdd]");
        }
        const double vf = fail_voltage(vdd);
        if (!(vf > 0.0 && vf < vdd * v_init_fraction)) {
            throw DomainError("v_fail outside (0, vdd*v_init_fraction)");
        }
        if (!(v_init_fraction > 0.0 && v_init_fraction <= 1.0)) {
            throw DomainError("v_init_fraction outside (0, 1]");
        }
        if (topology == CellTopology::TG_WRITE_2TN_READ && v_init_fraction != 1.0) {
            throw DomainError("TG write port is rail-to-rail: v_init_fraction must be 1");
        }
    }
};

struct AccessMetrics {
    double energy = 0.0;  // J
    double delay = 0.0;   // s
};

inline bool is_write_topology(CellTopology t) {
    return t == CellTopology::TG_WRITE_2TN_READ || t == CellTopology::N_WRITE ||
           t == CellTopology::P_WRITE;
}

inline bool is_read_topology(CellTopology t) {
    return t == CellTopology::TG_WRITE_2TN_READ || t == CellTopology::READ_1T ||
           t == CellTopology::READ_2TN;
}

// Level actually written for a '1'; single-type N port drops a threshold.
inline double stored_one_level(const BitCellConfig& cell, const DeviceParams& dev,
                               const ThermalOperatingPoint& op) {
    switch (cell.topology) {
        case CellTopology::N_WRITE:
            return std::min(cell.v_init_fraction * op.vdd,
                            op.vdd - threshold_voltage(dev, op.temperature));
        default:
            return cell.v_init_fraction * op.vdd;
    }
}

// Oracle for the integrator: constant-current discharge.
inline double retention_time_analytic(double c_sn, double delta_v, double i_const) {
    if (!(c_sn > 0.0)) throw DomainError("c_sn must be > 0");
    if (!(delta_v > 0.0)) throw DomainError("delta_v must be > 0");
    if (!(i_const > 0.0)) throw DomainError("i_const must be > 0");
    return c_sn * delta_v / i_const;
}

namespace detail {

// Aggregate off-path magnitude through the write port (subthreshold +
// floor), at the rail-defined gate bias.  The floor is modeled as
// port-side tunneling, so it couples to the WBL like the subthreshold
// term does.
inline double port_leak_magnitude(const DeviceParams& dev,
                                  const ThermalOperatingPoint& op) {
    const double vth = threshold_voltage(dev, op.temperature);
    const double swing = subthreshold_swing(dev, op.temperature);
    const double sub = dev.i_sub0 * std::pow(10.0, -vth / swing);
    return (sub + dev.i_floor) * leak_vdd_scale(dev, op.temperature, op.vdd);
}

inline double junction_leak(const DeviceParams& dev, const ThermalOperatingPoint& op,
                            double v_sn) {
    return dev.junction_i0 * std::exp(-dev.junction_ea / thermal_voltage(op.temperature)) *
           drain_bias_factor(dev, v_sn) * leak_vdd_scale(dev, op.temperature, op.vdd);
}

// Stored '1': SN discharges through the off write port and the junction
// path to ground until it hits the fail threshold.
inline double retention_state_one(const BitCellConfig& cell, const DeviceParams& dev,
                                  const ThermalOperatingPoint& op, double leak_scale) {
    const double v_init = stored_one_level(cell, dev, op);
    const double v_fail = cell.fail_voltage(op.vdd);
    if (v_init <= v_fail) return 0.0;
    const double i_port = port_leak_magnitude(dev, op) * leak_scale;

    auto field = [&](double /*t*/, double v) {
        const double i = i_port + junction_leak(dev, op, v) * leak_scale;
        return -i / cell.c_sn;
    };
    auto event = [&](double v) { return v - v_fail; };
    OdeSettings settings;
    settings.horizon = cell.retention_horizon;
    settings.abs_tol = 1e-9 * v_init;
    settings.initial_step = std::max(1e-12, 1e-4 * cell.c_sn * v_init / (i_port + 1e-30));
    return integrate_to_event(field, event, v_init, settings);
}

// Stored '0': a high WBL pushes charge into the SN through the off write
// port.  The disturb drive scales with the WBL level (source of the off
// transistor) and exceeds the '1'-leak by disturb_gain at full bias; the
// node cannot be pulled above the WBL itself.
inline double retention_state_zero(const BitCellConfig& cell, const DeviceParams& dev,
                                   const ThermalOperatingPoint& op, double leak_scale) {
    const double v_fail = cell.fail_voltage(op.vdd);
    const double i_port = port_leak_magnitude(dev, op) * leak_scale;
    const double wbl = cell.wbl_bias;
    const double i_disturb = cell.disturb_gain * i_port * (wbl / op.vdd);

    auto field = [&](double /*t*/, double v) {
        const double up = v < wbl ? i_disturb : 0.0;
        const double down = junction_leak(dev, op, v) * leak_scale;
        return (up - down) / cell.c_sn;
    };
    auto event = [&](double v) { return v_fail - v; };
    OdeSettings settings;
    settings.horizon = cell.retention_horizon;
    settings.abs_tol = 1e-9 * op.vdd;
    settings.initial_step = std::max(1e-12, 1e-4 * cell.c_sn * v_fail / (i_port + 1e-30));
    return integrate_to_event(field, event, 0.0, settings);
}

}  // namespace detail

// Worst-case retention over both stored states.  +inf means "exceeds
// horizon" (neither state reaches the fail threshold).
inline double retention_time(const BitCellConfig& cell, const DeviceParams& dev,
                             const ThermalOperatingPoint& op, double leak_scale = 1.0) {
    op.validate();
    cell.validate(op.vdd);
    dev.validate();
    const double t1 = detail::retention_state_one(cell, dev, op, leak_scale);
    const double t0 = detail::retention_state_zero(cell, dev, op, leak_scale);
    return std::min(t1, t0);
}

inline std::vector<std::pair<double, double>> wbl_bias_sweep(
    const BitCellConfig& cell, const DeviceParams& dev,
    const ThermalOperatingPoint& op, const std::vector<double>& biases) {
    std::vector<std::pair<double, double>> out;
    out.reserve(biases.size());
    for (double b : biases) {
        if (b < 0.0 || b > op.vdd) throw DomainError("bias outside [0, vdd]");
        BitCellConfig c = cell;
        c.wbl_bias = b;
        out.emplace_back(b, retention_time(c, dev, op));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Access metrics.  Fitted constants below come from closed-form fits to
// the 10 K port-comparison ratios and the two absolute read delays; the
// fits live in calibration.hpp, these are the resulting model forms.

struct AccessModelParams {
    // Write port
    double boost_n = 0.69076;    // WL boost per Vth for the N-only port
    double boost_p = 0.52100;    // same for the P-only port
    double drive_p_ratio = 1.19318;  // PMOS/NMOS drive weight inside the TG
    double tg_drive_factor = 0.95756;  // TG contention penalty on the drive sum
    double write_energy_c = 2e-15;     // F, effective switched cap per write
    double write_delay_k = 1e-13;      // drive normalization

    // Read port
    double read_delay_k = 1.1e-9;      // s, 2TN delay at (300 K, vdd_nominal)
    double mobility_gain = 1.03211;    // cryo drive improvement slope
    double read_c_rbl = 5e-15;         // F, RBL swing cap (read '1')
    double read_overhead_frac = 0.15;  // read '0' precharge/leak share
    double one_t_energy_ratio = 1.98;  // 1T vs 2TN read energy
    double one_t_delay_ratio = 1.41;   // 1T vs 2TN read delay
};

inline double drive_mobility(const AccessModelParams& m, double t) {
    const double fraction = std::max(0.0, (kTempRoom - t) / kTempRoom);
    return 1.0 + m.mobility_gain * fraction;
}

inline AccessMetrics write_access(const BitCellConfig& cell, const DeviceParams& dev,
                                  const ThermalOperatingPoint& op,
                                  const AccessModelParams& m = {}) {
    op.validate();
    if (!is_write_topology(cell.topology)) {
        throw UsageError("write_access on a read-only topology");
    }
    const double vth = threshold_voltage(dev, op.temperature);
    const double over = std::max(0.05, op.vdd - vth);
    const double drive_n = over * over;
    const double drive_p = m.drive_p_ratio * over * over;

    double swing = op.vdd;
    double drive = 0.0;
    switch (cell.topology) {
        case CellTopology::TG_WRITE_2TN_READ:
            drive = m.tg_drive_factor * (drive_n + drive_p);
            break;
        case CellTopology::N_WRITE:
            swing = op.vdd + m.boost_n * vth;  // boosted WWL restores the level
            drive = drive_n;
            break;
        case CellTopology::P_WRITE:
            swing = op.vdd + m.boost_p * vth;
            drive = drive_p;
            break;
        default:
            break;
    }
    AccessMetrics out;
    out.energy = m.write_energy_c * swing * swing;
    out.delay = m.write_delay_k * cell.c_sn * op.vdd / (drive * 1e-15);
    return out;
}

inline AccessMetrics read_access(const BitCellConfig& cell, const DeviceParams& dev,
                                 const ThermalOperatingPoint& op, int stored,
                                 const AccessModelParams& m = {}) {
    op.validate();
    if (!is_read_topology(cell.topology)) {
        throw UsageError("read_access on a write-only topology");
    }
    const double vth = threshold_voltage(dev, op.temperature);
    const double over = std::max(0.05, op.vdd - vth);
    const double over_ref = dev.vdd_nominal - dev.vth_300;
    const double delay_2tn =
        m.read_delay_k * (op.vdd / dev.vdd_nominal) /
        (drive_mobility(m, op.temperature) * (over * over) / (over_ref * over_ref));
    const double e_swing = m.read_c_rbl * op.vdd * op.vdd;
    const double e_overhead = m.read_overhead_frac * e_swing;
    // RBL only discharges on a read '1'; a read '0' pays precharge/leak.
    double energy = stored ? e_swing + e_overhead : e_overhead;
    double delay = delay_2tn;
    if (cell.topology == CellTopology::READ_1T) {
        energy *= m.one_t_energy_ratio;
        delay *= m.one_t_delay_ratio;
    }
    return {energy, delay};
}

enum class ReadoutStructure { SENSE_AMP, INVERTER };

// EDP of the readout structure vs the SN voltage.  The SA keeps a flat
// EDP; the inverter degrades as the SN level drops, with the ratio
// pinned at both ends of the calibrated range.
inline double readout_edp(ReadoutStructure structure, double v_sn,
                          const ThermalOperatingPoint& op,
                          double edp_sa_scale = 1e-24, double ratio_at_vdd = 3.04,
                          double ratio_at_low = 7.40, double v_low = 0.6) {
    op.validate();
    if (v_sn < v_low || v_sn > op.vdd) {
        throw DomainError("v_sn outside [" + std::to_string(v_low) + ", vdd]");
    }
    const double edp_sa = edp_sa_scale * (op.vdd / v_sn);
    if (structure == ReadoutStructure::SENSE_AMP) return edp_sa;
    const double x = (op.vdd - v_sn) / (op.vdd - v_low);
    const double ratio = ratio_at_vdd + (ratio_at_low - ratio_at_vdd) * x;
    return edp_sa * ratio;
}

}  // namespace cqsedram
