#pragma once

// Temperature/voltage dependent transistor leakage and threshold model.
// Two-component leakage: a thermionic subthreshold term whose swing
// saturates at cryogenic temperatures, plus a temperature-independent
// floor (junction/gate tunneling aggregate).  A pure exp(-eV/kT) law
// would predict ~10^300x suppression at 4.2 K; the floor is what lets
// the calibrated model land on the measured few-1e6x retention ratio.

#include <array>
#include <cmath>
#include <string>

#include "cqsedram/constants.hpp"
#include "cqsedram/errors.hpp"

namespace cqsedram {

struct ThermalOperatingPoint {
    double temperature = kTempRoom;  // kelvin
    double vdd = 1.1;                // volts

    void validate() const {
        if (!(temperature >= kTempMin && temperature <= kTempMax)) {
            throw DomainError("temperature " + std::to_string(temperature) +
                              " K outside [1, 400] K");
        }
        if (!(vdd >= kVddMin && vdd <= kVddMax)) {
            throw DomainError("vdd " + std::to_string(vdd) +
                              " V outside [0.3, 1.5] V");
        }
    }
};

struct DeviceParams {
    double i_sub0 = 1e-6;        // A, subthreshold prefactor at reference bias
    double n_ideality = 1.3;     // subthreshold slope ideality
    double ss_floor = 0.020;     // V/dec, cryogenic swing saturation
    double i_floor = 0.0;        // A, temperature-independent leakage floor
    double vth_300 = 0.45;       // V, threshold at 300 K
    double dvth_cryo = 0.12;     // V, shift 300 K -> 4.2 K (>= 0.11 for this tech)
    double junction_i0 = 0.0;    // A, reverse junction prefactor
    double junction_ea = 0.60;   // eV, junction activation energy
    double vdd_nominal = 1.1;    // V, reference supply for bias factors

    // ln(I(vdd)/I(vdd_nominal)) as a cubic in u = ln(vdd/vdd_nominal),
    // fitted per anchor temperature and interpolated linearly in T.
    // Captures how the aggregate cell leakage tracks the supply rail.
    std::array<double, 3> leak_vdd_shape_cryo{0.0, 0.0, 0.0};
    std::array<double, 3> leak_vdd_shape_room{0.0, 0.0, 0.0};

    void validate() const {
        if (!(i_sub0 > 0.0)) throw DomainError("i_sub0 must be > 0");
        if (i_floor < 0.0) throw DomainError("i_floor must be >= 0");
        if (junction_i0 < 0.0) throw DomainError("junction_i0 must be >= 0");
        if (!(ss_floor > 0.0)) throw DomainError("ss_floor must be > 0");
        if (n_ideality < 1.0) throw DomainError("n_ideality must be >= 1");
    }
};

inline void check_temperature(double t) {
    if (!(t >= kTempMin)) {
        throw DomainError("temperature " + std::to_string(t) +
                          " K below lower bound 1 K");
    }
    if (!(t <= kTempMax)) {
        throw DomainError("temperature " + std::to_string(t) +
                          " K above upper bound 400 K");
    }
}

// Vth(T): piecewise-linear between the 4.2 K and 300 K anchors, linear
// extrapolation above 300 K.  Non-increasing in T.
inline double threshold_voltage(const DeviceParams& params, double t) {
    check_temperature(t);
    const double slope = -params.dvth_cryo / (kTempRoom - kTempCryo);
    if (t <= kTempCryo) return params.vth_300 + params.dvth_cryo;
    return params.vth_300 + slope * (t - kTempRoom);
}

// Thermionic swing n*ln(10)*kT/e, saturating at ss_floor.  Volts/decade.
inline double subthreshold_swing(const DeviceParams& params, double t) {
    check_temperature(t);
    const double thermionic =
        params.n_ideality * std::log(10.0) * thermal_voltage(t);
    return std::max(thermionic, params.ss_floor);
}

// Bounded non-decreasing drain-bias factor, normalized to f(vdd_nominal)=1.
inline double drain_bias_factor(const DeviceParams& params, double v_ds) {
    const double f = v_ds / params.vdd_nominal;
    return std::min(1.0, std::max(0.0, f));
}

// Off-state leakage of one access device.  Strictly positive when
// i_sub0 > 0, non-decreasing in temperature at fixed biases.
inline double off_leakage(const DeviceParams& params, double v_gs_off,
                          double v_ds, double t) {
    check_temperature(t);
    if (v_ds < 0.0) throw DomainError("v_ds must be >= 0");
    const double vth = threshold_voltage(params, t);
    const double swing = subthreshold_swing(params, t);
    const double sub = params.i_sub0 * std::pow(10.0, -(vth - v_gs_off) / swing);
    const double junction = params.junction_i0 *
                            std::exp(-params.junction_ea / thermal_voltage(t)) *
                            drain_bias_factor(params, v_ds);
    return sub + junction + params.i_floor;
}

// Supply-rail scale applied on top of off_leakage when the cell operates
// away from vdd_nominal: exp(cubic(ln(vdd/vdd_nominal))), coefficients
// interpolated between the two calibrated anchor temperatures.
inline double leak_vdd_scale(const DeviceParams& params, double t, double vdd) {
    const double u = std::log(vdd / params.vdd_nominal);
    auto eval = [u](const std::array<double, 3>& c) {
        return u * (c[0] + u * (c[1] + u * c[2]));
    };
    double w;  // weight of the room-temperature shape
    if (t <= kTempCryo) {
        w = 0.0;
    } else if (t >= kTempRoom) {
        w = 1.0;
    } else {
        w = (t - kTempCryo) / (kTempRoom - kTempCryo);
    }
    const double lam = (1.0 - w) * eval(params.leak_vdd_shape_cryo) +
                       w * eval(params.leak_vdd_shape_room);
    return std::exp(lam);
}

}  // namespace cqsedram
