#pragma once

namespace cqsedram {

inline constexpr const char* kToolVersion = "0.1.0";

// Boltzmann constant over electron charge, volts per kelvin.
inline constexpr double kBoltzmannOverQ = 8.617333262e-5;

// Thermal voltage kT/e in volts.
inline double thermal_voltage(double t_kelvin) {
    return kBoltzmannOverQ * t_kelvin;
}

// Temperature window accepted by every model entry point.
inline constexpr double kTempMin = 1.0;
inline constexpr double kTempMax = 400.0;
inline constexpr double kVddMin = 0.3;
inline constexpr double kVddMax = 1.5;

// Anchor temperatures the calibration profile is pinned at.
inline constexpr double kTempCryo = 4.2;
inline constexpr double kTempRoom = 300.0;

}  // namespace cqsedram
