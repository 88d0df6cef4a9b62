#pragma once

namespace humsim {

inline constexpr double kGasConstant = 8.314;             // J/(mol K)
inline constexpr double kVacuumPermittivity = 8.854e-12;  // F/m
inline constexpr double kRoomTemperature = 298.15;        // K
inline constexpr double kCelsiusOffset = 273.15;

// Relative pressure used in place of saturation (x = 1).
inline constexpr double kSaturationClamp = 1e-6;

/// Physical constants and water defaults. Surface tension, molar volume and
/// monolayer thickness are standard water values, overridable via config.
struct PhysicalConstants {
    double gas_constant = kGasConstant;
    double vacuum_permittivity = kVacuumPermittivity;
    double monolayer_thickness = 3e-10;  // m, statistical thickness of one water layer

    void validate() const;
};

}  // namespace humsim
