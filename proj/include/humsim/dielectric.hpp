#pragma once

#include <string_view>

#include "humsim/constants.hpp"

namespace humsim {

enum class MixingRule { lichtenecker, parallel, series };

MixingRule parse_mixing_rule(std::string_view name);
std::string_view to_string(MixingRule rule);

struct Permittivities {
    double alumina = 9.0;
    double water = 80.0;
    double air = 1.0;
    double oxide = 3.9;
    double water_slope = 0;  // 1/K, linear around kRoomTemperature

    void validate() const;
    double water_at(double temperature) const;
};

struct LayerStack {
    double area = 1e-6;                  // m^2 electrode overlap
    double oxide_thickness = 70e-9;      // m
    double alumina_thickness = 440e-9;   // m
    double porosity = 0.25;
    double morphology_exponent = 0.3;    // power-law (C_w/C_d) = (eps_w/eps_d)^n

    void validate() const;
};

/// Three-phase (alumina, water, air) mix. `water_fill` is the fraction of
/// pore volume holding water.
double effective_permittivity(double porosity, double water_fill, const Permittivities& eps,
                              MixingRule rule = MixingRule::lichtenecker);

/// Same mix with an explicit water permittivity (temperature corrected).
double effective_permittivity(double porosity, double water_fill, const Permittivities& eps,
                              double eps_water, MixingRule rule);

double layer_capacitance(double eps, double area, double thickness,
                         double vacuum_permittivity = kVacuumPermittivity);

/// Series combination of the SiO2 insulation and the porous sensing layer.
double stack_capacitance(const LayerStack& stack, double eps_eff, double eps_oxide,
                         double vacuum_permittivity = kVacuumPermittivity);

/// Exponent n with C_w / C_d = (eps_w / eps_d)^n.
double morphology_exponent(double c_wet, double c_dry, double eps_wet, double eps_dry);

/// Forward use of the same power law.
double power_law_capacitance(double c_dry, double eps_wet, double eps_dry, double exponent);

}  // namespace humsim
