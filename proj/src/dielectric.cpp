#include "humsim/dielectric.hpp"

#include <cmath>
#include <string>

#include "humsim/errors.hpp"

namespace humsim {

MixingRule parse_mixing_rule(std::string_view name) {
    if (name == "lichtenecker") return MixingRule::lichtenecker;
    if (name == "parallel") return MixingRule::parallel;
    if (name == "series") return MixingRule::series;
    throw ConfigError("unknown mixing rule '" + std::string(name) + "'");
}

std::string_view to_string(MixingRule rule) {
    switch (rule) {
        case MixingRule::lichtenecker: return "lichtenecker";
        case MixingRule::parallel: return "parallel";
        case MixingRule::series: return "series";
    }
    return "lichtenecker";
}

void Permittivities::validate() const {
    if (!(alumina >= 1 && water >= 1 && air >= 1 && oxide >= 1))
        throw DomainError("relative permittivities must be >= 1");
    if (!std::isfinite(water_slope)) throw DomainError("water permittivity slope must be finite");
}

double Permittivities::water_at(double temperature) const {
    const double e = water + water_slope * (temperature - kRoomTemperature);
    if (!(e >= 1)) throw DomainError("water permittivity drops below 1 at T = " + std::to_string(temperature));
    return e;
}

void LayerStack::validate() const {
    if (!(area > 0)) throw DomainError("electrode area must be positive");
    if (!(oxide_thickness > 0 && alumina_thickness > 0)) throw DomainError("layer thicknesses must be positive");
    if (!(porosity > 0 && porosity < 1)) throw DomainError("porosity must lie in (0, 1)");
    if (!std::isfinite(morphology_exponent)) throw DomainError("morphology exponent must be finite");
}

double effective_permittivity(double porosity, double water_fill, const Permittivities& eps, MixingRule rule) {
    return effective_permittivity(porosity, water_fill, eps, eps.water, rule);
}

double effective_permittivity(double porosity, double water_fill, const Permittivities& eps, double eps_water,
                              MixingRule rule) {
    if (!(water_fill >= 0 && water_fill <= 1)) throw DomainError("water fill fraction must lie in [0, 1]");
    if (!(porosity >= 0 && porosity < 1)) throw DomainError("porosity must lie in [0, 1)");
    const double f_solid = 1.0 - porosity;
    const double f_water = porosity * water_fill;
    const double f_air = porosity * (1.0 - water_fill);
    switch (rule) {
        case MixingRule::parallel:
            return f_solid * eps.alumina + f_water * eps_water + f_air * eps.air;
        case MixingRule::series:
            return 1.0 / (f_solid / eps.alumina + f_water / eps_water + f_air / eps.air);
        case MixingRule::lichtenecker:
            break;
    }
    return std::exp(f_solid * std::log(eps.alumina) + f_water * std::log(eps_water) + f_air * std::log(eps.air));
}

double layer_capacitance(double eps, double area, double thickness, double vacuum_permittivity) {
    if (!(eps > 0 && area > 0 && thickness > 0 && vacuum_permittivity > 0))
        throw DomainError("capacitance inputs must be positive");
    return vacuum_permittivity * eps * area / thickness;
}

double stack_capacitance(const LayerStack& stack, double eps_eff, double eps_oxide, double vacuum_permittivity) {
    const double c_ox = layer_capacitance(eps_oxide, stack.area, stack.oxide_thickness, vacuum_permittivity);
    const double c_sens = layer_capacitance(eps_eff, stack.area, stack.alumina_thickness, vacuum_permittivity);
    return c_ox * c_sens / (c_ox + c_sens);
}

double morphology_exponent(double c_wet, double c_dry, double eps_wet, double eps_dry) {
    if (!(c_wet > 0 && c_dry > 0 && eps_wet > 0 && eps_dry > 0))
        throw DomainError("morphology exponent inputs must be positive");
    if (eps_wet == eps_dry) throw DomainError("degenerate permittivity ratio: eps_wet == eps_dry");
    return std::log(c_wet / c_dry) / std::log(eps_wet / eps_dry);
}

double power_law_capacitance(double c_dry, double eps_wet, double eps_dry, double exponent) {
    if (!(c_dry > 0 && eps_wet > 0 && eps_dry > 0)) throw DomainError("power-law inputs must be positive");
    return c_dry * std::pow(eps_wet / eps_dry, exponent);
}

}  // namespace humsim
