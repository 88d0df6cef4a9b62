#include "humsim/adsorption.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "humsim/errors.hpp"

namespace humsim {

void PhysicalConstants::validate() const {
    if (!(gas_constant > 0) || !(vacuum_permittivity > 0) || !(monolayer_thickness > 0))
        throw DomainError("physical constants must be strictly positive");
}

RelativePressure::RelativePressure(double x) : x_(x) {
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError("relative pressure must lie in [0, 1), got " + std::to_string(x));
}

RelativePressure RelativePressure::clamped(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("relative pressure must lie in [0, 1], got " + std::to_string(x));
    return RelativePressure(std::min(x, 1.0 - kSaturationClamp));
}

RelativePressure RelativePressure::from_rh_percent(double rh) {
    if (!(rh >= 0.0 && rh <= 100.0))
        throw DomainError("relative humidity must lie in [0, 100] %, got " + std::to_string(rh));
    return clamped(rh / 100.0);
}

void BetParameters::validate() const {
    if (!(monolayer_capacity > 0)) throw DomainError("monolayer capacity must be positive");
    if (!std::isfinite(heat_first_layer) || !std::isfinite(heat_condensation))
        throw DomainError("adsorption heats must be finite");
    if (max_layers && !(*max_layers >= 1.0)) throw DomainError("max_layers must be >= 1");
}

double c_factor(double heat_first_layer, double heat_condensation, double temperature, double gas_constant) {
    if (!(temperature > 0)) throw DomainError("temperature must be positive");
    if (!std::isfinite(heat_first_layer) || !std::isfinite(heat_condensation))
        throw DomainError("adsorption heats must be finite");
    return std::exp((heat_first_layer - heat_condensation) / (gas_constant * temperature));
}

double bet_finite(RelativePressure rp, double c, double layers) {
    if (!(c > 0)) throw DomainError("BET constant c must be positive");
    if (!(layers >= 1.0)) throw DomainError("layer count must be >= 1");
    const double x = rp.value();
    if (x == 0.0) return 0.0;

    // With s = 1 - x and q = x^n:
    //   1 - (n+1) x^n + n x^(n+1) = (1 - q) - n q s
    //   1 + (c-1) x - c x^(n+1)   = s + c x (1 - q)
    // 1 - q comes from expm1 so both stay accurate as x -> 1.
    const double s = 1.0 - x;
    const double nlx = layers * std::log(x);
    const double one_minus_q = -std::expm1(nlx);
    const double q = std::exp(nlx);
    const double num = one_minus_q - layers * q * s;
    const double den = s + c * x * one_minus_q;
    return c * x * num / (s * den);
}

double bet_infinite(RelativePressure rp, double c) {
    if (!(c > 0)) throw DomainError("BET constant c must be positive");
    const double x = rp.value();
    return c * x / ((1.0 - x) * (1.0 + (c - 1.0) * x));
}

double bet_transform(RelativePressure rp, double adsorbed) {
    const double x = rp.value();
    if (x == 0.0) throw DomainError("BET transform undefined at x = 0");
    if (!(adsorbed > 0)) throw DomainError("adsorbed quantity must be positive");
    return x / (adsorbed * (1.0 - x));
}

double film_thickness(double coverage, double monolayer_thickness) {
    if (!(coverage >= 0)) throw DomainError("coverage must be non-negative");
    if (!(monolayer_thickness > 0)) throw DomainError("monolayer thickness must be positive");
    return coverage * monolayer_thickness;
}

}  // namespace humsim
