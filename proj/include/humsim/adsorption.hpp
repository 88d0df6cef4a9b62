#pragma once

#include <optional>

#include "humsim/constants.hpp"

namespace humsim {

/// Ratio p/p0 in [0, 1).
class RelativePressure {
  public:
    explicit RelativePressure(double x);

    /// Maps x in [0, 1] to the isotherm domain; 1 becomes 1 - kSaturationClamp.
    static RelativePressure clamped(double x);
    static RelativePressure from_rh_percent(double rh);

    double value() const noexcept { return x_; }

  private:
    double x_;
};

/// BET parameters. Coverage is reported as v/v_m, so monolayer_capacity only
/// enters when converting to an absolute adsorbed quantity.
struct BetParameters {
    double monolayer_capacity = 1.0;
    double heat_first_layer = 49000.0;   // J/mol
    double heat_condensation = 44000.0;  // J/mol
    // Unset: tied to geometry as median pore radius / monolayer thickness.
    std::optional<double> max_layers;

    void validate() const;
};

double c_factor(double heat_first_layer, double heat_condensation, double temperature,
                double gas_constant = kGasConstant);

/// Finite-layer BET coverage v/v_m. Layer count is real valued; x^n is
/// evaluated as exp(n ln x).
double bet_finite(RelativePressure x, double c, double layers);

double bet_infinite(RelativePressure x, double c);

/// Linearized BET ordinate x / (v (1 - x)).
double bet_transform(RelativePressure x, double adsorbed);

double film_thickness(double coverage, double monolayer_thickness);

}  // namespace humsim
