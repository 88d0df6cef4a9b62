#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "humsim/adsorption.hpp"
#include "humsim/capillary.hpp"
#include "humsim/constants.hpp"
#include "humsim/dielectric.hpp"

namespace humsim {

// Extra capacitance from a water layer on the outer surface above onset_rh.
struct SurfaceTerm {
    bool enabled = false;
    double onset_rh = 0.8;  // relative pressure
    double gain = 1e-10;    // F per unit relative pressure above onset
};

// Lateral moisture diffusion into the pore walls.
struct WallDiffusion {
    double u_max = 0.2;                  // saturation wall uptake (water fraction)
    double tau0 = 2e-4;                  // s
    double activation_energy = 40000.0;  // J/mol
    double t_ref = 278.0;                // K, uptake onset
    double t_scale = 40.0;               // K

    double equilibrium_uptake(double temperature) const;
    double time_constant(double temperature, double gas_constant = kGasConstant) const;
};

struct SensorConfig {
    PhysicalConstants constants;
    BetParameters bet;
    KelvinParameters kelvin;
    PoreSizeDistribution psd;
    LayerStack stack;
    Permittivities eps;
    MixingRule mixing = MixingRule::lichtenecker;
    SurfaceTerm surface;
    WallDiffusion diffusion;

    void validate() const;
    /// Explicit max_layers, or median radius / monolayer thickness.
    double layer_count() const;
};

struct CapacitancePoint {
    double capacitance;  // F
    double water_fill;   // effective fill including wall uptake
    double eps_eff;
};

/// Direction of travel along a sweep axis: `up` is adsorption for RH sweeps
/// and heating for temperature sweeps.
enum class Direction { up, down };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

struct SweepRow {
    double rh_percent;
    double temp_c;
    Direction branch;
    double water_fill;
    double eps_eff;
    double capacitance;  // F
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Validated config plus its pore discretization.
class SensorModel {
  public:
    explicit SensorModel(SensorConfig config);

    const SensorConfig& config() const noexcept { return config_; }
    const PoreBins& bins() const noexcept { return bins_; }

    PoreFillState empty_state() const { return PoreFillState::empty(bins_); }
    PoreFillState advance(const PoreFillState& state, RelativePressure x, double temperature) const;

    CapacitancePoint capacitance_at(RelativePressure x, double temperature, const PoreFillState& state,
                                    double wall_uptake = 0) const;

    double dry_capacitance(double temperature = kRoomTemperature) const;
    /// Capacitance with pores completely water filled (w' = 1).
    double wet_capacitance(double temperature = kRoomTemperature) const;

  private:
    SensorConfig config_;
    PoreBins bins_;
};

CapacitancePoint capacitance_at(const SensorConfig& cfg, RelativePressure x, double temperature,
                                const PoreFillState& state, double wall_uptake = 0);

/// Tags each point with the direction of travel into it; the first point takes
/// the direction of the first change, repeated values keep the previous tag.
std::vector<Direction> path_directions(std::span<const double> path);

SweepResult rh_sweep(const SensorConfig& cfg, std::span<const double> rh_path, double temperature);

SweepResult temperature_sweep(const SensorConfig& cfg, double rh_percent, std::span<const double> temperature_path,
                              double dt);

/// Least-squares slope of capacitance (pF) against RH (%) for rows of one
/// branch with RH in [rh_lo, rh_hi].
double sensitivity(const SweepResult& result, double rh_lo, double rh_hi, Direction branch);

enum class SweepAxis { rh, temperature };

/// Integral of (C_down - C_up) in pF x axis units over the range shared by
/// both branches. Zero when the branches coincide.
double loop_area(const SweepResult& result, SweepAxis axis);

/// Largest C_up - C_down (pF) at matched axis values; <= 0 when the down
/// branch dominates everywhere.
double max_branch_violation(const SweepResult& result, SweepAxis axis);

}  // namespace humsim
