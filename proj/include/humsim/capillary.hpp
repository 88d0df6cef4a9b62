#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "humsim/adsorption.hpp"
#include "humsim/constants.hpp"

namespace humsim {

enum class Branch { adsorption, desorption };

// Kelvin radius for which no finite threshold exists.
inline constexpr double kUnboundedRadius = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double radius) { return radius == kUnboundedRadius; }

struct KelvinParameters {
    double surface_tension = 0.072;    // N/m at kRoomTemperature
    double molar_volume = 1.8e-5;      // m^3/mol
    double theta_adv_deg = 40.0;       // advancing contact angle (filling)
    double theta_rec_deg = 10.0;       // receding contact angle (emptying)
    double surface_tension_slope = 0;  // N/(m K), linear around kRoomTemperature

    /// Requires 0 <= theta_rec <= theta_adv < 90.
    void validate() const;
    double surface_tension_at(double temperature) const;
    double contact_angle_deg(Branch branch) const;
};

/// Pore radius below which vapour condenses, 2 gamma V cos(theta) / (R T ln(1/x)).
/// Returns kUnboundedRadius at theta = 90 deg.
double kelvin_radius(RelativePressure x, double temperature, const KelvinParameters& kp,
                     Branch branch, double gas_constant = kGasConstant);

/// Inverse of kelvin_radius: relative pressure at which a pore of radius r fills
/// (adsorption) or empties (desorption).
double kelvin_rh(double radius, double temperature, const KelvinParameters& kp, Branch branch,
                 double gas_constant = kGasConstant);

/// Log-normal pore radii truncated to [r_min, r_max].
struct PoreSizeDistribution {
    double median_radius = 3.75e-9;  // m
    double sigma_log = 0.2;
    double r_min = 1e-9;
    double r_max = 20e-9;
    int bins = 256;

    void validate() const;
};

/// Geometric discretization of a PoreSizeDistribution. Volume weights are
/// r^2 x number density integrated over each bin (cylinders of equal length).
struct PoreBins {
    std::vector<double> edges;    // size n + 1, ascending
    std::vector<double> radii;    // geometric bin centres
    std::vector<double> volume_weights;
    std::vector<double> number_weights;

    std::size_t size() const noexcept { return radii.size(); }

    static PoreBins discretize(const PoreSizeDistribution& psd);
    /// Caller-supplied bins; weights are renormalized to sum to one.
    static PoreBins from_edges(std::vector<double> edges, std::vector<double> volume_weights);

    /// Fraction of bin i lying below radius r, linear in ln r within the bin.
    double fraction_below(std::size_t i, double radius) const;
};

struct PoreStatistics {
    double number_mean_diameter;
    double volume_mean_diameter;
    double number_p16_diameter;  // 16th/84th number percentiles (+-1 sigma)
    double number_p84_diameter;
};

PoreStatistics pore_statistics(const PoreBins& bins);

double condensed_volume_fraction(const PoreBins& bins, double r_cut);
double condensed_volume_fraction(const PoreSizeDistribution& psd, double r_cut);

/// Hysteresis memory of the independent-pore model. Filled bins always form
/// a prefix of the radius-sorted bins; `cut_radius` is the continuous
/// boundary they are derived from.
struct PoreFillState {
    std::vector<std::uint8_t> filled;
    double cut_radius = 0;
    double last_x = 0;
    double last_temperature = kRoomTemperature;

    static PoreFillState empty(const PoreBins& bins);
    static PoreFillState full(const PoreBins& bins);
    std::size_t filled_count() const;
    bool is_prefix() const;
};

/// Independent-pore update: a bin fills if r <= r_K,ads(x); a filled bin
/// empties if r > r_K,des(x); otherwise it keeps its flag.
PoreFillState update_fill_state(const PoreFillState& state, const PoreBins& bins, RelativePressure x,
                                double temperature, const KelvinParameters& kp,
                                double gas_constant = kGasConstant);

/// Volume fraction of pore space holding water: condensed bins count fully,
/// the rest carry an annular film of thickness t_film.
double water_fill_fraction(const PoreFillState& state, const PoreBins& bins, double film_thickness);

std::string_view to_string(Branch branch);

}  // namespace humsim
