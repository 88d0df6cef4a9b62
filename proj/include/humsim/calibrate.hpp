#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "humsim/sensor.hpp"

namespace humsim {

struct MeasurementRow {
    double rh_percent;
    double capacitance;  // F
    double temp_c = 25.0;
    std::optional<Direction> branch;
    double weight = 1.0;
};

struct MeasurementSet {
    std::vector<MeasurementRow> rows;

    bool has_branches() const;
    void validate() const;
};

/// Model minus measured capacitance in pF, replaying the measured path.
std::vector<double> residuals(const SensorConfig& cfg, const MeasurementSet& data);

struct FreeParameter {
    std::string name;
    double lower;
    double upper;
    double initial;
};

struct FitSpec {
    std::vector<FreeParameter> free_parameters;
    int max_iterations = 100;
    double tolerance = 1e-9;  // relative objective decrease
    std::uint64_t seed = 0;
    int restarts = 0;         // extra Latin-hypercube starts
    int jobs = 1;

    void validate() const;
};

struct FittedParameter {
    std::string name;
    double initial;
    double value;
};

struct FitResult {
    std::vector<FittedParameter> parameters;
    SensorConfig config;
    double rms_pf = 0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // accepted objectives, pF^2
};

/// Names accepted in FitSpec::free_parameters.
std::vector<std::string> fittable_parameters();
double get_parameter(const SensorConfig& cfg, const std::string& name);
void set_parameter(SensorConfig& cfg, const std::string& name, double value);

/// Bounded Levenberg-Marquardt on the weighted sum of squared residuals.
FitResult fit(const MeasurementSet& data, const FitSpec& spec, const SensorConfig& base);

struct BetLinearFit {
    double monolayer_capacity;
    double c;
    double intercept;
    double slope;
};

/// Ordinary least squares through the linearized BET plot.
BetLinearFit bet_linear_fit(std::span<const std::pair<double, double>> points);

}  // namespace humsim
