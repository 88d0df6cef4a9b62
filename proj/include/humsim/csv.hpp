#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "humsim/calibrate.hpp"
#include "humsim/sensor.hpp"

namespace humsim {

/// 9 significant digits, lowercase exponent.
std::string format_number(double v);

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& footer = {});
SweepResult read_sweep_csv(std::istream& is);

/// Columns: rh_percent, capacitance_pf, and optionally temp_c, branch,
/// weight. Sweep CSVs are accepted as-is (water_fill, eps_eff ignored).
MeasurementSet read_measurement_csv(std::istream& is);
void write_measurement_csv(std::ostream& os, const MeasurementSet& data);

}  // namespace humsim
