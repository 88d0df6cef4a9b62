#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "humsim/calibrate.hpp"
#include "humsim/sensor.hpp"

namespace humsim {

struct SweepSettings {
    std::string rh_path = "0:95:1,95:0:1";
    double temperature_c = 25.0;
    std::string t_path = "5:95:1,95:5:1";  // deg C
    double rh_percent = 35.0;
    double dt = 60.0;  // s per temperature step
};

/// Full configuration document: sensor model plus sweep and fit sections.
struct RunConfig {
    SensorConfig sensor;
    SweepSettings sweep;
    std::optional<FitSpec> fit;
};

// Unknown keys raise ConfigError naming the offending path.
SensorConfig sensor_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SensorConfig& cfg);

FitSpec fit_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitSpec& spec);

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

RunConfig load_run_config(const std::filesystem::path& path);
FitSpec load_fit_spec(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace humsim
