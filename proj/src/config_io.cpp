#include "humsim/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "humsim/errors.hpp"

namespace humsim {

using nlohmann::json;

namespace {

using FieldMap = std::map<std::string, std::function<void(const json&, const std::string&)>>;

void read_object(const json& j, const std::string& path, const FieldMap& fields) {
    if (!j.is_object()) throw ConfigError("'" + path + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        const std::string full = path.empty() ? key : path + "." + key;
        const auto it = fields.find(key);
        if (it == fields.end()) throw ConfigError("unknown key '" + full + "'");
        it->second(value, full);
    }
}

auto number(double& target) {
    return [&target](const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError("'" + path + "' must be a number");
        target = v.get<double>();
    };
}

auto integer(int& target) {
    return [&target](const json& v, const std::string& path) {
        if (!v.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
        target = v.get<int>();
    };
}

auto boolean(bool& target) {
    return [&target](const json& v, const std::string& path) {
        if (!v.is_boolean()) throw ConfigError("'" + path + "' must be true or false");
        target = v.get<bool>();
    };
}

auto text(std::string& target) {
    return [&target](const json& v, const std::string& path) {
        if (!v.is_string()) throw ConfigError("'" + path + "' must be a string");
        target = v.get<std::string>();
    };
}

FieldMap sensor_fields(SensorConfig& c) {
    return {
        {"constants",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"gas_constant_j_per_mol_k", number(c.constants.gas_constant)},
                          {"vacuum_permittivity_f_per_m", number(c.constants.vacuum_permittivity)},
                          {"monolayer_thickness_m", number(c.constants.monolayer_thickness)}});
         }},
        {"bet",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"monolayer_capacity", number(c.bet.monolayer_capacity)},
                          {"heat_first_layer_j_per_mol", number(c.bet.heat_first_layer)},
                          {"heat_condensation_j_per_mol", number(c.bet.heat_condensation)},
                          {"max_layers", [&c](const json& v, const std::string& path) {
                               if (v.is_null()) {
                                   c.bet.max_layers.reset();
                               } else {
                                   double n = 0;
                                   number(n)(v, path);
                                   c.bet.max_layers = n;
                               }
                           }}});
         }},
        {"kelvin",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"surface_tension_n_per_m", number(c.kelvin.surface_tension)},
                          {"surface_tension_slope_n_per_m_k", number(c.kelvin.surface_tension_slope)},
                          {"molar_volume_m3_per_mol", number(c.kelvin.molar_volume)},
                          {"theta_adv_deg", number(c.kelvin.theta_adv_deg)},
                          {"theta_rec_deg", number(c.kelvin.theta_rec_deg)}});
         }},
        {"pores",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"median_radius_m", number(c.psd.median_radius)},
                          {"sigma_log", number(c.psd.sigma_log)},
                          {"r_min_m", number(c.psd.r_min)},
                          {"r_max_m", number(c.psd.r_max)},
                          {"bins", integer(c.psd.bins)}});
         }},
        {"stack",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"area_m2", number(c.stack.area)},
                          {"oxide_thickness_m", number(c.stack.oxide_thickness)},
                          {"alumina_thickness_m", number(c.stack.alumina_thickness)},
                          {"porosity", number(c.stack.porosity)},
                          {"morphology_exponent", number(c.stack.morphology_exponent)}});
         }},
        {"permittivity",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"alumina", number(c.eps.alumina)},
                          {"water", number(c.eps.water)},
                          {"air", number(c.eps.air)},
                          {"oxide", number(c.eps.oxide)},
                          {"water_slope_per_k", number(c.eps.water_slope)},
                          {"mixing", [&c](const json& v, const std::string& path) {
                               std::string name;
                               text(name)(v, path);
                               c.mixing = parse_mixing_rule(name);
                           }}});
         }},
        {"surface_term",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"enabled", boolean(c.surface.enabled)},
                          {"onset_rh", number(c.surface.onset_rh)},
                          {"gain_f", number(c.surface.gain)}});
         }},
        {"diffusion",
         [&c](const json& j, const std::string& p) {
             read_object(j, p,
                         {{"u_max", number(c.diffusion.u_max)},
                          {"tau0_s", number(c.diffusion.tau0)},
                          {"activation_energy_j_per_mol", number(c.diffusion.activation_energy)},
                          {"t_ref_k", number(c.diffusion.t_ref)},
                          {"t_scale_k", number(c.diffusion.t_scale)}});
         }},
    };
}

void add_fit_fields(FieldMap& fields, FitSpec& s) {
    fields["free_parameters"] = [&s](const json& j, const std::string& p) {
        if (!j.is_array()) throw ConfigError("'" + p + "' must be an array");
        s.free_parameters.clear();
        for (std::size_t i = 0; i < j.size(); ++i) {
            FreeParameter fp{};
            bool has_name = false, has_lo = false, has_hi = false, has_init = false;
            const std::string ip = p + "[" + std::to_string(i) + "]";
            read_object(j[i], ip,
                        {{"name", [&](const json& v, const std::string& q) { text(fp.name)(v, q); has_name = true; }},
                         {"lower", [&](const json& v, const std::string& q) { number(fp.lower)(v, q); has_lo = true; }},
                         {"upper", [&](const json& v, const std::string& q) { number(fp.upper)(v, q); has_hi = true; }},
                         {"initial",
                          [&](const json& v, const std::string& q) { number(fp.initial)(v, q); has_init = true; }}});
            if (!(has_name && has_lo && has_hi && has_init))
                throw ConfigError("'" + ip + "' needs name, lower, upper and initial");
            s.free_parameters.push_back(fp);
        }
    };
    fields["max_iterations"] = integer(s.max_iterations);
    fields["tolerance"] = number(s.tolerance);
    fields["seed"] = [&s](const json& v, const std::string& p) {
        if (!v.is_number_unsigned()) throw ConfigError("'" + p + "' must be a non-negative integer");
        s.seed = v.get<std::uint64_t>();
    };
    fields["restarts"] = integer(s.restarts);
    fields["jobs"] = integer(s.jobs);
}

json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

SensorConfig sensor_config_from_json(const json& j) {
    SensorConfig c;
    read_object(j, "", sensor_fields(c));
    c.validate();
    return c;
}

json to_json(const SensorConfig& c) {
    return {
        {"constants",
         {{"gas_constant_j_per_mol_k", c.constants.gas_constant},
          {"vacuum_permittivity_f_per_m", c.constants.vacuum_permittivity},
          {"monolayer_thickness_m", c.constants.monolayer_thickness}}},
        {"bet",
         {{"monolayer_capacity", c.bet.monolayer_capacity},
          {"heat_first_layer_j_per_mol", c.bet.heat_first_layer},
          {"heat_condensation_j_per_mol", c.bet.heat_condensation},
          {"max_layers", c.bet.max_layers ? json(*c.bet.max_layers) : json(nullptr)}}},
        {"kelvin",
         {{"surface_tension_n_per_m", c.kelvin.surface_tension},
          {"surface_tension_slope_n_per_m_k", c.kelvin.surface_tension_slope},
          {"molar_volume_m3_per_mol", c.kelvin.molar_volume},
          {"theta_adv_deg", c.kelvin.theta_adv_deg},
          {"theta_rec_deg", c.kelvin.theta_rec_deg}}},
        {"pores",
         {{"median_radius_m", c.psd.median_radius},
          {"sigma_log", c.psd.sigma_log},
          {"r_min_m", c.psd.r_min},
          {"r_max_m", c.psd.r_max},
          {"bins", c.psd.bins}}},
        {"stack",
         {{"area_m2", c.stack.area},
          {"oxide_thickness_m", c.stack.oxide_thickness},
          {"alumina_thickness_m", c.stack.alumina_thickness},
          {"porosity", c.stack.porosity},
          {"morphology_exponent", c.stack.morphology_exponent}}},
        {"permittivity",
         {{"alumina", c.eps.alumina},
          {"water", c.eps.water},
          {"air", c.eps.air},
          {"oxide", c.eps.oxide},
          {"water_slope_per_k", c.eps.water_slope},
          {"mixing", std::string(to_string(c.mixing))}}},
        {"surface_term",
         {{"enabled", c.surface.enabled}, {"onset_rh", c.surface.onset_rh}, {"gain_f", c.surface.gain}}},
        {"diffusion",
         {{"u_max", c.diffusion.u_max},
          {"tau0_s", c.diffusion.tau0},
          {"activation_energy_j_per_mol", c.diffusion.activation_energy},
          {"t_ref_k", c.diffusion.t_ref},
          {"t_scale_k", c.diffusion.t_scale}}},
    };
}

FitSpec fit_spec_from_json(const json& j) {
    FitSpec s;
    FieldMap fields;
    add_fit_fields(fields, s);
    read_object(j, "fit", fields);
    s.validate();
    return s;
}

json to_json(const FitSpec& s) {
    json params = json::array();
    for (const auto& fp : s.free_parameters)
        params.push_back({{"name", fp.name}, {"lower", fp.lower}, {"upper", fp.upper}, {"initial", fp.initial}});
    return {{"free_parameters", params}, {"max_iterations", s.max_iterations}, {"tolerance", s.tolerance},
            {"seed", s.seed},           {"restarts", s.restarts},             {"jobs", s.jobs}};
}

RunConfig run_config_from_json(const json& j) {
    RunConfig rc;
    auto fields = sensor_fields(rc.sensor);
    fields["sweep"] = [&rc](const json& v, const std::string& p) {
        auto& s = rc.sweep;
        read_object(v, p,
                    {{"rh_path", text(s.rh_path)},
                     {"temperature_c", number(s.temperature_c)},
                     {"t_path_c", text(s.t_path)},
                     {"rh_percent", number(s.rh_percent)},
                     {"dt_s", number(s.dt)}});
    };
    fields["fit"] = [&rc](const json& v, const std::string&) { rc.fit = fit_spec_from_json(v); };
    read_object(j, "", fields);
    rc.sensor.validate();
    return rc;
}

json to_json(const RunConfig& rc) {
    json j = to_json(rc.sensor);
    j["sweep"] = {{"rh_path", rc.sweep.rh_path},
                  {"temperature_c", rc.sweep.temperature_c},
                  {"t_path_c", rc.sweep.t_path},
                  {"rh_percent", rc.sweep.rh_percent},
                  {"dt_s", rc.sweep.dt}};
    if (rc.fit) j["fit"] = to_json(*rc.fit);
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) { return run_config_from_json(read_file(path)); }

FitSpec load_fit_spec(const std::filesystem::path& path) {
    const json j = read_file(path);
    // Accept either a bare spec or a run config carrying a "fit" section.
    if (j.is_object() && j.contains("free_parameters")) return fit_spec_from_json(j);
    const auto rc = run_config_from_json(j);
    if (!rc.fit) throw ConfigError("'" + path.string() + "' has no fit section");
    return *rc.fit;
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << to_json(cfg).dump(2) << '\n';
}

}  // namespace humsim
