#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "humsim/adsorption.hpp"
#include "humsim/calibrate.hpp"
#include "humsim/capillary.hpp"
#include "humsim/config_io.hpp"
#include "humsim/dielectric.hpp"
#include "humsim/errors.hpp"
#include "humsim/path_spec.hpp"
#include "humsim/sensor.hpp"

namespace py = pybind11;
using namespace humsim;

namespace {

nlohmann::json to_nlohmann(const py::object& obj) {
    const auto dumps = py::module_::import("json").attr("dumps");
    return nlohmann::json::parse(dumps(obj).cast<std::string>());
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

SensorConfig config_arg(const py::object& cfg) {
    if (cfg.is_none()) return SensorConfig{};
    return sensor_config_from_json(to_nlohmann(cfg));
}

std::vector<double> path_arg(const py::object& path) {
    if (py::isinstance<py::str>(path)) return parse_path_spec(path.cast<std::string>());
    return path.cast<std::vector<double>>();
}

Branch branch_arg(const std::string& s) {
    if (s == "adsorption") return Branch::adsorption;
    if (s == "desorption") return Branch::desorption;
    throw UsageError("branch must be 'adsorption' or 'desorption'");
}

template <typename F>
std::vector<double> column(const SweepResult& r, F&& f) {
    std::vector<double> out;
    out.reserve(r.rows.size());
    for (const auto& row : r.rows) out.push_back(f(row));
    return out;
}

MeasurementSet measurements_arg(const py::dict& d) {
    const auto rh = d["rh_percent"].cast<std::vector<double>>();
    const auto cap = d["capacitance_pf"].cast<std::vector<double>>();
    if (rh.size() != cap.size()) throw DataError("rh_percent and capacitance_pf differ in length");
    MeasurementSet m;
    for (std::size_t i = 0; i < rh.size(); ++i) m.rows.push_back({rh[i], cap[i] * 1e-12});
    if (d.contains("temp_c")) {
        const auto t = d["temp_c"].cast<std::vector<double>>();
        for (std::size_t i = 0; i < t.size() && i < m.rows.size(); ++i) m.rows[i].temp_c = t[i];
    }
    if (d.contains("branch")) {
        const auto b = d["branch"].cast<std::vector<std::string>>();
        for (std::size_t i = 0; i < b.size() && i < m.rows.size(); ++i) m.rows[i].branch = parse_direction(b[i]);
    }
    if (d.contains("weight")) {
        const auto w = d["weight"].cast<std::vector<double>>();
        for (std::size_t i = 0; i < w.size() && i < m.rows.size(); ++i) m.rows[i].weight = w[i];
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Porous-alumina capacitive humidity sensor simulator";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

    // Adsorption
    m.def("c_factor", [](double e1, double el, double t) { return c_factor(e1, el, t); },
          py::arg("heat_first_layer"), py::arg("heat_condensation"), py::arg("temperature"),
          "BET energy constant exp((E1 - EL) / (R T)).");
    m.def("bet_finite", [](double x, double c, double n) { return bet_finite(RelativePressure(x), c, n); },
          py::arg("x"), py::arg("c"), py::arg("layers"), "Finite-layer BET coverage v/v_m.");
    m.def("bet_infinite", [](double x, double c) { return bet_infinite(RelativePressure(x), c); },
          py::arg("x"), py::arg("c"));
    m.def("bet_transform", [](double x, double v) { return bet_transform(RelativePressure(x), v); },
          py::arg("x"), py::arg("adsorbed"));
    m.def("film_thickness", &film_thickness, py::arg("coverage"), py::arg("monolayer_thickness") = 3e-10);
    m.def(
        "bet_linear_fit",
        [](const std::vector<std::pair<double, double>>& pts) {
            const auto f = bet_linear_fit(pts);
            py::dict d;
            d["monolayer_capacity"] = f.monolayer_capacity;
            d["c"] = f.c;
            d["intercept"] = f.intercept;
            d["slope"] = f.slope;
            return d;
        },
        py::arg("points"), "Linearized BET regression on (x, v) pairs.");

    // Capillary
    py::class_<KelvinParameters>(m, "KelvinParameters")
        .def(py::init<>())
        .def_readwrite("surface_tension", &KelvinParameters::surface_tension)
        .def_readwrite("molar_volume", &KelvinParameters::molar_volume)
        .def_readwrite("theta_adv_deg", &KelvinParameters::theta_adv_deg)
        .def_readwrite("theta_rec_deg", &KelvinParameters::theta_rec_deg)
        .def_readwrite("surface_tension_slope", &KelvinParameters::surface_tension_slope);
    m.def(
        "kelvin_radius",
        [](double x, double t, const KelvinParameters& kp, const std::string& branch) {
            return kelvin_radius(RelativePressure(x), t, kp, branch_arg(branch));
        },
        py::arg("x"), py::arg("temperature"), py::arg("kelvin") = KelvinParameters{},
        py::arg("branch") = "adsorption", "Kelvin radius in m (inf when unbounded).");
    m.def(
        "kelvin_rh",
        [](double r, double t, const KelvinParameters& kp, const std::string& branch) {
            return kelvin_rh(r, t, kp, branch_arg(branch));
        },
        py::arg("radius"), py::arg("temperature"), py::arg("kelvin") = KelvinParameters{},
        py::arg("branch") = "adsorption");

    // Dielectric
    m.def(
        "effective_permittivity",
        [](double porosity, double w, const std::string& rule) {
            return effective_permittivity(porosity, w, Permittivities{}, parse_mixing_rule(rule));
        },
        py::arg("porosity"), py::arg("water_fill"), py::arg("mixing") = "lichtenecker");
    m.def("layer_capacitance", [](double eps, double area, double d) { return layer_capacitance(eps, area, d); },
          py::arg("eps"), py::arg("area"), py::arg("thickness"));
    m.def("morphology_exponent", &morphology_exponent, py::arg("c_wet"), py::arg("c_dry"), py::arg("eps_wet"),
          py::arg("eps_dry"));

    // Sensor
    m.def("default_config", [] { return to_python(to_json(SensorConfig{})); },
          "Default sensor configuration as a dict.");
    m.def("parse_path", &parse_path_spec, py::arg("spec"), "Expand an 'a:b:step,...' path.");

    py::class_<SweepResult>(m, "Sweep")
        .def_property_readonly("rh_percent", [](const SweepResult& r) { return column(r, [](auto& x) { return x.rh_percent; }); })
        .def_property_readonly("temp_c", [](const SweepResult& r) { return column(r, [](auto& x) { return x.temp_c; }); })
        .def_property_readonly("water_fill", [](const SweepResult& r) { return column(r, [](auto& x) { return x.water_fill; }); })
        .def_property_readonly("eps_eff", [](const SweepResult& r) { return column(r, [](auto& x) { return x.eps_eff; }); })
        .def_property_readonly("capacitance_pf",
                               [](const SweepResult& r) { return column(r, [](auto& x) { return x.capacitance * 1e12; }); })
        .def_property_readonly("branch",
                               [](const SweepResult& r) {
                                   std::vector<std::string> out;
                                   for (const auto& row : r.rows) out.emplace_back(to_string(row.branch));
                                   return out;
                               })
        .def("sensitivity",
             [](const SweepResult& r, double lo, double hi, const std::string& branch) {
                 return sensitivity(r, lo, hi, parse_direction(branch));
             },
             py::arg("rh_lo"), py::arg("rh_hi"), py::arg("branch") = "up", "Least-squares slope in pF per RH%.")
        .def("loop_area",
             [](const SweepResult& r, const std::string& axis) {
                 return loop_area(r, axis == "temperature" ? SweepAxis::temperature : SweepAxis::rh);
             },
             py::arg("axis") = "rh")
        .def("__len__", [](const SweepResult& r) { return r.rows.size(); });

    m.def(
        "rh_sweep",
        [](const py::object& cfg, const py::object& path, double temperature_c) {
            return rh_sweep(config_arg(cfg), path_arg(path), temperature_c + kCelsiusOffset);
        },
        py::arg("config") = py::none(), py::arg("path") = "0:95:1,95:0:1", py::arg("temperature_c") = 25.0);
    m.def(
        "temperature_sweep",
        [](const py::object& cfg, double rh, const py::object& t_path_c, double dt) {
            auto path = path_arg(t_path_c);
            for (double& t : path) t += kCelsiusOffset;
            return temperature_sweep(config_arg(cfg), rh, path, dt);
        },
        py::arg("config") = py::none(), py::arg("rh_percent") = 35.0, py::arg("t_path_c") = "5:95:1,95:5:1",
        py::arg("dt") = 60.0);

    // Calibration
    m.def(
        "fit",
        [](const py::dict& data, const py::object& spec, const py::object& base) {
            const auto result = fit(measurements_arg(data), fit_spec_from_json(to_nlohmann(spec)), config_arg(base));
            py::dict out;
            py::dict params;
            for (const auto& p : result.parameters) params[py::str(p.name)] = p.value;
            out["parameters"] = params;
            out["config"] = to_python(to_json(result.config));
            out["rms_pf"] = result.rms_pf;
            out["iterations"] = result.iterations;
            out["evaluations"] = result.evaluations;
            out["converged"] = result.converged;
            out["objective_trace"] = result.objective_trace;
            return out;
        },
        py::arg("data"), py::arg("spec"), py::arg("base") = py::none(),
        "Bounded Levenberg-Marquardt calibration. `data` holds rh_percent and capacitance_pf columns.");
}
