// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "humsim/adsorption.hpp"
#include "humsim/calibrate.hpp"
#include "humsim/capillary.hpp"
#include "humsim/cli.hpp"
#include "humsim/csv.hpp"
#include "humsim/path_spec.hpp"
#include "humsim/sensor.hpp"

using namespace humsim;

namespace {

constexpr double kT = kRoomTemperature;
constexpr double kPico = 1e12;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Outcome bet_reductions() {
    double worst_langmuir = 0, worst_inf = 0;
    for (double c : {0.5, 1.0, 10.0, 100.0})
        for (int i = 0; i <= 900; ++i) {
            const RelativePressure x(i / 1000.0);
            const double langmuir = c * x.value() / (1 + c * x.value());
            worst_langmuir = std::max(worst_langmuir, std::abs(bet_finite(x, c, 1) - langmuir));
            worst_inf = std::max(worst_inf, std::abs(bet_finite(x, c, 1e4) - bet_infinite(x, c)));
        }
    return {worst_langmuir <= 1e-6 && worst_inf <= 1e-6,
            fmt("max |n=1 - Langmuir| = %.3g, max |n=1e4 - inf| = %.3g", worst_langmuir, worst_inf)};
}

Outcome bet_plot_identity() {
    double worst = 0;
    for (double vm : {0.7, 1.0, 3.2})
        for (double c : {2.0, 15.0, 120.0}) {
            std::vector<std::pair<double, double>> pts;
            for (int i = 1; i <= 7; ++i) {
                const double x = 0.05 * i;
                pts.emplace_back(x, vm * bet_infinite(RelativePressure(x), c));
            }
            const auto f = bet_linear_fit(pts);
            worst = std::max({worst, std::abs(f.monolayer_capacity / vm - 1), std::abs(f.c / c - 1)});
        }
    return {worst < 1e-6, fmt("max relative error %.3g", worst)};
}

Outcome kelvin_desk_values() {
    KelvinParameters kp;
    kp.theta_adv_deg = kp.theta_rec_deg = 0;
    const double r = kelvin_radius(RelativePressure(0.9), kT, kp, Branch::adsorption);
    const double x = kelvin_rh(3e-9, kT, kp, Branch::adsorption);
    const bool ok = std::abs(r / 9.93e-9 - 1) <= 0.01 && std::abs(x / 0.706 - 1) <= 0.01;
    return {ok, fmt("r_K(0.9) = %.4f nm, ", r * 1e9) + fmt("x(3 nm) = %.4f", x)};
}

Outcome hysteresis_loop() {
    const auto path = parse_path_spec("0:95:1,95:0:1");
    const auto r = rh_sweep(SensorConfig{}, path, kT);
    const double violation = max_branch_violation(r, SweepAxis::rh);
    const double gap = std::abs(r.rows.back().capacitance - r.rows.front().capacitance) * kPico;
    SensorConfig equal;
    equal.kelvin.theta_rec_deg = equal.kelvin.theta_adv_deg;
    const auto flat = rh_sweep(equal, path, kT);
    double width = 0;
    const std::size_t n = flat.rows.size();
    for (std::size_t i = 0; i < n / 2 + 1; ++i)
        width = std::max(width, std::abs(flat.rows[n - 1 - i].capacitance - flat.rows[i].capacitance) * kPico);
    const bool ok = violation <= 0 && gap < 1e-3 && width == 0 && loop_area(r, SweepAxis::rh) > 0;
    return {ok, fmt("max(C_asc - C_desc) = %.3g pF, closure gap %.3g pF", violation, gap) +
                    fmt(", equal-angle width %.3g pF", width)};
}

Outcome high_rh_enhancement() {
    const auto r = rh_sweep(SensorConfig{}, parse_path_spec("0:95:1"), kT);
    const double mid = sensitivity(r, 40, 60, Direction::up);
    const double high = sensitivity(r, 80, 95, Direction::up);
    return {mid > 0 && high >= 1.5 * mid, fmt("slope 40-60 = %.4g, 80-95 = %.4g pF/RH%%", mid, high) +
                                               fmt(", ratio %.3g", high / mid)};
}

MeasurementSet loop_measurements(const SensorConfig& cfg, double noise, std::uint64_t seed) {
    const auto sweep = rh_sweep(cfg, parse_path_spec("0:95:5,95:0:5"), kT);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0, 1);
    MeasurementSet m;
    for (const auto& row : sweep.rows)
        m.rows.push_back({row.rh_percent, row.capacitance * (1 + noise * gauss(rng)), 25.0, row.branch});
    return m;
}

FitSpec four_free(const SensorConfig& start) {
    FitSpec s;
    s.free_parameters = {{"area", 0.2e-6, 20e-6, start.stack.area},
                         {"porosity", 0.05, 0.6, start.stack.porosity},
                         {"theta_adv", 0, 80, start.kelvin.theta_adv_deg},
                         {"theta_rec", 0, 80, start.kelvin.theta_rec_deg}};
    s.max_iterations = 200;
    return s;
}

Outcome sensitivity_reproduction() {
    const auto grid = parse_path_spec("0:100:1");
    // Target: the model shape with its 20-80% slope scaled to 5 pF/RH%.
    SensorConfig target;
    target.stack.porosity = 0.3;
    target.kelvin.theta_adv_deg = 45;
    target.kelvin.theta_rec_deg = 15;
    const double s0 = sensitivity(rh_sweep(target, grid, kT), 20, 80, Direction::up);
    target.stack.area *= 5.0 / s0;
    const auto data = loop_measurements(target, 0, 0);

    const auto res = fit(data, four_free(SensorConfig{}), SensorConfig{});
    const double s = sensitivity(rh_sweep(res.config, grid, kT), 20, 80, Direction::up);
    const bool ok = res.converged && std::abs(s - 5.0) <= 0.1 && res.evaluations < 200;
    return {ok, fmt("fitted sensitivity %.4f pF/RH%%, ", s) +
                    fmt("%.0f evaluations, rms %.3g pF", res.evaluations, res.rms_pf) +
                    (res.converged ? "" : ", not converged")};
}

Outcome temperature_hysteresis() {
    std::vector<double> path;
    for (double t : parse_path_spec("5:95:1,95:5:1")) path.push_back(t + kCelsiusOffset);
    const auto r = temperature_sweep(SensorConfig{}, 35, path, 60);
    const auto hot = std::find_if(r.rows.begin(), r.rows.end(), [](const SweepRow& w) { return w.temp_c >= 95 - 1e-9; });
    const double c5 = r.rows.front().capacitance * kPico, c95 = hot->capacitance * kPico;
    const double area = loop_area(r, SweepAxis::temperature);
    SensorConfig none;
    none.diffusion.u_max = 0;
    const double flat = loop_area(temperature_sweep(none, 35, path, 60), SweepAxis::temperature);
    return {c95 > c5 && area > 0 && flat == 0,
            fmt("C(5) = %.4f pF, C(95) = %.4f pF, ", c5, c95) + fmt("area %.4g pF*K, u_max=0 area %.3g", area, flat)};
}

Outcome parameter_recovery() {
    SensorConfig truth;
    truth.stack.area = 1.3e-6;
    truth.stack.porosity = 0.32;
    truth.kelvin.theta_adv_deg = 48;
    truth.kelvin.theta_rec_deg = 14;
    const auto clean = loop_measurements(truth, 0, 0);
    const auto spec = four_free(SensorConfig{});

    const auto res = fit(clean, spec, SensorConfig{});
    double worst = 0;
    for (const auto& p : res.parameters) worst = std::max(worst, std::abs(p.value / get_parameter(truth, p.name) - 1));

    double worst_ratio = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto noisy = loop_measurements(truth, 0.01, seed);
        double injected = 0;
        for (std::size_t i = 0; i < clean.rows.size(); ++i) {
            const double d = (noisy.rows[i].capacitance - clean.rows[i].capacitance) * kPico;
            injected += d * d;
        }
        injected = std::sqrt(injected / static_cast<double>(clean.rows.size()));
        worst_ratio = std::max(worst_ratio, fit(noisy, spec, SensorConfig{}).rms_pf / injected);
    }
    return {worst < 1e-3 && worst_ratio <= 2,
            fmt("noiseless max rel error %.3g, noisy max rms/noise %.3f over 10 seeds", worst, worst_ratio)};
}

std::string cli_output(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    run_cli(args, out, err);
    return out.str();
}

Outcome determinism_and_formats() {
    const std::vector<std::vector<std::string>> commands = {
        {"isotherm", "--c", "20", "--layers", "8"},
        {"sweep"},
        {"temp-sweep", "--t-path", "5:95:2,95:5:2"},
    };
    bool identical = true;
    for (const auto& cmd : commands) identical = identical && cli_output(cmd) == cli_output(cmd);

    const std::string text = cli_output({"sweep"});
    std::istringstream in(text);
    std::ostringstream again;
    const auto parsed = read_sweep_csv(in);
    std::vector<std::string> footer;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);)
        if (line.rfind("# ", 0) == 0) footer.push_back(line.substr(2));
    write_sweep_csv(again, parsed, footer);
    const bool lossless = again.str() == text;
    return {identical && lossless, std::string("repeat runs ") + (identical ? "identical" : "differ") +
                                       ", CSV round trip " + (lossless ? "byte-identical" : "differs")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"BET reductions", bet_reductions},
        {"BET-plot identity", bet_plot_identity},
        {"Kelvin desk values", kelvin_desk_values},
        {"hysteresis loop", hysteresis_loop},
        {"high-RH sensitivity enhancement", high_rh_enhancement},
        {"sensitivity reproduction", sensitivity_reproduction},
        {"temperature hysteresis", temperature_hysteresis},
        {"parameter recovery", parameter_recovery},
        {"determinism and formats", determinism_and_formats},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
