#include "humsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "humsim/calibrate.hpp"
#include "humsim/config_io.hpp"
#include "humsim/csv.hpp"
#include "humsim/errors.hpp"
#include "humsim/path_spec.hpp"
#include "humsim/sensor.hpp"
#include "humsim/svg.hpp"

namespace humsim {

namespace {

constexpr double kPico = 1e12;
constexpr double kLoopClosureTolPf = 1e-3;
constexpr double kOrderingTolPf = 1e-9;

struct Options {
    std::string config;
    std::string out;
    std::string chart;
    bool verify = false;

    // isotherm
    double c = 0;
    double layers = 0;
    int points = 101;

    // sweep / temp-sweep
    std::string path;
    std::optional<double> temperature_c;
    std::optional<double> rh;
    std::string t_path;
    std::optional<double> dt;

    // fit
    std::string data;
    std::string spec;
    std::string report;
    int jobs = 0;
};

RunConfig load_config(const Options& o) {
    std::string path = o.config;
    if (path.empty())
        if (const char* env = std::getenv("HUMSIM_CONFIG")) path = env;
    return path.empty() ? RunConfig{} : load_run_config(path);
}

// Runs `body` with a stream bound to `path`, or to `fallback` for "" / "-".
template <typename F>
void with_output(const std::string& path, std::ostream& fallback, F&& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + path + "'");
    body(f);
}

std::vector<ChartSeries> branch_series(const SweepResult& r, SweepAxis axis) {
    ChartSeries up{axis == SweepAxis::rh ? "adsorption (RH up)" : "heating", "#1f77b4", {}};
    ChartSeries down{axis == SweepAxis::rh ? "desorption (RH down)" : "cooling", "#d62728", {}};
    // Each branch starts where the previous one ended so the drawn loop is closed.
    std::optional<std::pair<double, double>> last;
    std::optional<Direction> prev;
    for (const auto& row : r.rows) {
        const std::pair<double, double> pt{axis == SweepAxis::rh ? row.rh_percent : row.temp_c, row.capacitance * kPico};
        auto& s = row.branch == Direction::up ? up : down;
        if (prev && *prev != row.branch && last) s.points.push_back(*last);
        s.points.push_back(pt);
        last = pt;
        prev = row.branch;
    }
    std::vector<ChartSeries> out;
    if (!up.points.empty()) out.push_back(std::move(up));
    if (!down.points.empty()) out.push_back(std::move(down));
    return out;
}

// Returns false (and explains on err) when an ordering or closure check fails.
bool verify_loop(const SweepResult& r, SweepAxis axis, std::ostream& err) {
    bool ok = true;
    const double violation = max_branch_violation(r, axis);
    if (violation > kOrderingTolPf) {
        err << "verify: ascending branch exceeds descending branch by " << format_number(violation) << " pF\n";
        ok = false;
    }
    if (axis == SweepAxis::rh && r.rows.size() > 1 && r.rows.front().rh_percent == r.rows.back().rh_percent) {
        const double gap = std::abs(r.rows.back().capacitance - r.rows.front().capacitance) * kPico;
        if (gap >= kLoopClosureTolPf) {
            err << "verify: loop does not close, gap " << format_number(gap) << " pF\n";
            ok = false;
        }
    }
    if (ok) err << "verify: ok\n";
    return ok;
}

int cmd_isotherm(const Options& o, std::ostream& out) {
    if (o.points < 2) throw UsageError("--points must be at least 2");
    if (!(o.c > 0)) throw UsageError("--c must be positive");
    if (!(o.layers >= 1)) throw UsageError("--layers must be >= 1");
    with_output(o.out, out, [&](std::ostream& os) {
        os << "x,coverage_finite,coverage_infinite\n";
        for (int i = 0; i < o.points; ++i) {
            const auto x = RelativePressure::clamped(static_cast<double>(i) / (o.points - 1));
            os << format_number(x.value()) << ',' << format_number(bet_finite(x, o.c, o.layers)) << ','
               << format_number(bet_infinite(x, o.c)) << '\n';
        }
    });
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const auto rc = load_config(o);
    const auto path = parse_path_spec(o.path.empty() ? rc.sweep.rh_path : o.path);
    const double t_c = o.temperature_c.value_or(rc.sweep.temperature_c);
    const auto result = rh_sweep(rc.sensor, path, t_c + kCelsiusOffset);

    std::vector<std::string> footer;
    const SensorModel model(rc.sensor);
    footer.push_back("dry_capacitance_pf = " + format_number(model.dry_capacitance(t_c + kCelsiusOffset) * kPico));
    try {
        footer.push_back("sensitivity_20_80_pf_per_rh = " + format_number(sensitivity(result, 20, 80, Direction::up)));
    } catch (const DomainError&) {
    }
    footer.push_back("loop_area_pf_rh = " + format_number(loop_area(result, SweepAxis::rh)));

    with_output(o.out, out, [&](std::ostream& os) { write_sweep_csv(os, result, footer); });
    if (!o.chart.empty())
        with_output(o.chart, out, [&](std::ostream& os) {
            write_svg_chart(os, branch_series(result, SweepAxis::rh), "Capacitance vs relative humidity",
                            "RH [%]", "C [pF]");
        });
    if (o.verify && !verify_loop(result, SweepAxis::rh, err)) return kExitData;
    return kExitOk;
}

int cmd_temp_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const auto rc = load_config(o);
    const auto path_c = parse_path_spec(o.t_path.empty() ? rc.sweep.t_path : o.t_path);
    std::vector<double> path_k;
    for (double t : path_c) path_k.push_back(t + kCelsiusOffset);
    const double rh = o.rh.value_or(rc.sweep.rh_percent);
    const double dt = o.dt.value_or(rc.sweep.dt);
    const auto result = temperature_sweep(rc.sensor, rh, path_k, dt);

    std::vector<std::string> footer{"loop_area_pf_k = " + format_number(loop_area(result, SweepAxis::temperature))};
    with_output(o.out, out, [&](std::ostream& os) { write_sweep_csv(os, result, footer); });
    if (!o.chart.empty())
        with_output(o.chart, out, [&](std::ostream& os) {
            write_svg_chart(os, branch_series(result, SweepAxis::temperature),
                            "Capacitance vs temperature at " + format_number(rh) + "% RH", "T [C]", "C [pF]");
        });
    if (o.verify && !verify_loop(result, SweepAxis::temperature, err)) return kExitData;
    return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
    if (o.data.empty()) throw UsageError("--data is required");
    std::ifstream in(o.data);
    if (!in) throw DataError("cannot open '" + o.data + "'");
    const auto data = read_measurement_csv(in);

    auto rc = load_config(o);
    FitSpec spec;
    if (!o.spec.empty())
        spec = load_fit_spec(o.spec);
    else if (rc.fit)
        spec = *rc.fit;
    else
        throw UsageError("no fit spec: pass --spec or add a fit section to the config");
    if (o.jobs > 0) spec.jobs = o.jobs;

    const auto result = fit(data, spec, rc.sensor);
    RunConfig fitted = rc;
    fitted.sensor = result.config;
    fitted.fit = spec;
    if (!o.out.empty()) save_run_config(fitted, o.out);

    const double t_ref = data.rows.front().temp_c + kCelsiusOffset;
    const auto grid = parse_path_spec("0:100:1");
    const double sens = sensitivity(rh_sweep(result.config, grid, t_ref), 20, 80, Direction::up);

    with_output(o.report, out, [&](std::ostream& os) {
        os << "converged: " << (result.converged ? "yes" : "no") << '\n';
        os << "iterations: " << result.iterations << '\n';
        os << "evaluations: " << result.evaluations << '\n';
        os << "rms_pf: " << format_number(result.rms_pf) << '\n';
        os << "sensitivity_20_80_pf_per_rh: " << format_number(sens) << '\n';
        os << "parameter,initial,fitted\n";
        for (const auto& p : result.parameters)
            os << p.name << ',' << format_number(p.initial) << ',' << format_number(p.value) << '\n';
    });
    return result.converged ? kExitOk : kExitNoConvergence;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Porous-alumina capacitive humidity sensor simulator", "humsim"};
    app.require_subcommand(1);
    Options o;

    auto* iso = app.add_subcommand("isotherm", "BET isotherm table (finite and infinite layers)");
    iso->add_option("--c", o.c, "BET energy constant c")->required();
    iso->add_option("--layers", o.layers, "maximum adsorbed layers n")->required();
    iso->add_option("--points", o.points, "grid points over x in [0, 1]")->capture_default_str();
    iso->add_option("--out", o.out, "output CSV (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "capacitance along a relative-humidity path");
    sweep->add_option("--config", o.config, "run config (JSON); defaults to $HUMSIM_CONFIG");
    sweep->add_option("--path", o.path, "RH path, e.g. 0:95:1,95:0:1");
    sweep->add_option("--temperature", o.temperature_c, "temperature [C]");
    sweep->add_option("--out", o.out, "output CSV (default stdout)");
    sweep->add_option("--chart", o.chart, "write an SVG chart");
    sweep->add_flag("--verify", o.verify, "check branch ordering and loop closure");
    sweep->add_option("--jobs", o.jobs, "worker threads (sweeps are sequential)");

    auto* tsweep = app.add_subcommand("temp-sweep", "capacitance along a temperature path at constant RH");
    tsweep->add_option("--config", o.config, "run config (JSON); defaults to $HUMSIM_CONFIG");
    tsweep->add_option("--rh", o.rh, "relative humidity [%]");
    tsweep->add_option("--t-path", o.t_path, "temperature path [C], e.g. 5:95:1,95:5:1");
    tsweep->add_option("--dt", o.dt, "time per temperature step [s]");
    tsweep->add_option("--out", o.out, "output CSV (default stdout)");
    tsweep->add_option("--chart", o.chart, "write an SVG chart");
    tsweep->add_flag("--verify", o.verify, "check branch ordering");
    tsweep->add_option("--jobs", o.jobs, "worker threads (sweeps are sequential)");

    auto* fitcmd = app.add_subcommand("fit", "calibrate model parameters against measured C(RH)");
    fitcmd->add_option("--data", o.data, "measurement CSV")->required();
    fitcmd->add_option("--config", o.config, "base run config (JSON); defaults to $HUMSIM_CONFIG");
    fitcmd->add_option("--spec", o.spec, "fit spec (JSON)");
    fitcmd->add_option("--out", o.out, "write the fitted run config here");
    fitcmd->add_option("--report", o.report, "report file (default stdout)");
    fitcmd->add_option("--jobs", o.jobs, "parallel multi-start workers");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (iso->parsed()) return cmd_isotherm(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out, err);
        if (tsweep->parsed()) return cmd_temp_sweep(o, out, err);
        return cmd_fit(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FitError& e) {
        err << "fit error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace humsim
