#include "humsim/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "humsim/errors.hpp"

namespace humsim {

namespace {

constexpr double kPico = 1e12;
constexpr double kAxisMatchTol = 1e-9;

struct BranchPoint {
    double axis;
    double cap_pf;
};

void split_branches(const SweepResult& result, SweepAxis axis, std::vector<BranchPoint>& up,
                    std::vector<BranchPoint>& down) {
    for (const auto& row : result.rows) {
        const double a = axis == SweepAxis::rh ? row.rh_percent : row.temp_c;
        (row.branch == Direction::up ? up : down).push_back({a, row.capacitance * kPico});
    }
    auto by_axis = [](const BranchPoint& l, const BranchPoint& r) { return l.axis < r.axis; };
    std::stable_sort(up.begin(), up.end(), by_axis);
    std::stable_sort(down.begin(), down.end(), by_axis);
}

double interpolate(const std::vector<BranchPoint>& pts, double a) {
    auto it = std::lower_bound(pts.begin(), pts.end(), a,
                               [](const BranchPoint& p, double v) { return p.axis < v; });
    if (it == pts.end()) return pts.back().cap_pf;
    if (it->axis == a || it == pts.begin()) return it->cap_pf;
    const auto prev = it - 1;
    const double t = (a - prev->axis) / (it->axis - prev->axis);
    return prev->cap_pf + t * (it->cap_pf - prev->cap_pf);
}

}  // namespace

double WallDiffusion::equilibrium_uptake(double temperature) const {
    const double u = u_max * -std::expm1(-(temperature - t_ref) / t_scale);
    return std::clamp(u, 0.0, u_max);
}

double WallDiffusion::time_constant(double temperature, double gas_constant) const {
    if (!(temperature > 0)) throw DomainError("temperature must be positive");
    return tau0 * std::exp(activation_energy / (gas_constant * temperature));
}

void SensorConfig::validate() const {
    constants.validate();
    bet.validate();
    kelvin.validate();
    psd.validate();
    stack.validate();
    eps.validate();
    if (!(surface.onset_rh > 0 && surface.onset_rh < 1)) throw DomainError("surface onset_rh must lie in (0, 1)");
    if (!std::isfinite(surface.gain)) throw DomainError("surface gain must be finite");
    if (!(diffusion.u_max >= 0 && diffusion.u_max <= 1)) throw DomainError("u_max must lie in [0, 1]");
    if (!(diffusion.tau0 > 0)) throw DomainError("tau0 must be positive");
    if (!std::isfinite(diffusion.activation_energy)) throw DomainError("activation energy must be finite");
    if (!(diffusion.t_ref > 0 && diffusion.t_scale > 0)) throw DomainError("t_ref and t_scale must be positive");
}

double SensorConfig::layer_count() const {
    if (bet.max_layers) return *bet.max_layers;
    return std::max(1.0, psd.median_radius / constants.monolayer_thickness);
}

std::string_view to_string(Direction d) { return d == Direction::up ? "up" : "down"; }

Direction parse_direction(std::string_view s) {
    if (s == "up") return Direction::up;
    if (s == "down") return Direction::down;
    throw DataError("unknown branch tag '" + std::string(s) + "'");
}

SensorModel::SensorModel(SensorConfig config) : config_(std::move(config)) {
    config_.validate();
    bins_ = PoreBins::discretize(config_.psd);
}

PoreFillState SensorModel::advance(const PoreFillState& state, RelativePressure x, double temperature) const {
    return update_fill_state(state, bins_, x, temperature, config_.kelvin, config_.constants.gas_constant);
}

CapacitancePoint SensorModel::capacitance_at(RelativePressure x, double temperature, const PoreFillState& state,
                                             double wall_uptake) const {
    const auto& cfg = config_;
    if (!(wall_uptake >= 0 && wall_uptake <= cfg.diffusion.u_max * (1 + 1e-12)))
        throw DomainError("wall uptake must lie in [0, u_max]");
    const double c = c_factor(cfg.bet.heat_first_layer, cfg.bet.heat_condensation, temperature,
                              cfg.constants.gas_constant);
    const double coverage = bet_finite(x, c, cfg.layer_count());
    const double t_film = film_thickness(coverage, cfg.constants.monolayer_thickness);
    const double w = std::min(1.0, water_fill_fraction(state, bins_, t_film) + wall_uptake);
    const double eps_eff =
        effective_permittivity(cfg.stack.porosity, w, cfg.eps, cfg.eps.water_at(temperature), cfg.mixing);
    double cap = stack_capacitance(cfg.stack, eps_eff, cfg.eps.oxide, cfg.constants.vacuum_permittivity);
    if (cfg.surface.enabled && x.value() > cfg.surface.onset_rh)
        cap += cfg.surface.gain * (x.value() - cfg.surface.onset_rh);
    return {cap, w, eps_eff};
}

double SensorModel::dry_capacitance(double temperature) const {
    const auto& cfg = config_;
    const double eps_eff =
        effective_permittivity(cfg.stack.porosity, 0.0, cfg.eps, cfg.eps.water_at(temperature), cfg.mixing);
    return stack_capacitance(cfg.stack, eps_eff, cfg.eps.oxide, cfg.constants.vacuum_permittivity);
}

double SensorModel::wet_capacitance(double temperature) const {
    const auto& cfg = config_;
    const double eps_eff =
        effective_permittivity(cfg.stack.porosity, 1.0, cfg.eps, cfg.eps.water_at(temperature), cfg.mixing);
    return stack_capacitance(cfg.stack, eps_eff, cfg.eps.oxide, cfg.constants.vacuum_permittivity);
}

CapacitancePoint capacitance_at(const SensorConfig& cfg, RelativePressure x, double temperature,
                                const PoreFillState& state, double wall_uptake) {
    return SensorModel(cfg).capacitance_at(x, temperature, state, wall_uptake);
}

std::vector<Direction> path_directions(std::span<const double> path) {
    std::vector<Direction> dirs(path.size(), Direction::up);
    Direction current = Direction::up;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i] != path[i - 1]) {
            current = path[i] > path[i - 1] ? Direction::up : Direction::down;
            break;
        }
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0 && path[i] != path[i - 1]) current = path[i] > path[i - 1] ? Direction::up : Direction::down;
        dirs[i] = current;
    }
    return dirs;
}

SweepResult rh_sweep(const SensorConfig& cfg, std::span<const double> rh_path, double temperature) {
    const SensorModel model(cfg);
    if (!(temperature > 0)) throw DomainError("temperature must be positive");
    const auto dirs = path_directions(rh_path);
    SweepResult out;
    out.rows.reserve(rh_path.size());
    auto state = model.empty_state();
    for (std::size_t i = 0; i < rh_path.size(); ++i) {
        const auto x = RelativePressure::from_rh_percent(rh_path[i]);
        state = model.advance(state, x, temperature);
        const auto p = model.capacitance_at(x, temperature, state);
        out.rows.push_back({rh_path[i], temperature - kCelsiusOffset, dirs[i], p.water_fill, p.eps_eff, p.capacitance});
    }
    return out;
}

SweepResult temperature_sweep(const SensorConfig& cfg, double rh_percent, std::span<const double> temperature_path,
                              double dt) {
    const SensorModel model(cfg);
    if (!(dt > 0)) throw DomainError("time step must be positive");
    const auto x = RelativePressure::from_rh_percent(rh_percent);
    const auto& diff = model.config().diffusion;
    const double gas_constant = model.config().constants.gas_constant;
    const auto dirs = path_directions(temperature_path);

    SweepResult out;
    out.rows.reserve(temperature_path.size());
    auto state = model.empty_state();
    double uptake = 0;  // walls start dry
    for (std::size_t i = 0; i < temperature_path.size(); ++i) {
        const double temperature = temperature_path[i];
        if (!(temperature > 0)) throw DomainError("temperature must be positive");
        const double target = diff.equilibrium_uptake(temperature);
        const double alpha = std::min(1.0, dt / diff.time_constant(temperature, gas_constant));
        uptake = std::clamp(uptake + alpha * (target - uptake), 0.0, diff.u_max);
        state = model.advance(state, x, temperature);
        const auto p = model.capacitance_at(x, temperature, state, uptake);
        out.rows.push_back({rh_percent, temperature - kCelsiusOffset, dirs[i], p.water_fill, p.eps_eff, p.capacitance});
    }
    return out;
}

double sensitivity(const SweepResult& result, double rh_lo, double rh_hi, Direction branch) {
    double n = 0, sx = 0, sy = 0;
    for (const auto& r : result.rows) {
        if (r.branch != branch || r.rh_percent < rh_lo || r.rh_percent > rh_hi) continue;
        n += 1;
        sx += r.rh_percent;
        sy += r.capacitance * kPico;
    }
    if (n < 2) throw DomainError("sensitivity needs at least two points in the band");
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& r : result.rows) {
        if (r.branch != branch || r.rh_percent < rh_lo || r.rh_percent > rh_hi) continue;
        sxx += (r.rh_percent - mx) * (r.rh_percent - mx);
        sxy += (r.rh_percent - mx) * (r.capacitance * kPico - my);
    }
    if (!(sxx > 0)) throw DomainError("sensitivity needs at least two distinct RH values in the band");
    return sxy / sxx;
}

double loop_area(const SweepResult& result, SweepAxis axis) {
    std::vector<BranchPoint> up, down;
    split_branches(result, axis, up, down);
    if (up.empty() || down.empty()) return 0.0;
    const double lo = std::max(up.front().axis, down.front().axis);
    const double hi = std::min(up.back().axis, down.back().axis);
    if (!(hi > lo)) return 0.0;

    std::vector<double> nodes;
    for (const auto& p : up)
        if (p.axis >= lo && p.axis <= hi) nodes.push_back(p.axis);
    for (const auto& p : down)
        if (p.axis >= lo && p.axis <= hi) nodes.push_back(p.axis);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    double area = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double d0 = interpolate(down, nodes[i - 1]) - interpolate(up, nodes[i - 1]);
        const double d1 = interpolate(down, nodes[i]) - interpolate(up, nodes[i]);
        area += 0.5 * (d0 + d1) * (nodes[i] - nodes[i - 1]);
    }
    return area;
}

double max_branch_violation(const SweepResult& result, SweepAxis axis) {
    std::vector<BranchPoint> up, down;
    split_branches(result, axis, up, down);
    double worst = 0;
    bool matched = false;
    for (const auto& u : up) {
        for (const auto& d : down) {
            if (std::abs(u.axis - d.axis) > kAxisMatchTol) continue;
            const double v = u.cap_pf - d.cap_pf;
            worst = matched ? std::max(worst, v) : v;
            matched = true;
        }
    }
    return worst;
}

}  // namespace humsim
