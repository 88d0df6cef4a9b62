#include "humsim/calibrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "humsim/errors.hpp"

namespace humsim {

namespace {

constexpr double kPico = 1e12;
constexpr double kFdRelStep = 1e-6;
constexpr double kFdMinStep = 1e-12;
constexpr double kGradientTol = 1e-10;
constexpr double kExactFitTol = 1e-12;
constexpr int kSmallDecreaseSteps = 3;
constexpr double kBoundFraction = 0.9;
constexpr double kBoundSnap = 1e-9;

struct ParameterAccess {
    std::function<double(const SensorConfig&)> get;
    std::function<void(SensorConfig&, double)> set;
    // Contact angles enter the model through cos(theta); the optimizer works
    // in -cos(theta), which keeps the gradient alive at theta = 0.
    bool angle = false;
};

constexpr double kDegree = 3.14159265358979323846 / 180.0;

#define HUMSIM_PARAM(NAME, FIELD)                                          \
    {                                                                      \
        NAME, {                                                            \
            [](const SensorConfig& c) { return c.FIELD; },                 \
            [](SensorConfig& c, double v) { c.FIELD = v; }                 \
        }                                                                  \
    }

const std::map<std::string, ParameterAccess>& registry() {
    static const std::map<std::string, ParameterAccess> table = {
        HUMSIM_PARAM("area", stack.area),
        HUMSIM_PARAM("oxide_thickness", stack.oxide_thickness),
        HUMSIM_PARAM("alumina_thickness", stack.alumina_thickness),
        HUMSIM_PARAM("porosity", stack.porosity),
        {"theta_adv",
         {[](const SensorConfig& c) { return c.kelvin.theta_adv_deg; },
          [](SensorConfig& c, double v) { c.kelvin.theta_adv_deg = v; }, true}},
        {"theta_rec",
         {[](const SensorConfig& c) { return c.kelvin.theta_rec_deg; },
          [](SensorConfig& c, double v) { c.kelvin.theta_rec_deg = v; }, true}},
        HUMSIM_PARAM("surface_tension", kelvin.surface_tension),
        HUMSIM_PARAM("molar_volume", kelvin.molar_volume),
        HUMSIM_PARAM("heat_first_layer", bet.heat_first_layer),
        HUMSIM_PARAM("heat_condensation", bet.heat_condensation),
        HUMSIM_PARAM("monolayer_thickness", constants.monolayer_thickness),
        HUMSIM_PARAM("median_radius", psd.median_radius),
        HUMSIM_PARAM("sigma_log", psd.sigma_log),
        HUMSIM_PARAM("eps_alumina", eps.alumina),
        HUMSIM_PARAM("eps_water", eps.water),
        HUMSIM_PARAM("eps_oxide", eps.oxide),
        HUMSIM_PARAM("surface_gain", surface.gain),
        HUMSIM_PARAM("surface_onset", surface.onset_rh),
        HUMSIM_PARAM("u_max", diffusion.u_max),
        HUMSIM_PARAM("tau0", diffusion.tau0),
        HUMSIM_PARAM("activation_energy", diffusion.activation_energy),
        HUMSIM_PARAM("t_ref", diffusion.t_ref),
        HUMSIM_PARAM("t_scale", diffusion.t_scale),
        {"max_layers",
         {[](const SensorConfig& c) { return c.layer_count(); },
          [](SensorConfig& c, double v) { c.bet.max_layers = v; }}},
    };
    return table;
}

#undef HUMSIM_PARAM

const ParameterAccess& access(const std::string& name) {
    const auto& table = registry();
    auto it = table.find(name);
    if (it == table.end()) throw UsageError("unknown fit parameter '" + name + "'");
    return it->second;
}

// Objective machinery shared by every start of a fit.
class Problem {
  public:
    Problem(const MeasurementSet& data, const FitSpec& spec, const SensorConfig& base)
        : data_(data), base_(base) {
        for (const auto& fp : spec.free_parameters) {
            setters_.push_back(&access(fp.name));
            lower_.push_back(to_internal(setters_.size() - 1, fp.lower));
            upper_.push_back(to_internal(setters_.size() - 1, fp.upper));
        }
        double sum_c = 0;
        for (const auto& r : data.rows) {
            sqrt_w_.push_back(std::sqrt(r.weight));
            weight_total_ += r.weight;
            sum_c += r.capacitance * kPico;
        }
        mean_c_pf_ = sum_c / static_cast<double>(data.rows.size());
    }

    std::size_t dims() const { return lower_.size(); }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }
    double span(std::size_t j) const { return upper_[j] - lower_[j]; }
    int evaluations() const { return evaluations_.load(); }
    double weight_total() const { return weight_total_; }
    double mean_c_pf() const { return mean_c_pf_; }

    // Optimizer coordinates <-> physical parameter values.
    double to_internal(std::size_t j, double v) const {
        return setters_[j]->angle ? -std::cos(v * kDegree) : v;
    }
    double to_physical(std::size_t j, double u) const {
        return setters_[j]->angle ? std::acos(std::clamp(-u, -1.0, 1.0)) / kDegree : u;
    }
    std::vector<double> to_internal(const std::vector<double>& v) const {
        std::vector<double> u(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) u[j] = to_internal(j, v[j]);
        return u;
    }
    std::vector<double> to_physical(const std::vector<double>& u) const {
        std::vector<double> v(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) v[j] = to_physical(j, u[j]);
        return v;
    }

    SensorConfig config_for(const std::vector<double>& u) const {
        SensorConfig cfg = base_;
        for (std::size_t j = 0; j < u.size(); ++j) setters_[j]->set(cfg, to_physical(j, u[j]));
        return cfg;
    }

    // Weighted residuals in pF; empty when the model rejects the parameters.
    std::optional<Eigen::VectorXd> evaluate(const std::vector<double>& p) const {
        ++evaluations_;
        try {
            const auto r = residuals(config_for(p), data_);
            Eigen::VectorXd v(static_cast<Eigen::Index>(r.size()));
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!std::isfinite(r[i])) return std::nullopt;
                v[static_cast<Eigen::Index>(i)] = r[i] * sqrt_w_[i];
            }
            return v;
        } catch (const DomainError&) {
            return std::nullopt;
        }
    }

  private:
    const MeasurementSet& data_;
    const SensorConfig& base_;
    std::vector<const ParameterAccess*> setters_;
    std::vector<double> lower_, upper_, sqrt_w_;
    double weight_total_ = 0;
    double mean_c_pf_ = 0;
    mutable std::atomic<int> evaluations_{0};
};

struct Outcome {
    std::vector<double> params;
    double objective = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

// Finite-difference Jacobian in bound-normalized coordinates.
Eigen::MatrixXd jacobian(const Problem& pb, const std::vector<double>& p, const Eigen::VectorXd& r0) {
    const auto k = pb.dims();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(r0.size(), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
        const double h = std::max(kFdRelStep * std::abs(p[j]), kFdMinStep);
        auto plus = p, minus = p;
        plus[j] = p[j] + h;
        minus[j] = p[j] - h;
        const bool can_plus = plus[j] <= pb.upper(j);
        const bool can_minus = minus[j] >= pb.lower(j);
        std::optional<Eigen::VectorXd> rp, rm;
        if (can_plus) rp = pb.evaluate(plus);
        if (can_minus) rm = pb.evaluate(minus);
        Eigen::VectorXd col;
        if (rp && rm)
            col = (*rp - *rm) / (2 * h);
        else if (rp)
            col = (*rp - r0) / h;
        else if (rm)
            col = (r0 - *rm) / h;
        else
            continue;
        J.col(static_cast<Eigen::Index>(j)) = col * pb.span(j);
    }
    return J;
}

// Damped step with bound-active components frozen. A component that would
// cross a bound stops short of it, so no parameter lands on a bound where the
// model may be locally flat; it snaps once the remaining gap is negligible.
Eigen::VectorXd bounded_trial(const Eigen::VectorXd& z, const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                              double lambda, const Eigen::VectorXd& scale) {
    const auto k = z.size();
    Eigen::MatrixXd M = A;
    M.diagonal() += lambda * scale;
    Eigen::VectorXd rhs = -g;
    for (Eigen::Index j = 0; j < k; ++j) {
        const bool active = (z[j] <= 0 && g[j] > 0) || (z[j] >= 1 && g[j] < 0);
        if (!active) continue;
        M.row(j).setZero();
        M.col(j).setZero();
        M(j, j) = 1;
        rhs[j] = 0;
    }
    const Eigen::VectorXd step = M.ldlt().solve(rhs);
    double alpha = 1;
    for (Eigen::Index j = 0; j < k; ++j) {
        const double gap = step[j] < 0 ? z[j] : 1 - z[j];
        if (std::abs(step[j]) <= gap || gap <= kBoundSnap) continue;
        alpha = std::min(alpha, kBoundFraction * gap / std::abs(step[j]));
    }
    return (z + alpha * step).cwiseMax(0.0).cwiseMin(1.0);
}

Outcome levenberg_marquardt(const Problem& pb, const FitSpec& spec, std::vector<double> start) {
    const auto k = pb.dims();
    auto to_params = [&](const Eigen::VectorXd& z) {
        std::vector<double> p(k);
        for (std::size_t j = 0; j < k; ++j) p[j] = pb.lower(j) + z[static_cast<Eigen::Index>(j)] * pb.span(j);
        return p;
    };
    Eigen::VectorXd z(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) z[static_cast<Eigen::Index>(j)] = (start[j] - pb.lower(j)) / pb.span(j);

    Outcome out;
    out.params = to_params(z);
    auto r = pb.evaluate(out.params);
    if (!r) throw FitError("objective is not finite at the initial parameters");
    double f = r->squaredNorm();
    out.trace.push_back(f);

    const double exact_floor = kExactFitTol * pb.mean_c_pf();
    auto exact_fit = [&](double obj) { return std::sqrt(obj / pb.weight_total()) <= exact_floor; };

    double lambda = -1;
    int small_steps = 0;
    for (int iter = 0; iter < spec.max_iterations; ++iter) {
        if (exact_fit(f)) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd J = jacobian(pb, out.params, *r);
        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * *r;

        // Cosine between the residual and each free Jacobian column.
        double cosine = 0;
        const double rnorm = r->norm();
        for (std::size_t j = 0; j < k; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const bool pinned = (z[jj] <= 0 && g[jj] > 0) || (z[jj] >= 1 && g[jj] < 0);
            const double cn = J.col(jj).norm();
            if (pinned || cn == 0) continue;
            cosine = std::max(cosine, std::abs(g[jj]) / (cn * rnorm));
        }
        if (cosine <= kGradientTol) {
            out.converged = true;
            break;
        }

        const double max_diag = A.diagonal().maxCoeff();
        if (lambda < 0) lambda = 1e-3 * (max_diag > 0 ? max_diag : 1.0);
        Eigen::VectorXd scale = A.diagonal().cwiseMax(1e-12 * std::max(max_diag, 1e-300));

        bool accepted = false;
        double rel_decrease = 0;
        double first_predicted = -1;
        while (!accepted) {
            const Eigen::VectorXd zt = bounded_trial(z, A, g, lambda, scale);
            const Eigen::VectorXd dz = zt - z;
            if (first_predicted < 0) first_predicted = -(2 * g.dot(dz) + dz.dot(A * dz)) / f;
            if (dz.cwiseAbs().maxCoeff() == 0.0) break;
            const auto pt = to_params(zt);
            auto rt = pb.evaluate(pt);
            const double ft = rt ? rt->squaredNorm() : std::numeric_limits<double>::infinity();
            if (std::isfinite(ft) && ft < f) {
                rel_decrease = (f - ft) / f;
                z = zt;
                out.params = pt;
                r = std::move(rt);
                f = ft;
                out.trace.push_back(f);
                lambda = std::max(lambda / 3.0, 1e-15 * max_diag);
                accepted = true;
            } else {
                lambda *= 4.0;
                if (lambda > 1e16 * std::max(max_diag, 1.0)) break;
            }
        }
        // No damped step improves f: a minimum if the model promised almost nothing.
        if (!accepted) {
            out.converged = exact_fit(f) || first_predicted <= spec.tolerance;
            break;
        }
        ++out.iterations;
        small_steps = rel_decrease < spec.tolerance ? small_steps + 1 : 0;
        if (small_steps >= kSmallDecreaseSteps) {
            out.converged = true;
            break;
        }
    }
    out.objective = f;
    return out;
}

std::vector<std::vector<double>> latin_hypercube(const FitSpec& spec, int samples) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto k = spec.free_parameters.size();
    const auto n = static_cast<std::size_t>(samples);
    std::vector<std::vector<double>> pts(n, std::vector<double>(k));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::size_t> strata(n);
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        const auto& fp = spec.free_parameters[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(strata[i]) + unit(rng)) / static_cast<double>(n);
            pts[i][j] = fp.lower + u * (fp.upper - fp.lower);
        }
    }
    return pts;
}

}  // namespace

bool MeasurementSet::has_branches() const {
    return std::any_of(rows.begin(), rows.end(), [](const MeasurementRow& r) { return r.branch.has_value(); });
}

void MeasurementSet::validate() const {
    if (rows.empty()) throw DataError("measurement set is empty");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!(r.rh_percent >= 0 && r.rh_percent <= 100)) throw DataError("RH outside [0, 100] in row " + std::to_string(i + 1));
        if (!(r.capacitance > 0)) throw DataError("capacitance must be positive in row " + std::to_string(i + 1));
        if (!(r.temp_c > -kCelsiusOffset)) throw DataError("temperature below absolute zero in row " + std::to_string(i + 1));
        if (!(r.weight > 0) || !std::isfinite(r.weight)) throw DataError("weight must be positive in row " + std::to_string(i + 1));
    }
}

std::vector<double> residuals(const SensorConfig& cfg, const MeasurementSet& data) {
    data.validate();
    const SensorModel model(cfg);
    std::vector<double> out;
    out.reserve(data.rows.size());

    if (data.has_branches()) {
        auto state = model.empty_state();
        const auto& first = data.rows.front();
        if (first.branch == Direction::down) {
            double rh_max = 0;
            for (const auto& r : data.rows) rh_max = std::max(rh_max, r.rh_percent);
            state = model.advance(state, RelativePressure::from_rh_percent(rh_max), first.temp_c + kCelsiusOffset);
        }
        for (const auto& row : data.rows) {
            const auto x = RelativePressure::from_rh_percent(row.rh_percent);
            const double temperature = row.temp_c + kCelsiusOffset;
            state = model.advance(state, x, temperature);
            out.push_back((model.capacitance_at(x, temperature, state).capacitance - row.capacitance) * kPico);
        }
    } else {
        const auto dry = model.empty_state();
        for (const auto& row : data.rows) {
            const auto x = RelativePressure::from_rh_percent(row.rh_percent);
            const double temperature = row.temp_c + kCelsiusOffset;
            const auto state = model.advance(dry, x, temperature);
            out.push_back((model.capacitance_at(x, temperature, state).capacitance - row.capacitance) * kPico);
        }
    }
    return out;
}

void FitSpec::validate() const {
    for (const auto& fp : free_parameters) {
        access(fp.name);
        if (!std::isfinite(fp.lower) || !std::isfinite(fp.upper) || !(fp.lower < fp.upper))
            throw UsageError("bounds of '" + fp.name + "' must be finite with lower < upper");
        if (!(fp.initial >= fp.lower && fp.initial <= fp.upper))
            throw UsageError("initial value of '" + fp.name + "' lies outside its bounds");
    }
    for (std::size_t i = 0; i < free_parameters.size(); ++i)
        for (std::size_t j = i + 1; j < free_parameters.size(); ++j)
            if (free_parameters[i].name == free_parameters[j].name)
                throw UsageError("fit parameter '" + free_parameters[i].name + "' listed twice");
    if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
    if (!(tolerance > 0)) throw UsageError("tolerance must be positive");
    if (restarts < 0) throw UsageError("restarts must be >= 0");
    if (jobs < 1) throw UsageError("jobs must be >= 1");
}

std::vector<std::string> fittable_parameters() {
    std::vector<std::string> names;
    for (const auto& [name, _] : registry()) names.push_back(name);
    return names;
}

double get_parameter(const SensorConfig& cfg, const std::string& name) { return access(name).get(cfg); }

void set_parameter(SensorConfig& cfg, const std::string& name, double value) { access(name).set(cfg, value); }

FitResult fit(const MeasurementSet& data, const FitSpec& spec, const SensorConfig& base) {
    spec.validate();
    data.validate();
    const Problem pb(data, spec, base);

    FitResult result;
    if (pb.dims() == 0) {
        const auto r = residuals(base, data);
        double ss = 0, wsum = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            ss += data.rows[i].weight * r[i] * r[i];
            wsum += data.rows[i].weight;
        }
        result.config = base;
        result.rms_pf = std::sqrt(ss / wsum);
        result.evaluations = 1;
        result.converged = true;
        result.objective_trace = {ss};
        return result;
    }

    std::vector<std::vector<double>> starts;
    std::vector<double> initial;
    for (const auto& fp : spec.free_parameters) initial.push_back(fp.initial);
    starts.push_back(pb.to_internal(initial));
    if (spec.restarts > 0)
        for (const auto& s : latin_hypercube(spec, spec.restarts)) starts.push_back(pb.to_internal(s));

    // The user's start must be valid; a random restart the model rejects is dropped.
    auto run_start = [&pb, &spec](const std::vector<double>& s, bool primary) {
        try {
            return levenberg_marquardt(pb, spec, s);
        } catch (const FitError&) {
            if (primary) throw;
            Outcome rejected;
            rejected.objective = std::numeric_limits<double>::infinity();
            return rejected;
        }
    };
    std::vector<Outcome> outcomes(starts.size());
    if (spec.jobs > 1 && starts.size() > 1) {
        std::vector<std::future<Outcome>> futures;
        for (std::size_t i = 0; i < starts.size(); ++i)
            futures.push_back(std::async(std::launch::async, run_start, starts[i], i == 0));
        for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < starts.size(); ++i) outcomes[i] = run_start(starts[i], i == 0);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        if (outcomes[i].objective < outcomes[best].objective) best = i;
    const auto& o = outcomes[best];
    const auto fitted = pb.to_physical(o.params);

    for (std::size_t j = 0; j < pb.dims(); ++j)
        result.parameters.push_back({spec.free_parameters[j].name, spec.free_parameters[j].initial, fitted[j]});
    result.config = pb.config_for(o.params);
    result.rms_pf = std::sqrt(o.objective / pb.weight_total());
    result.iterations = o.iterations;
    result.evaluations = pb.evaluations();
    result.converged = o.converged;
    result.objective_trace = o.trace;
    return result;
}

BetLinearFit bet_linear_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw DomainError("BET linear fit needs at least two points");
    std::vector<double> xs, ys;
    for (const auto& [x, v] : points) {
        if (!(x > 0 && x < 1)) throw DomainError("BET linear fit needs 0 < x < 1");
        xs.push_back(x);
        ys.push_back(bet_transform(RelativePressure(x), v));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0)) throw DomainError("BET linear fit needs distinct x values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    if (!(intercept > 0) || !(intercept + slope > 0))
        throw FitError("non-physical BET line (intercept or intercept + slope not positive)");
    return {1.0 / (intercept + slope), 1.0 + slope / intercept, intercept, slope};
}

}  // namespace humsim
