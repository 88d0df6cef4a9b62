#include "humsim/capillary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "humsim/errors.hpp"

namespace humsim {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double cos_deg(double deg) { return std::cos(deg * std::numbers::pi / 180.0); }

// Contact angles within this distance of 90 deg are treated as neutral wetting.
constexpr double kNeutralAngleTol = 1e-12;

void normalize(std::vector<double>& w) {
    double total = 0;
    for (double v : w) total += v;
    if (!(total > 0)) throw DomainError("pore bin weights sum to zero");
    for (double& v : w) v /= total;
}

}  // namespace

void KelvinParameters::validate() const {
    if (!(surface_tension > 0)) throw DomainError("surface tension must be positive");
    if (!(molar_volume > 0)) throw DomainError("molar volume must be positive");
    if (!std::isfinite(surface_tension_slope)) throw DomainError("surface tension slope must be finite");
    if (!(theta_rec_deg >= 0 && theta_rec_deg <= theta_adv_deg && theta_adv_deg < 90.0))
        throw DomainError("contact angles must satisfy 0 <= theta_rec <= theta_adv < 90 deg");
}

double KelvinParameters::surface_tension_at(double temperature) const {
    const double g = surface_tension + surface_tension_slope * (temperature - kRoomTemperature);
    if (!(g > 0)) throw DomainError("surface tension is non-positive at T = " + std::to_string(temperature));
    return g;
}

double KelvinParameters::contact_angle_deg(Branch branch) const {
    return branch == Branch::adsorption ? theta_adv_deg : theta_rec_deg;
}

double kelvin_radius(RelativePressure rp, double temperature, const KelvinParameters& kp, Branch branch,
                     double gas_constant) {
    const double x = rp.value();
    if (!(x > 0)) throw DomainError("Kelvin radius requires x > 0");
    if (!(temperature > 0)) throw DomainError("temperature must be positive");
    if (!(kp.molar_volume > 0)) throw DomainError("molar volume must be positive");
    const double theta = kp.contact_angle_deg(branch);
    if (!(theta >= 0 && theta <= 90.0)) throw DomainError("contact angle must lie in [0, 90] deg");
    if (theta >= 90.0 - kNeutralAngleTol) return kUnboundedRadius;
    const double gamma = kp.surface_tension_at(temperature);
    return 2.0 * gamma * kp.molar_volume * cos_deg(theta) / (gas_constant * temperature * -std::log(x));
}

double kelvin_rh(double radius, double temperature, const KelvinParameters& kp, Branch branch,
                 double gas_constant) {
    if (!(radius > 0)) throw DomainError("pore radius must be positive");
    if (!(temperature > 0)) throw DomainError("temperature must be positive");
    const double theta = kp.contact_angle_deg(branch);
    if (!(theta >= 0 && theta < 90.0)) throw DomainError("contact angle must lie in [0, 90) deg");
    if (is_unbounded(radius)) return 1.0;
    const double gamma = kp.surface_tension_at(temperature);
    return std::exp(-2.0 * gamma * kp.molar_volume * cos_deg(theta) / (radius * gas_constant * temperature));
}

void PoreSizeDistribution::validate() const {
    if (!(r_min > 0 && r_min < median_radius && median_radius < r_max))
        throw DomainError("pore radii must satisfy 0 < r_min < median < r_max");
    if (!(sigma_log > 0)) throw DomainError("sigma_log must be positive");
    if (bins < 16) throw DomainError("at least 16 pore bins are required");
}

PoreBins PoreBins::discretize(const PoreSizeDistribution& psd) {
    psd.validate();
    const auto n = static_cast<std::size_t>(psd.bins);
    PoreBins b;
    b.edges.resize(n + 1);
    const double log_span = std::log(psd.r_max / psd.r_min);
    for (std::size_t i = 0; i <= n; ++i)
        b.edges[i] = psd.r_min * std::exp(log_span * static_cast<double>(i) / static_cast<double>(n));
    b.edges.back() = psd.r_max;

    // r^2 times a log-normal number density is log-normal with the log-mean
    // shifted by 2 sigma^2.
    const double s = psd.sigma_log;
    const double mu_n = std::log(psd.median_radius);
    const double mu_v = mu_n + 2.0 * s * s;
    b.radii.resize(n);
    b.volume_weights.resize(n);
    b.number_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = std::log(b.edges[i]);
        const double hi = std::log(b.edges[i + 1]);
        b.radii[i] = std::sqrt(b.edges[i] * b.edges[i + 1]);
        b.volume_weights[i] = normal_cdf((hi - mu_v) / s) - normal_cdf((lo - mu_v) / s);
        b.number_weights[i] = normal_cdf((hi - mu_n) / s) - normal_cdf((lo - mu_n) / s);
    }
    normalize(b.volume_weights);
    normalize(b.number_weights);
    return b;
}

PoreBins PoreBins::from_edges(std::vector<double> edges, std::vector<double> volume_weights) {
    if (edges.size() < 2 || volume_weights.size() + 1 != edges.size())
        throw DomainError("pore bins need n + 1 edges for n weights");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] > 0 && edges[i] < edges[i + 1])) throw DomainError("pore bin edges must ascend from > 0");
    PoreBins b;
    b.edges = std::move(edges);
    b.volume_weights = std::move(volume_weights);
    normalize(b.volume_weights);
    b.number_weights = b.volume_weights;
    for (std::size_t i = 0; i < b.volume_weights.size(); ++i) {
        b.radii.push_back(std::sqrt(b.edges[i] * b.edges[i + 1]));
        b.number_weights[i] /= b.radii[i] * b.radii[i];
    }
    normalize(b.number_weights);
    return b;
}

double PoreBins::fraction_below(std::size_t i, double radius) const {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    if (radius <= lo) return 0.0;
    if (radius >= hi) return 1.0;
    return std::log(radius / lo) / std::log(hi / lo);
}

PoreStatistics pore_statistics(const PoreBins& bins) {
    PoreStatistics st{};
    for (std::size_t i = 0; i < bins.size(); ++i) {
        st.number_mean_diameter += 2.0 * bins.radii[i] * bins.number_weights[i];
        st.volume_mean_diameter += 2.0 * bins.radii[i] * bins.volume_weights[i];
    }
    auto percentile = [&](double p) {
        double cum = 0;
        for (std::size_t i = 0; i < bins.size(); ++i) {
            const double next = cum + bins.number_weights[i];
            if (next >= p) {
                const double t = bins.number_weights[i] > 0 ? (p - cum) / bins.number_weights[i] : 0.0;
                return 2.0 * bins.edges[i] * std::pow(bins.edges[i + 1] / bins.edges[i], t);
            }
            cum = next;
        }
        return 2.0 * bins.edges.back();
    };
    st.number_p16_diameter = percentile(normal_cdf(-1.0));
    st.number_p84_diameter = percentile(normal_cdf(1.0));
    return st;
}

double condensed_volume_fraction(const PoreBins& bins, double r_cut) {
    if (is_unbounded(r_cut) || r_cut >= bins.edges.back()) return 1.0;
    if (!(r_cut > bins.edges.front())) return 0.0;
    double f = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins.edges[i] >= r_cut) break;
        f += bins.volume_weights[i] * bins.fraction_below(i, r_cut);
    }
    return std::clamp(f, 0.0, 1.0);
}

double condensed_volume_fraction(const PoreSizeDistribution& psd, double r_cut) {
    return condensed_volume_fraction(PoreBins::discretize(psd), r_cut);
}

PoreFillState PoreFillState::empty(const PoreBins& bins) {
    PoreFillState s;
    s.filled.assign(bins.size(), 0);
    return s;
}

PoreFillState PoreFillState::full(const PoreBins& bins) {
    PoreFillState s;
    s.filled.assign(bins.size(), 1);
    s.cut_radius = bins.edges.back();
    return s;
}

std::size_t PoreFillState::filled_count() const {
    return static_cast<std::size_t>(std::count(filled.begin(), filled.end(), std::uint8_t{1}));
}

bool PoreFillState::is_prefix() const {
    return std::is_partitioned(filled.begin(), filled.end(), [](std::uint8_t f) { return f != 0; });
}

PoreFillState update_fill_state(const PoreFillState& state, const PoreBins& bins, RelativePressure x,
                                double temperature, const KelvinParameters& kp, double gas_constant) {
    if (state.filled.size() != bins.size()) throw DomainError("fill state does not match pore bins");
    if (!(temperature > 0)) throw DomainError("temperature must be positive");

    double r_ads = 0;
    double r_des = 0;
    if (x.value() > 0) {
        r_ads = kelvin_radius(x, temperature, kp, Branch::adsorption, gas_constant);
        r_des = kelvin_radius(x, temperature, kp, Branch::desorption, gas_constant);
    }

    // Per-bin: filled' = (r <= r_ads) || (filled && r <= r_des). With a
    // prefix state below `cut` this is a clamp of the cut into [r_ads, r_des].
    PoreFillState next;
    next.cut_radius = std::clamp(state.cut_radius, r_ads, r_des);
    next.last_x = x.value();
    next.last_temperature = temperature;
    next.filled.resize(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i) next.filled[i] = bins.radii[i] <= next.cut_radius ? 1 : 0;
    return next;
}

double water_fill_fraction(const PoreFillState& state, const PoreBins& bins, double film_thickness) {
    if (!(film_thickness >= 0)) throw DomainError("film thickness must be non-negative");
    if (state.filled.size() != bins.size()) throw DomainError("fill state does not match pore bins");
    double w = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double r = bins.radii[i];
        const double condensed = bins.fraction_below(i, state.cut_radius);
        const double shell = 1.0 - std::min(film_thickness, r) / r;
        const double film = 1.0 - shell * shell;
        w += bins.volume_weights[i] * (condensed + (1.0 - condensed) * film);
    }
    return std::clamp(w, 0.0, 1.0);
}

std::string_view to_string(Branch branch) {
    return branch == Branch::adsorption ? "adsorption" : "desorption";
}

}  // namespace humsim
