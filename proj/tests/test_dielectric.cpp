#include <doctest.h>

#include <cmath>
#include <random>

#include "humsim/dielectric.hpp"
#include "humsim/errors.hpp"

using namespace humsim;
using doctest::Approx;

TEST_CASE("effective_permittivity examples") {
    const Permittivities eps;
    CHECK(effective_permittivity(0.3, 0, eps) == Approx(4.65553672).epsilon(1e-8));
    CHECK(effective_permittivity(0.3, 1, eps) == Approx(17.3339186).epsilon(1e-8));
    CHECK(effective_permittivity(1e-12, 0.4, eps) == Approx(9.0).epsilon(1e-10));
    CHECK(effective_permittivity(0.0, 0.7, eps) == Approx(9.0).epsilon(1e-14));
    CHECK_THROWS_AS(effective_permittivity(0.3, 1.01, eps), DomainError);
    CHECK_THROWS_AS(effective_permittivity(0.3, -0.01, eps), DomainError);
}

TEST_CASE("mixing rules are bounded and ordered") {
    const Permittivities eps;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 2000; ++i) {
        const double p = 0.01 + 0.98 * u(rng);
        const double w = u(rng);
        const double dw = 0.01 * u(rng) + 1e-6;
        for (auto rule : {MixingRule::lichtenecker, MixingRule::parallel, MixingRule::series}) {
            const double e = effective_permittivity(p, w, eps, rule);
            CHECK(e >= eps.air * (1 - 1e-12));
            CHECK(e <= eps.water * (1 + 1e-12));
            if (w + dw <= 1) CHECK(effective_permittivity(p, w + dw, eps, rule) > e);
        }
        const double s = effective_permittivity(p, w, eps, MixingRule::series);
        const double l = effective_permittivity(p, w, eps, MixingRule::lichtenecker);
        const double par = effective_permittivity(p, w, eps, MixingRule::parallel);
        CHECK(s <= l * (1 + 1e-12));
        CHECK(l <= par * (1 + 1e-12));
        // the logarithmic rule depends on porosity and fill only through P and P*w
        const double p2 = 0.01 + 0.98 * u(rng);
        if (p2 * 1.0 >= p * w) {
            const double w2 = p * w / p2;
            const double e2 = effective_permittivity(p2, w2, eps);
            const double expect =
                std::exp((1 - p2) * std::log(9.0) + p * w * std::log(80.0));
            CHECK(e2 == Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("mixing rule names") {
    CHECK(parse_mixing_rule("series") == MixingRule::series);
    CHECK(to_string(parse_mixing_rule("lichtenecker")) == "lichtenecker");
    CHECK_THROWS_AS(parse_mixing_rule("bruggeman"), ConfigError);
}

TEST_CASE("layer_capacitance") {
    CHECK(layer_capacitance(9, 1e-6, 440e-9) == Approx(1.81104545e-10).epsilon(1e-8));
    CHECK(layer_capacitance(3.9, 1e-6, 70e-9) == Approx(4.93294286e-10).epsilon(1e-8));
    CHECK(layer_capacitance(9, 1e-6, 880e-9) == Approx(layer_capacitance(9, 1e-6, 440e-9) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(layer_capacitance(9, 0, 1e-7), DomainError);
    CHECK_THROWS_AS(layer_capacitance(9, 1e-6, -1e-7), DomainError);
    CHECK_THROWS_AS(layer_capacitance(0, 1e-6, 1e-7), DomainError);
}

TEST_CASE("stack_capacitance") {
    LayerStack st;
    // C_ox = 493.3 pF in series with C_sens = 181.1 pF
    CHECK(stack_capacitance(st, 9.0, 3.9) == Approx(1.32470332e-10).epsilon(1e-8));

    LayerStack sym;
    sym.oxide_thickness = sym.alumina_thickness = 100e-9;
    const double c_layer = layer_capacitance(5, sym.area, 100e-9);
    CHECK(stack_capacitance(sym, 5, 5) == Approx(c_layer / 2).epsilon(1e-14));

    LayerStack thin = st;
    thin.oxide_thickness = 1e-20;
    CHECK(stack_capacitance(thin, 9, 3.9) == Approx(layer_capacitance(9, st.area, st.alumina_thickness)).epsilon(1e-10));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 500; ++i) {
        LayerStack s;
        s.oxide_thickness = 10e-9 + 200e-9 * u(rng);
        s.alumina_thickness = 10e-9 + 500e-9 * u(rng);
        const double ea = 1 + 30 * u(rng), eo = 1 + 10 * u(rng);
        const double c = stack_capacitance(s, ea, eo);
        CHECK(c < layer_capacitance(ea, s.area, s.alumina_thickness));
        CHECK(c < layer_capacitance(eo, s.area, s.oxide_thickness));
        LayerStack swapped = s;
        std::swap(swapped.oxide_thickness, swapped.alumina_thickness);
        CHECK(stack_capacitance(swapped, eo, ea) == Approx(c).epsilon(1e-14));
    }
}

TEST_CASE("morphology_exponent") {
    CHECK(morphology_exponent(2e-10, 2e-10, 80, 5) == 0.0);
    CHECK(morphology_exponent(16e-10, 1e-10, 80, 5) == Approx(1.0).epsilon(1e-14));
    CHECK(morphology_exponent(2, 1, 80, 5) == Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(morphology_exponent(2, 1, 5, 5), DomainError);
    CHECK_THROWS_AS(morphology_exponent(-2, 1, 80, 5), DomainError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10);
    for (int i = 0; i < 200; ++i) {
        const double cd = u(rng) * 1e-10, cw = u(rng) * 1e-10, ew = 1 + u(rng) * 8, ed = 1 + u(rng);
        if (ew == ed) continue;
        const double n = morphology_exponent(cw, cd, ew, ed);
        CHECK(std::abs(power_law_capacitance(cd, ew, ed, n) - cw) / cw < 1e-12);
    }
}

TEST_CASE("morphology exponent of a stack does not depend on area") {
    const Permittivities eps;
    LayerStack st;
    st.porosity = 0.3;
    const double ed = effective_permittivity(st.porosity, 0, eps);
    const double ew = effective_permittivity(st.porosity, 1, eps);
    const double n1 = morphology_exponent(stack_capacitance(st, ew, eps.oxide), stack_capacitance(st, ed, eps.oxide),
                                          eps.water, ed);
    for (double scale : {1e-3, 0.5, 7.0, 1e4}) {
        LayerStack s2 = st;
        s2.area *= scale;
        const double n2 = morphology_exponent(stack_capacitance(s2, ew, eps.oxide),
                                              stack_capacitance(s2, ed, eps.oxide), eps.water, ed);
        CHECK(n2 == Approx(n1).epsilon(1e-12));
    }
    CHECK(n1 > 0);
    CHECK(n1 < 1);
}

TEST_CASE("validation") {
    LayerStack st;
    st.porosity = 1.0;
    CHECK_THROWS_AS(st.validate(), DomainError);
    st = {};
    st.area = 0;
    CHECK_THROWS_AS(st.validate(), DomainError);
    Permittivities e;
    e.water = 0.5;
    CHECK_THROWS_AS(e.validate(), DomainError);
    Permittivities slope;
    slope.water_slope = -0.4;
    CHECK(slope.water_at(308.15) == Approx(76.0));
}
