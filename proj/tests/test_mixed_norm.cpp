#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hgo/mixed_norm.hpp"

using Catch::Matchers::WithinRel;
using hgo::MixedNormParams;
using hgo::Support;
using hgo::TestFunction;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("radial norm closed forms") {
    hgo::HeisenbergSpace space(1);
    auto indicator = TestFunction::radial([](double) { return 1.0; }, Support::annulus(0, 1));
    auto norm = hgo::mixed_norm(indicator, {2.0, 2.0}, space);
    CHECK_THAT(norm.value, WithinRel(2.2214414690791831, 1e-10));

    auto zero = TestFunction::radial([](double) { return 0.0; }, Support::annulus(0, 1));
    CHECK(hgo::mixed_norm(zero, {2.0, 2.0}, space).value == 0.0);

    // |x|^{-Q/p + 1/2} truncated to the unit ball: radial integral 1/(p/2).
    for (double p : {1.5, 2.0, 3.0}) {
        for (double p_bar : {1.0, 2.0, 4.0}) {
            const double s = space.Q() / p - 0.5;
            auto f = TestFunction::radial([s](double r) { return std::pow(r, -s); },
                                          Support::annulus(0, 1), hgo::DecayHints{s, {}});
            const double expected = std::pow(space.omega_q(), 1.0 / p_bar) *
                                    std::pow(1.0 / (0.5 * p), 1.0 / p);
            CHECK_THAT(hgo::mixed_norm(f, {p, p_bar}, space).value, WithinRel(expected, 1e-9));
        }
    }
}

TEST_CASE("extremizer family norms") {
    hgo::HeisenbergSpace space(1);
    const double p = 2.0;

    // Outer variant at eps = 1: radial integral 1/(p eps) = 1/2.
    auto outer = hgo::extremizer_family(space, p, 1.0, hgo::ExtremizerSide::outer);
    auto n_outer = hgo::mixed_norm(outer, {p, 2.0}, space);
    CHECK_THAT(n_outer.value, WithinRel(std::sqrt(space.omega_q() * 0.5), 1e-9));

    // Inner and outer norms agree for matching eps (r -> 1/r symmetry).
    for (double eps : {0.25, 0.5, 1.5}) {
        auto inner = hgo::extremizer_family(space, p, eps, hgo::ExtremizerSide::inner);
        auto outer_eps = hgo::extremizer_family(space, p, eps, hgo::ExtremizerSide::outer);
        const double ni = hgo::mixed_norm(inner, {p, 2.0}, space).value;
        const double no = hgo::mixed_norm(outer_eps, {p, 2.0}, space).value;
        CHECK_THAT(ni, WithinRel(no, 1e-9));
    }

    // Norm decreases monotonically along an increasing eps grid.
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        auto f = hgo::extremizer_family(space, p, eps, hgo::ExtremizerSide::inner);
        const double value = hgo::mixed_norm(f, {p, 2.0}, space).value;
        CHECK(value < previous);
        previous = value;
    }

    CHECK_THROWS_AS(hgo::extremizer_family(space, p, 0.0, hgo::ExtremizerSide::inner),
                    std::invalid_argument);
    CHECK_THROWS_AS(hgo::extremizer_family(space, p, -0.1, hgo::ExtremizerSide::outer),
                    std::invalid_argument);
}

TEST_CASE("non-normalizable powers are rejected") {
    hgo::HeisenbergSpace space(1);
    const double p = 2.0;
    const double s = space.Q() / p;

    // Formal extremizer with the exact power structure: analytic rejection.
    auto formal = TestFunction::radial_power(s, [](double) { return 1.0; }, Support::all());
    CHECK_THROWS_AS(hgo::mixed_norm(formal, {p, 2.0}, space), hgo::DivergenceError);

    // Same function with no declared structure: the truncation sweep flags it.
    auto opaque = TestFunction::general(
        [s](const hgo::GroupPoint& x) { return std::pow(hgo::koranyi_norm(x), -s); });
    auto radial_opaque = TestFunction::radial([s](double r) { return std::pow(r, -s); },
                                              Support{0.01, std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(hgo::mixed_norm(radial_opaque, {p, 2.0}, space), hgo::DivergenceError);
}

TEST_CASE("structured and plain radial paths agree") {
    hgo::HeisenbergSpace space(1);
    for (double s : {0.5, 1.2, 1.7}) {
        auto plain = TestFunction::radial(
            [s](double r) { return std::pow(r, -s) * (1.0 + 0.5 * r); },
            Support::annulus(0, 2), hgo::DecayHints{s, {}});
        auto structured = TestFunction::radial_power(
            s, [](double r) { return 1.0 + 0.5 * r; }, Support::annulus(0, 2));
        const double a = hgo::mixed_norm(plain, {2.0, 3.0}, space).value;
        const double b = hgo::mixed_norm(structured, {2.0, 3.0}, space).value;
        CHECK_THAT(a, WithinRel(b, 1e-9));
    }
}

TEST_CASE("form consistency through the general view") {
    hgo::HeisenbergSpace space(1);
    auto radial = TestFunction::radial([](double r) { return 1.0 / (1.0 + r * r); });
    auto product = TestFunction::product([](double r) { return 1.0 / (1.0 + r * r); },
                                         [](const hgo::GroupPoint& theta) { return 1.0 + theta[0]; });
    hgo::SampleRng rng(3, 0);
    for (int i = 0; i < 200; ++i) {
        hgo::GroupPoint x(std::vector<double>{rng.uniform(-2, 2), rng.uniform(-2, 2),
                                              rng.uniform(-4, 4)});
        const double r = hgo::koranyi_norm(x);
        if (r == 0.0) continue;
        CHECK_THAT(radial.evaluate(x), WithinRel(1.0 / (1.0 + r * r), 1e-12));
        const auto theta = hgo::polar_decompose(x).theta;
        const double expected = (1.0 + theta[0]) / (1.0 + r * r);
        CHECK(std::abs(product.evaluate(x) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
    }

    // Truncation zeroes evaluation outside the window.
    auto cut = TestFunction::radial([](double) { return 1.0; }, Support::annulus(0.5, 1.0));
    CHECK(cut.evaluate(hgo::GroupPoint(std::vector<double>{2.0, 0.0, 0.0})) == 0.0);
    CHECK(cut.evaluate(hgo::GroupPoint(std::vector<double>{0.1, 0.0, 0.0})) == 0.0);
    CHECK(cut.evaluate(hgo::GroupPoint(std::vector<double>{0.7, 0.0, 0.0})) == 1.0);
}

TEST_CASE("general-form norms against the radial reduction") {
    hgo::HeisenbergSpace space(1);
    hgo::NormEvalSpec eval;
    eval.mc.sample_count = 40000;
    auto profile = [](double r) { return std::exp(-r) * (1.0 + r); };
    auto radial = TestFunction::radial(profile, Support::annulus(0.1, 3.0));
    const double reference = hgo::mixed_norm(radial, {2.0, 2.0}, space).value;

    // Same function treated as a black box; p_bar == p goes through plain MC.
    auto general = TestFunction::general(
        [profile](const hgo::GroupPoint& x) { return profile(hgo::koranyi_norm(x)); },
        Support::annulus(0.1, 3.0));
    auto mc = hgo::mixed_norm(general, {2.0, 2.0}, space, eval);
    CHECK(std::abs(mc.value - reference) <= 3.0 * std::max(mc.error, 1e-6 * reference));

    // p_bar != p goes through the stratified shells.
    const double ref_pb = hgo::mixed_norm(radial, {2.0, 4.0}, space).value;
    auto shells = hgo::mixed_norm(general, {2.0, 4.0}, space, eval);
    CHECK(std::abs(shells.value - ref_pb) / ref_pb <= 2e-3);

    CHECK_THROWS_AS(hgo::mixed_norm(TestFunction::general(
                                        [](const hgo::GroupPoint&) { return 1.0; }),
                                    {2.0, 4.0}, space, eval),
                    std::invalid_argument);
}

TEST_CASE("radialization") {
    hgo::HeisenbergSpace space(1);
    hgo::MCSpec mc{30000, 77, 8};

    auto radial = TestFunction::radial([](double r) { return std::exp(-r); });
    auto same = hgo::radialize(radial, space, mc);
    CHECK(same.form() == TestFunction::Form::Radial);
    CHECK_THAT(same.radial_value(0.7), WithinRel(std::exp(-0.7), 1e-14));

    // Product form averages to radial_part * sphere mean of the angular part.
    auto angular = [](const hgo::GroupPoint& theta) { return 1.0 + 0.5 * theta[0] + theta[2]; };
    auto product = TestFunction::product([](double r) { return 1.0 / (1.0 + r); }, angular,
                                         Support::annulus(0.0, 5.0));
    auto averaged = hgo::radialize(product, space, mc);

    // Independent estimate of the sphere mean from a different seed.
    hgo::SphereSampleSet sphere(space, 60000, 123);
    auto mean = sphere.mean(angular);
    for (double r : {0.3, 1.0, 2.5}) {
        const double got = averaged.radial_value(r);
        const double expected = mean.mean / (1.0 + r);
        CHECK(std::abs(got - expected) <=
              3.0 * (mean.std_error + 0.01 * std::abs(mean.mean)) / (1.0 + r));
    }

    // Zero-sphere-mean angular factor averages to nearly zero.
    auto odd = TestFunction::product([](double) { return 1.0; },
                                     [](const hgo::GroupPoint& theta) { return theta[0]; },
                                     Support::annulus(0.0, 2.0));
    auto flat = hgo::radialize(odd, space, mc);
    CHECK(std::abs(flat.radial_value(1.0)) <= 3.0 / std::sqrt(double(mc.sample_count)));
}

TEST_CASE("pbar enters radial norms only through the omega prefactor") {
    hgo::HeisenbergSpace space(1);
    auto f = TestFunction::radial([](double r) { return std::exp(-r * r); },
                                  Support::annulus(0.0, 6.0));
    const double n2 = hgo::mixed_norm(f, {2.0, 2.0}, space).value;
    const double n4 = hgo::mixed_norm(f, {2.0, 4.0}, space).value;
    CHECK_THAT(n2 / n4, WithinRel(std::pow(space.omega_q(), 0.5 - 0.25), 1e-12));
}

TEST_CASE("parameter validation") {
    hgo::HeisenbergSpace space(1);
    auto f = TestFunction::radial([](double) { return 1.0; }, Support::annulus(0, 1));
    CHECK_THROWS_AS(hgo::mixed_norm(f, {1.0, 2.0}, space), std::invalid_argument);
    CHECK_THROWS_AS(hgo::mixed_norm(f, {2.0, 0.5}, space), std::invalid_argument);
    CHECK_THROWS_AS(Support::annulus(2.0, 1.0).validate(), std::invalid_argument);
}
