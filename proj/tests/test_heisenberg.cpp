#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hgo/heisenberg.hpp"
#include "hgo/quadrature.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using hgo::GroupPoint;

namespace {

GroupPoint pt(std::initializer_list<double> coords) {
    return GroupPoint(std::vector<double>(coords));
}

double max_coord_diff(const GroupPoint& a, const GroupPoint& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("group law") {
    CHECK(max_coord_diff(hgo::group_mul(pt({1, 0, 0}), pt({0, 1, 0})), pt({1, 1, -2})) == 0.0);
    const GroupPoint x = pt({0.3, -1.2, 0.7});
    CHECK(max_coord_diff(hgo::group_mul(x, GroupPoint::zero(1)), x) == 0.0);
    CHECK(max_coord_diff(hgo::group_mul(pt({1, 2, 3}), pt({-1, -2, -3})), pt({0, 0, 0})) == 0.0);
    CHECK_THROWS_AS(hgo::group_mul(pt({1, 0, 0}), pt({1, 0, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("inverse") {
    CHECK(max_coord_diff(hgo::inverse(pt({1, 2, 3})), pt({-1, -2, -3})) == 0.0);
    CHECK(max_coord_diff(hgo::inverse(GroupPoint::zero(2)), GroupPoint::zero(2)) == 0.0);
    const GroupPoint x = pt({0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(max_coord_diff(hgo::inverse(hgo::inverse(x)), x) == 0.0);
}

TEST_CASE("dilations") {
    CHECK(max_coord_diff(hgo::dilate(2.0, pt({1, 1, 1})), pt({2, 2, 4})) == 0.0);
    const GroupPoint x = pt({0.5, -0.25, 2.0});
    CHECK(max_coord_diff(hgo::dilate(1.0, x), x) == 0.0);
    CHECK(max_coord_diff(hgo::dilate(2.0, hgo::dilate(3.0, x)), hgo::dilate(6.0, x)) <= 1e-15);
    CHECK_THROWS_AS(hgo::dilate(0.0, x), std::invalid_argument);
    CHECK_THROWS_AS(hgo::dilate(-1.0, x), std::invalid_argument);
}

TEST_CASE("gauge norm and distance") {
    CHECK_THAT(hgo::koranyi_norm(pt({1, 0, 0})), WithinRel(1.0, 1e-15));
    CHECK_THAT(hgo::koranyi_norm(pt({0, 0, 1})), WithinRel(1.0, 1e-15));
    CHECK_THAT(hgo::koranyi_norm(pt({1, 1, 2})), WithinRel(std::pow(8.0, 0.25), 1e-14));

    const GroupPoint x = pt({0.3, 0.8, -0.4});
    CHECK(hgo::distance(x, x) == 0.0);
    CHECK_THAT(hgo::distance(x, GroupPoint::zero(1)), WithinRel(hgo::koranyi_norm(x), 1e-15));
    // Hand expansion: q^{-1} p = (1, -1, -2), so d = 8^{1/4}.
    CHECK_THAT(hgo::distance(pt({1, 0, 0}), pt({0, 1, 0})),
               WithinRel(std::pow(8.0, 0.25), 1e-14));
    CHECK_THROWS_AS(hgo::distance(pt({1, 0, 0}), GroupPoint::zero(2)), std::invalid_argument);
}

TEST_CASE("horizontal rotations") {
    const GroupPoint x = pt({1, 0, 5});
    auto id = hgo::RotationMatrix::identity(2);
    CHECK(max_coord_diff(hgo::rotate_horizontal(id, x), x) == 0.0);

    hgo::RotationMatrix quarter(2, {0.0, -1.0, 1.0, 0.0});
    CHECK(max_coord_diff(hgo::rotate_horizontal(quarter, x), pt({0, 1, 5})) <= 1e-15);

    hgo::SampleRng rng(7, 0);
    for (int i = 0; i < 50; ++i) {
        auto rot = hgo::random_rotation(2, rng);
        const GroupPoint y = pt({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)});
        CHECK_THAT(hgo::koranyi_norm(hgo::rotate_horizontal(rot, y)),
                   WithinRel(hgo::koranyi_norm(y), 1e-12));
    }

    hgo::RotationMatrix skew(2, {1.0, 0.5, 0.0, 1.0});
    CHECK_THROWS_AS(hgo::rotate_horizontal(skew, x), std::invalid_argument);
    CHECK_THROWS_AS(hgo::rotate_horizontal(id, pt({1, 0, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("polar decomposition") {
    auto p = hgo::polar_decompose(pt({2, 0, 0}));
    CHECK_THAT(p.r, WithinRel(2.0, 1e-15));
    CHECK(max_coord_diff(p.theta, pt({1, 0, 0})) <= 1e-15);

    auto q = hgo::polar_decompose(pt({0, 0, 4}));
    CHECK_THAT(q.r, WithinRel(2.0, 1e-15));
    CHECK(max_coord_diff(q.theta, pt({0, 0, 1})) <= 1e-15);

    hgo::SampleRng rng(9, 0);
    for (int i = 0; i < 200; ++i) {
        const GroupPoint x = pt({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)});
        if (hgo::koranyi_norm(x) == 0.0) continue;
        auto polar = hgo::polar_decompose(x);
        CHECK(std::abs(hgo::koranyi_norm(polar.theta) - 1.0) <= 1e-12);
        CHECK(max_coord_diff(hgo::polar_compose(polar), x) <=
              1e-12 * (1.0 + hgo::koranyi_norm(x)));
    }
    CHECK_THROWS_AS(hgo::polar_decompose(GroupPoint::zero(1)), std::domain_error);
}

TEST_CASE("unit ball volume closed forms") {
    const double pi = std::numbers::pi;
    auto v1 = hgo::unit_ball_volume(1);
    CHECK_THAT(v1.lebesgue, WithinRel(pi * pi / 2.0, 1e-13));
    CHECK_THAT(v1.quoted_formula, WithinRel(pi * pi, 1e-13));

    auto v2 = hgo::unit_ball_volume(2);
    CHECK_THAT(v2.lebesgue, WithinRel(2.0 * pi * pi / 3.0, 1e-13));
    CHECK_THAT(v2.quoted_formula / v2.lebesgue, WithinRel(2.0, 1e-12));

    // Independent oracle: area(S^{2n-1}) int_0^1 rho^{2n-1} 2 sqrt(1-rho^4) drho
    // through the smooth rho^2 = sin(phi) form, with std::tgamma for the area.
    for (int n : {1, 2, 3}) {
        const double area = 2.0 * std::pow(pi, n) / std::tgamma(static_cast<double>(n));
        auto reduced = hgo::integrate_1d(
            [n](double phi) {
                return 0.5 * std::pow(std::sin(phi), n - 1) * std::cos(phi) * std::cos(phi);
            },
            hgo::Interval::finite(0.0, pi / 2.0));
        const double oracle = area * 2.0 * reduced.value;
        CHECK_THAT(hgo::unit_ball_volume(n).lebesgue, WithinRel(oracle, 1e-11));
    }

    hgo::HeisenbergSpace space(1);
    CHECK(space.Q() == 4);
    CHECK_THAT(space.omega_q(), WithinRel(2.0 * pi * pi, 1e-13));
    CHECK_THROWS_AS(hgo::HeisenbergSpace(0), std::invalid_argument);
}

TEST_CASE("ball sampling") {
    hgo::HeisenbergSpace space(1);
    CHECK(hgo::sample_ball(space, 0, 1).empty());

    auto a = hgo::sample_ball(space, 500, 42);
    auto b = hgo::sample_ball(space, 500, 42);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(max_coord_diff(a[i], b[i]) == 0.0);
        CHECK(hgo::koranyi_norm(a[i]) <= 1.0);
    }
    // The first k samples do not depend on the requested count.
    auto prefix = hgo::sample_ball(space, 100, 42);
    for (std::size_t i = 0; i < prefix.size(); ++i) CHECK(max_coord_diff(a[i], prefix[i]) == 0.0);

    // Acceptance fraction of the box rejection ~ ball_volume / 8.
    const long trials = 200000;
    long accepted = 0;
    for (long i = 0; i < trials; ++i) {
        hgo::SampleRng rng(7, static_cast<std::uint64_t>(i));
        std::vector<double> c(3);
        for (double& v : c) v = rng.uniform(-1.0, 1.0);
        if (hgo::koranyi_norm(GroupPoint(std::move(c))) <= 1.0) ++accepted;
    }
    const double p_hat = static_cast<double>(accepted) / trials;
    const double p_true = space.ball_volume() / 8.0;
    const double se = std::sqrt(p_true * (1.0 - p_true) / trials);
    CHECK(std::abs(p_hat - p_true) <= 3.0 * se);
}
