#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgo/quadrature.hpp"
#include "hgo/test_function.hpp"

namespace hgo {

/// Exponents of the mixed radial-angular norm: outer L^p in the radius
/// (weight r^{Q-1}), inner L^p_bar over the unit sphere. Endpoint
/// exponents p = 1, infinity and p_bar = infinity are out of scope.
struct MixedNormParams {
    double p;
    double p_bar;

    void validate() const {
        if (!(p > 1.0) || std::isinf(p))
            throw std::invalid_argument("MixedNormParams: need 1 < p < inf");
        if (!(p_bar >= 1.0) || std::isinf(p_bar))
            throw std::invalid_argument("MixedNormParams: need 1 <= p_bar < inf");
    }
};

/// Knobs for norm evaluation: quadrature for radial integrals, MC budget
/// for sphere averages, shell count for the stratified general route, and
/// the growth factor beyond which a truncation sweep declares divergence.
struct NormEvalSpec {
    QuadratureSpec quad{1e-13, 1e-10, 4000};
    MCSpec mc{20000, 421, 8};
    int shell_count = 256;
    double divergence_growth_factor = 1.05;
};

struct NormResult {
    double value = 0.0;
    double error = 0.0;
};

/// Fixed set of points on the unit Koranyi sphere with exactly the
/// normalized sphere law: uniform ball samples pushed out along their
/// gauge ray. Shared immutably so every consumer of one seed sees the
/// same directions.
class SphereSampleSet {
public:
    SphereSampleSet(const HeisenbergSpace& space, long count, std::uint64_t seed) {
        if (count < 1) throw std::invalid_argument("SphereSampleSet: count must be >= 1");
        auto pts = std::make_shared<std::vector<GroupPoint>>();
        pts->reserve(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i) {
            SampleRng rng(seed, static_cast<std::uint64_t>(i));
            pts->push_back(polar_decompose(detail::draw_ball_point(space, rng)).theta);
        }
        points_ = std::move(pts);
    }

    struct Estimate {
        double mean;
        double std_error;
    };

    /// Sample mean of h over the normalized sphere measure sigma/omega_Q.
    template <typename H>
    Estimate mean(const H& h) const {
        detail::KahanSum sum, sum_sq;
        for (const GroupPoint& theta : *points_) {
            const double v = h(theta);
            sum.add(v);
            sum_sq.add(v * v);
        }
        const double n = static_cast<double>(points_->size());
        const double m = sum.sum / n;
        double var = n > 1 ? std::max(0.0, (sum_sq.sum - n * m * m) / (n - 1.0)) : 0.0;
        return {m, std::sqrt(var / n)};
    }

    const std::vector<GroupPoint>& points() const { return *points_; }

private:
    std::shared_ptr<const std::vector<GroupPoint>> points_;
};

namespace detail {

// Radial integral of |r^{-s} g(r)|^p r^{Q-1} for a function with an exact
// power factorization whose window reaches the origin. With sigma =
// Q - 1 - p s the mass near zero goes like r^{sigma+1}, which for
// near-extremal powers spreads over hundreds of decades; the constant
// part of the residual is therefore integrated analytically and only the
// bounded correction g(r)^p - g(0)^p is quadratured.
inline NormResult scaled_radial_power_integral(const TestFunction& f, double p,
                                               const HeisenbergSpace& space,
                                               const NormEvalSpec& eval) {
    const Support& sup = f.support();
    const double sigma = space.Q() - 1.0 - p * f.origin_power();
    if (sigma <= -1.0)
        throw DivergenceError("mixed_norm: radial integral diverges at the origin "
                              "(power exponent " +
                              std::to_string(f.origin_power()) + " >= Q/p)");

    const auto& g = f.origin_residual();
    const double g0 = g(0.0);
    const double head_cut = std::min(1.0, sup.r_max);
    const double head =
        std::pow(std::abs(g0), p) * std::pow(head_cut, sigma + 1.0) / (sigma + 1.0);

    auto correction = [&](double r) {
        const double delta =
            std::pow(std::abs(g(r)), p) - std::pow(std::abs(g0), p);
        return stable_pow_mul(r, sigma, delta);
    };
    Interval mid_iv = Interval::finite(0.0, head_cut);
    mid_iv.left_singularity = std::clamp(-sigma, 0.0, 1.0 - 1e-9);
    auto mid = integrate_1d(correction, mid_iv, eval.quad);

    double tail_value = 0.0, tail_error = 0.0;
    if (sup.r_max > head_cut) {
        auto tail_integrand = [&](double r) {
            return stable_pow_mul(r, sigma, std::pow(std::abs(g(r)), p));
        };
        Interval iv = Interval::finite(head_cut, sup.r_max);
        if (!sup.bounded()) {
            if (!f.hints().tail_exponent)
                throw DivergenceError(
                    "mixed_norm: unbounded power-form function needs a tail exponent");
            const double c = p * (*f.hints().tail_exponent) - (space.Q() - 1.0);
            if (c <= 1.0)
                throw DivergenceError("mixed_norm: radial integral diverges at infinity");
            iv = Interval::semi_infinite(head_cut).with_tail_decay(c);
        }
        auto tail = integrate_1d(tail_integrand, iv, eval.quad);
        tail_value = tail.value;
        tail_error = tail.error_estimate;
    }
    return {head + mid.value + tail_value, mid.error_estimate + tail_error};
}

// Radial part integral I = int |profile(r)|^p r^{Q-1} dr over the support,
// with substitution hints derived from the declared decay exponents.
// Unbounded supports without a tail hint go through a truncation sweep.
inline NormResult radial_power_integral(const TestFunction& f, double p,
                                        const HeisenbergSpace& space,
                                        const NormEvalSpec& eval) {
    const Support& sup = f.support();
    if (f.has_origin_power() && sup.r_min == 0.0)
        return scaled_radial_power_integral(f, p, space, eval);
    const double qm1 = space.Q() - 1.0;
    auto integrand = [&f, p, qm1](double r) {
        return std::pow(std::abs(f.radial_part()(r)), p) * std::pow(r, qm1);
    };

    auto left_beta = [&]() -> double {
        if (sup.r_min > 0.0 || !f.hints().origin_exponent) return 0.0;
        const double beta = p * (*f.hints().origin_exponent) - qm1;
        if (beta >= 1.0)
            throw DivergenceError("mixed_norm: radial integral diverges at the origin "
                                  "(declared exponent " +
                                  std::to_string(*f.hints().origin_exponent) + ")");
        return std::max(beta, 0.0);
    };

    if (sup.bounded()) {
        Interval iv = Interval::finite(sup.r_min, sup.r_max);
        iv.left_singularity = left_beta();
        auto res = integrate_1d(integrand, iv, eval.quad);
        return {res.value, res.error_estimate};
    }

    if (f.hints().tail_exponent) {
        const double c = p * (*f.hints().tail_exponent) - qm1;
        if (c <= 1.0)
            throw DivergenceError("mixed_norm: radial integral diverges at infinity "
                                  "(declared exponent " +
                                  std::to_string(*f.hints().tail_exponent) + ")");
        Interval iv = Interval::semi_infinite(sup.r_min).with_tail_decay(c);
        iv.left_singularity = left_beta();
        auto res = integrate_1d(integrand, iv, eval.quad);
        return {res.value, res.error_estimate};
    }

    // Truncation sweep on nested windows [1/k, k], k = 10, 100, 1000. The
    // inner cutoff only applies when the origin is open and undeclared.
    const bool open_origin = sup.r_min == 0.0 && !f.hints().origin_exponent;
    double previous = 0.0, value = 0.0, err = 0.0;
    for (double k : {10.0, 100.0, 1000.0}) {
        const double lo = open_origin ? 1.0 / k : sup.r_min;
        if (k <= lo) continue;
        Interval iv = Interval::finite(lo, k);
        if (!open_origin) iv.left_singularity = left_beta();
        auto res = integrate_1d(integrand, iv, eval.quad);
        previous = value;
        value = res.value;
        err = res.error_estimate;
    }
    if (previous > 0.0 && value > previous * eval.divergence_growth_factor)
        throw DivergenceError("mixed_norm: truncation sweep grows by factor " +
                              std::to_string(value / previous) +
                              " between nested windows; norm diverges");
    return {value, err + std::abs(value - previous)};
}

}  // namespace detail

/// Mixed radial-angular norm
///   ( int_0^inf ( int_Sigma |f(r,theta)|^{p_bar} dsigma )^{p/p_bar} r^{Q-1} dr )^{1/p}.
///
/// Radial forms reduce exactly to omega_Q^{1/p_bar} times the radial L^p
/// integral; product forms factor into a sphere average (Monte Carlo over
/// a shared direction set) times the same radial integral; general forms
/// with p_bar == p use plain Monte Carlo over the truncated support and
/// otherwise a stratified-shell estimate (geometric radial grid, exact
/// r^{Q-1} shell weights, per-shell sphere averages).
inline NormResult mixed_norm(const TestFunction& f, const MixedNormParams& params,
                             const HeisenbergSpace& space, const NormEvalSpec& eval = {}) {
    params.validate();
    const double omega = space.omega_q();

    switch (f.form()) {
        case TestFunction::Form::Radial: {
            auto radial = detail::radial_power_integral(f, params.p, space, eval);
            if (radial.value == 0.0) return {0.0, 0.0};
            const double value =
                std::pow(omega, 1.0 / params.p_bar) * std::pow(radial.value, 1.0 / params.p);
            return {value, value * radial.error / (params.p * radial.value)};
        }
        case TestFunction::Form::Product: {
            SphereSampleSet sphere(space, eval.mc.sample_count, eval.mc.seed);
            const auto& angular = f.angular_part();
            auto ang = sphere.mean([&](const GroupPoint& theta) {
                return std::pow(std::abs(angular(theta)), params.p_bar);
            });
            auto radial = detail::radial_power_integral(f, params.p, space, eval);
            if (ang.mean == 0.0 || radial.value == 0.0) return {0.0, 0.0};
            const double value = std::pow(omega * ang.mean, 1.0 / params.p_bar) *
                                 std::pow(radial.value, 1.0 / params.p);
            const double rel = ang.std_error / (params.p_bar * ang.mean) +
                               radial.error / (params.p * radial.value);
            return {value, value * rel};
        }
        case TestFunction::Form::General:
            break;
    }

    const Support& sup = f.support();
    if (!sup.bounded())
        throw std::invalid_argument(
            "mixed_norm: a general-form function needs a bounded truncation window");

    if (std::abs(params.p - params.p_bar) < 1e-12) {
        // Inner and outer exponents coincide: the norm is a plain L^p
        // integral over the truncated region.
        auto sampler = annulus_sampler(space, sup.r_min, sup.r_max);
        auto res = mc_integrate(
            [&](const GroupPoint& x) { return std::pow(std::abs(f.evaluate(x)), params.p); },
            sampler, eval.mc);
        if (res.value <= 0.0) return {0.0, std::pow(res.error_estimate, 1.0 / params.p)};
        const double value = std::pow(res.value, 1.0 / params.p);
        return {value, value * res.error_estimate / (params.p * res.value)};
    }

    // Stratified shells: geometric radial grid, sphere MC per shell.
    SphereSampleSet sphere(space, eval.mc.sample_count, eval.mc.seed);
    const double r_lo = sup.r_min > 0.0 ? sup.r_min : sup.r_max * 1e-7;
    const int q = space.Q();
    const double pr = params.p / params.p_bar;

    auto shell_sum = [&](int shells) {
        const double growth = std::pow(sup.r_max / r_lo, 1.0 / shells);
        detail::KahanSum sum;
        double err = 0.0;
        double lo = r_lo;
        for (int k = 0; k < shells; ++k) {
            const double hi = k + 1 == shells ? sup.r_max : r_lo * std::pow(growth, k + 1);
            const double mid = std::sqrt(lo * hi);
            auto inner = sphere.mean([&](const GroupPoint& theta) {
                return std::pow(std::abs(f.evaluate(dilate(mid, theta))), params.p_bar);
            });
            const double weight = (std::pow(hi, q) - std::pow(lo, q)) / q;
            if (inner.mean > 0.0) {
                const double term = std::pow(omega * inner.mean, pr) * weight;
                sum.add(term);
                err += pr * term * inner.std_error / inner.mean;
            }
            lo = hi;
        }
        return std::pair<double, double>(sum.sum, err);
    };

    auto [coarse, coarse_err] = shell_sum(std::max(eval.shell_count / 2, 8));
    auto [fine, fine_err] = shell_sum(std::max(eval.shell_count, 16));
    const double power = fine;
    const double power_err = fine_err + std::abs(fine - coarse);
    if (power == 0.0) return {0.0, 0.0};
    const double value = std::pow(power, 1.0 / params.p);
    return {value, value * power_err / (params.p * power)};
}

/// Spherical average g(r) = (1/omega_Q) int_Sigma f(delta_r theta) dsigma,
/// realized over a fixed direction set. Radial input passes through
/// unchanged; the result keeps the input's truncation window and hints.
inline TestFunction radialize(const TestFunction& f, const HeisenbergSpace& space,
                              const MCSpec& mc) {
    if (f.form() == TestFunction::Form::Radial) return f;
    auto sphere = std::make_shared<SphereSampleSet>(space, mc.sample_count, mc.seed);
    auto source = std::make_shared<TestFunction>(f);
    auto profile = [sphere, source](double r) {
        return sphere->mean([&](const GroupPoint& theta) {
                       return source->evaluate(dilate(r, theta));
                   })
            .mean;
    };
    return TestFunction::radial(profile, f.support(), f.hints());
}

enum class ExtremizerSide { inner, outer };

/// Regularized power-function extremizers: |x|^{-Q/p + eps} on the unit
/// ball (inner) or |x|^{-Q/p - eps} outside it (outer). Both have finite
/// mixed norm for every eps > 0; the formal eps = 0 power is not
/// normalizable and is rejected.
inline TestFunction extremizer_family(const HeisenbergSpace& space, double p, double epsilon,
                                      ExtremizerSide side) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("extremizer_family: need 1 < p < inf");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("extremizer_family: epsilon must be positive");
    const double q_over_p = static_cast<double>(space.Q()) / p;
    if (side == ExtremizerSide::inner) {
        const double s = q_over_p - epsilon;
        return TestFunction::radial_power(s, [](double) { return 1.0; },
                                          Support::annulus(0.0, 1.0), DecayHints{s, {}});
    }
    const double s = q_over_p + epsilon;
    return TestFunction::radial([s](double r) { return std::pow(r, -s); },
                                Support{1.0, std::numeric_limits<double>::infinity()},
                                DecayHints{{}, s});
}

}  // namespace hgo
