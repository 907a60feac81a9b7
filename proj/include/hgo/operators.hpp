#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgo/kernels.hpp"
#include "hgo/mixed_norm.hpp"

namespace hgo {

namespace detail {

struct RadialIntegralSetup {
    Interval interval;
    bool sweep = false;  // no tail information: probe nested cutoffs instead
};

// u-interval for int k(u) f(ru) u^{Q-1} du given f's window and hints.
inline RadialIntegralSetup operator_interval(const KernelSpec& kernel, const TestFunction& f,
                                             double x_radius) {
    const Support& sup = f.support();
    const int q = kernel.space().Q();
    RadialIntegralSetup setup;
    setup.interval.lower = sup.r_min / x_radius;

    if (sup.r_min == 0.0 && f.hints().origin_exponent) {
        const double a = *f.hints().origin_exponent;
        if (a >= static_cast<double>(q))
            throw DivergenceError("apply_radial: integral diverges at the origin (profile "
                                  "exponent " +
                                  std::to_string(a) + " >= Q)");
        setup.interval.left_singularity = std::max(0.0, a - (q - 1.0));
    }

    if (sup.bounded()) {
        setup.interval.upper = sup.r_max / x_radius;
        // At the far end of a wide u-range the factor f(x u) sits at the
        // outer edge of its window where it is bounded, so the integrand
        // decays at the kernel tail rate.
        setup.interval.tail_decay = std::max(kernel.profile_tail_exponent() - (q - 1.0), 0.0);
        return setup;
    }
    if (f.hints().tail_exponent) {
        const double c = kernel.profile_tail_exponent() + *f.hints().tail_exponent - (q - 1.0);
        if (c <= 1.0)
            throw DivergenceError(
                "apply_radial: integral diverges at infinity (kernel tail " +
                std::to_string(kernel.profile_tail_exponent()) + ", profile tail " +
                std::to_string(*f.hints().tail_exponent) + ")");
        setup.interval.tail_decay = c;
        return setup;
    }
    setup.sweep = true;
    return setup;
}

}  // namespace detail

/// Hf at gauge radius |x|_h = x_radius for a radial f and a unary
/// radial-profile kernel: by homogeneity and polar coordinates,
///   Tf(r) = omega_Q int_0^inf k(u) f(ru) u^{Q-1} du,
/// and the result is a radial function of r. Unbounded supports without
/// a declared tail run a nested-cutoff sweep that flags divergence.
inline IntegralResult apply_radial(const KernelSpec& kernel, const TestFunction& f,
                                   double x_radius, const QuadratureSpec& quad = {},
                                   double divergence_growth_factor = 1.05) {
    if (kernel.arity() != 1)
        throw std::invalid_argument("apply_radial: unary kernels only; see apply_mlinear");
    if (f.form() != TestFunction::Form::Radial)
        throw std::invalid_argument("apply_radial: f must be in radial form");
    if (!(x_radius > 0.0)) throw std::invalid_argument("apply_radial: x_radius must be positive");

    const double q = kernel.space().Q();
    const double omega = kernel.space().omega_q();
    auto integrand = [&](double u) {
        return kernel.radial_profile(u) * f.radial_value(x_radius * u) * std::pow(u, q - 1.0);
    };

    auto setup = detail::operator_interval(kernel, f, x_radius);
    if (!setup.sweep) {
        auto res = integrate_1d(integrand, setup.interval, quad);
        return {omega * res.value, omega * res.error_estimate, res.evaluations};
    }

    double previous = 0.0, value = 0.0, err = 0.0;
    long evals = 0;
    for (double cutoff : {10.0, 100.0, 1000.0}) {
        Interval iv = setup.interval;
        iv.upper = cutoff / x_radius;
        if (iv.upper <= iv.lower) continue;
        auto res = integrate_1d(integrand, iv, quad);
        previous = value;
        value = res.value;
        err = res.error_estimate;
        evals += res.evaluations;
    }
    if (previous > 0.0 && value > previous * divergence_growth_factor)
        throw DivergenceError("apply_radial: nested-cutoff sweep grows by factor " +
                              std::to_string(value / previous) + "; integral diverges");
    return {omega * value, omega * (err + std::abs(value - previous)), evals};
}

/// Scaled operator value Psi(r) = Hf(r) * r^s for a radial f with exact
/// power factorization f = rho^{-s} g(rho):
///   Psi(r) = omega_Q int k(u) u^{Q-1-s} g(ru) 1_{ru in window} du.
/// Every factor is bounded, so Psi is computable at radii where Hf
/// itself leaves the double range -- the working form for near-extremal
/// inputs. Defined for r = 0 as the limit value.
inline IntegralResult apply_radial_scaled(const KernelSpec& kernel, const TestFunction& f,
                                          double x_radius, const QuadratureSpec& quad = {}) {
    if (kernel.arity() != 1)
        throw std::invalid_argument("apply_radial_scaled: unary kernels only");
    if (f.form() != TestFunction::Form::Radial || !f.has_origin_power() ||
        f.support().r_min != 0.0)
        throw std::invalid_argument(
            "apply_radial_scaled: needs a radial function with an exact power origin");
    if (!f.support().bounded())
        throw std::invalid_argument("apply_radial_scaled: needs a bounded window");
    if (!(x_radius >= 0.0))
        throw std::invalid_argument("apply_radial_scaled: x_radius must be >= 0");

    const double q = kernel.space().Q();
    const double s = f.origin_power();
    const double omega = kernel.space().omega_q();
    const double tail = kernel.profile_tail_exponent() - (q - 1.0 - s);
    if (tail <= 1.0)
        throw DivergenceError("apply_radial_scaled: integral diverges at infinity");

    const auto& g = f.origin_residual();
    const double r_max = f.support().r_max;
    auto integrand = [&](double u) {
        const double v = x_radius * u;
        if (v > r_max) return 0.0;
        return kernel.radial_profile(u) * std::pow(u, q - 1.0 - s) * g(v);
    };

    Interval iv = x_radius == 0.0 ? Interval::semi_infinite(0.0)
                                  : Interval::finite(0.0, r_max / x_radius);
    iv.tail_decay = tail;
    iv.left_singularity = std::max(0.0, s - (q - 1.0));
    auto res = integrate_1d(integrand, iv, quad);
    return {omega * res.value, omega * res.error_estimate, res.evaluations};
}

/// Full-dimensional Monte Carlo evaluation of Hf(x) over the truncated
/// support of f. Works for any function form; pairs with apply_radial as
/// a cross-check of the polar reduction.
inline IntegralResult apply_general(const KernelSpec& kernel, const TestFunction& f,
                                    const GroupPoint& x, const MCSpec& mc, int jobs = 1) {
    if (kernel.arity() != 1)
        throw std::invalid_argument("apply_general: unary kernels only");
    if (!f.support().bounded())
        throw std::invalid_argument("apply_general: f needs a bounded truncation window");
    const HeisenbergSpace& space = kernel.space();
    auto sampler = annulus_sampler(space, f.support().r_min, f.support().r_max);
    return mc_integrate(
        [&](const GroupPoint& y) { return kernel.evaluate(x, y) * f.evaluate(y); }, sampler, mc,
        jobs);
}

/// m-linear Hilbert operator
///   T_m(f_1..f_m)(x) = int prod f_i(y_i) / (|x|^Q + sum |y_i|^Q)^m dy,
/// reduced to an m-dimensional radial integral with weight
/// omega_Q^m prod rho_i^{Q-1}. Nested quadrature is capped at m = 3.
inline IntegralResult apply_mlinear(std::span<const TestFunction> fs, double x_radius,
                                    const HeisenbergSpace& space,
                                    const QuadratureSpec& quad = {}) {
    const int m = static_cast<int>(fs.size());
    if (m < 1 || m > 3)
        throw std::invalid_argument(
            "apply_mlinear: nested quadrature supports 1 <= m <= 3; use a Monte Carlo path "
            "beyond that");
    if (!(x_radius > 0.0)) throw std::invalid_argument("apply_mlinear: x_radius must be positive");
    const double q = space.Q();

    std::vector<Interval> dims;
    dims.reserve(fs.size());
    for (const TestFunction& f : fs) {
        if (f.form() != TestFunction::Form::Radial)
            throw std::invalid_argument("apply_mlinear: every factor must be radial");
        const Support& sup = f.support();
        Interval iv = Interval::finite(sup.r_min, sup.r_max);
        if (sup.r_min == 0.0 && f.hints().origin_exponent) {
            const double a = *f.hints().origin_exponent;
            if (a >= q)
                throw DivergenceError("apply_mlinear: factor diverges at the origin");
            iv.left_singularity = std::max(0.0, a - (q - 1.0));
        }
        if (!sup.bounded()) {
            if (!f.hints().tail_exponent)
                throw std::invalid_argument(
                    "apply_mlinear: unbounded factors need a declared tail exponent");
            const double c = *f.hints().tail_exponent + q * m - (q - 1.0);
            if (c <= 1.0) throw DivergenceError("apply_mlinear: factor diverges at infinity");
            iv.upper = std::numeric_limits<double>::infinity();
            iv.tail_decay = c;
        }
        dims.push_back(iv);
    }

    const double xq = std::pow(x_radius, q);
    auto integrand = [&](std::span<const double> rho) {
        double denom = xq;
        double numer = 1.0;
        for (int i = 0; i < m; ++i) {
            denom += std::pow(rho[i], q);
            numer *= fs[i].radial_value(rho[i]) * std::pow(rho[i], q - 1.0);
        }
        return numer * std::pow(denom, -static_cast<double>(m));
    };

    auto res = integrate_nested(integrand, dims, quad);
    const double scale = std::pow(space.omega_q(), m);
    return {scale * res.value, scale * res.error_estimate, res.evaluations};
}

struct RatioResult {
    double ratio = 0.0;
    double error = 0.0;
    NormResult numerator;
    NormResult denominator;
};

namespace detail {

// Decay hints for the radial function r -> Tf(r), derived from the
// kernel tail (rho^{-Q}) and f's own window and hints. Bounded-support f
// gives Tf ~ r^{-Q} at infinity; a support reaching the origin with a
// singular profile keeps the same origin exponent.
inline DecayHints transformed_hints(const TestFunction& f, const HeisenbergSpace& space) {
    DecayHints hints;
    const double q = space.Q();
    if (f.support().r_min == 0.0 && f.hints().origin_exponent &&
        *f.hints().origin_exponent > 0.0)
        hints.origin_exponent = *f.hints().origin_exponent;
    if (f.support().bounded())
        hints.tail_exponent = q;
    else if (f.hints().tail_exponent)
        hints.tail_exponent = std::min(q, *f.hints().tail_exponent);
    return hints;
}

}  // namespace detail

/// Ratio  ||Tf||_{p, p_bar_out} / ||f||_{p, p_bar_in}  for a unary kernel.
/// Radial f goes through the full quadrature pipeline; product and
/// general forms evaluate Tf by Monte Carlo on a fixed radial grid.
inline RatioResult operator_ratio(const KernelSpec& kernel, const TestFunction& f,
                                  const MixedNormParams& params_in,
                                  const MixedNormParams& params_out,
                                  const HeisenbergSpace& space, const NormEvalSpec& eval = {}) {
    RatioResult out;
    out.denominator = mixed_norm(f, params_in, space, eval);
    if (out.denominator.value == 0.0)
        throw std::domain_error("operator_ratio: input function has zero norm");

    if (f.form() == TestFunction::Form::Radial) {
        QuadratureSpec inner = eval.quad;
        inner.abs_tol *= 1e-2;
        inner.rel_tol = std::max(inner.rel_tol * 2e-2, 1e-13);
        auto worst_rel = std::make_shared<double>(0.0);
        auto source = std::make_shared<TestFunction>(f);
        auto kernel_copy = std::make_shared<KernelSpec>(kernel);
        TestFunction tf = [&] {
            if (f.has_origin_power() && f.support().r_min == 0.0 && f.support().bounded()) {
                // Near-extremal powers: carry the factorization through the
                // operator so the outer norm can run in scaled form.
                auto scaled = [kernel_copy, source, inner, worst_rel](double r) {
                    auto res = apply_radial_scaled(*kernel_copy, *source, r, inner);
                    if (res.value != 0.0)
                        *worst_rel =
                            std::max(*worst_rel, res.error_estimate / std::abs(res.value));
                    return res.value;
                };
                return TestFunction::radial_power(f.origin_power(), scaled, Support::all(),
                                                  detail::transformed_hints(f, space));
            }
            auto profile = [kernel_copy, source, inner, worst_rel](double r) {
                auto res = apply_radial(*kernel_copy, *source, r, inner);
                if (res.value != 0.0)
                    *worst_rel = std::max(*worst_rel, res.error_estimate / std::abs(res.value));
                return res.value;
            };
            return TestFunction::radial(profile, Support::all(),
                                        detail::transformed_hints(f, space));
        }();
        out.numerator = mixed_norm(tf, params_out, space, eval);
        out.numerator.error += out.numerator.value * *worst_rel;
    } else {
        if (!f.support().bounded())
            throw std::invalid_argument(
                "operator_ratio: non-radial inputs need a bounded truncation window");
        // Fixed geometric grid in the output radius; Tf at each shell is a
        // direction-averaged Monte Carlo estimate. Truncating the output
        // window only lowers the numerator, so bound checks stay valid.
        const double w_lo =
            (f.support().r_min > 0.0 ? f.support().r_min : f.support().r_max * 1e-3) / 8.0;
        const double w_hi = f.support().r_max * 8.0;
        const int shells = std::max(eval.shell_count / 4, 16);
        const int directions = 4;
        SphereSampleSet dirs(space, directions, mix64(eval.mc.seed ^ 0x5eedu));

        const double p = params_out.p;
        const double growth = std::pow(w_hi / w_lo, 1.0 / shells);
        const int q = space.Q();
        detail::KahanSum power_sum;
        double power_err = 0.0;
        double lo = w_lo;
        for (int k = 0; k < shells; ++k) {
            const double hi = k + 1 == shells ? w_hi : w_lo * std::pow(growth, k + 1);
            const double mid = std::sqrt(lo * hi);
            double value = 0.0, se_sq = 0.0;
            for (int d = 0; d < directions; ++d) {
                MCSpec mc = eval.mc;
                mc.seed = mix64(eval.mc.seed + 7919u * k + d);
                auto est = apply_general(kernel, f, dilate(mid, dirs.points()[d]), mc);
                value += est.value;
                se_sq += est.error_estimate * est.error_estimate;
            }
            value /= directions;
            const double se = std::sqrt(se_sq) / directions;
            const double weight = (std::pow(hi, q) - std::pow(lo, q)) / q;
            power_sum.add(std::pow(std::abs(value), p) * weight);
            power_err += p * std::pow(std::abs(value), p - 1.0) * se * weight;
            lo = hi;
        }
        const double omega = space.omega_q();
        const double s = power_sum.sum;
        const double value = std::pow(omega, 1.0 / params_out.p_bar) * std::pow(s, 1.0 / p);
        const double err = s > 0.0 ? value * power_err / (p * s) : 0.0;
        out.numerator = {value, err};
    }

    out.ratio = out.numerator.value / out.denominator.value;
    out.error = out.ratio * (out.numerator.error / std::max(out.numerator.value, 1e-300) +
                             out.denominator.error / out.denominator.value);
    return out;
}

/// Ratio  ||T_m(f_1..f_m)|| / prod ||f_i||  for the m-linear Hilbert
/// operator with radial factors.
inline RatioResult operator_ratio_mlinear(std::span<const TestFunction> fs,
                                          const MixedNormParams& params_in,
                                          const MixedNormParams& params_out,
                                          const HeisenbergSpace& space,
                                          const NormEvalSpec& eval = {}) {
    RatioResult out;
    double denom = 1.0, denom_rel = 0.0;
    for (const TestFunction& f : fs) {
        auto norm = mixed_norm(f, params_in, space, eval);
        if (norm.value == 0.0)
            throw std::domain_error("operator_ratio_mlinear: a factor has zero norm");
        denom *= norm.value;
        denom_rel += norm.error / norm.value;
    }
    out.denominator = {denom, denom * denom_rel};

    QuadratureSpec inner = eval.quad;
    inner.abs_tol *= 1e-2;
    inner.rel_tol = std::max(inner.rel_tol * 2e-2, 1e-12);
    auto worst_rel = std::make_shared<double>(0.0);
    auto factors = std::make_shared<std::vector<TestFunction>>(fs.begin(), fs.end());
    auto space_copy = std::make_shared<HeisenbergSpace>(space);
    const int m = static_cast<int>(fs.size());
    auto profile = [factors, space_copy, inner, worst_rel](double r) {
        auto res = apply_mlinear(*factors, r, *space_copy, inner);
        if (res.value != 0.0)
            *worst_rel = std::max(*worst_rel, res.error_estimate / std::abs(res.value));
        return res.value;
    };
    DecayHints hints;
    hints.tail_exponent = static_cast<double>(space.Q()) * m;
    TestFunction tf = TestFunction::radial(profile, Support::all(), hints);
    out.numerator = mixed_norm(tf, params_out, space, eval);
    out.numerator.error += out.numerator.value * *worst_rel;

    out.ratio = out.numerator.value / out.denominator.value;
    out.error = out.ratio * (out.numerator.error / std::max(out.numerator.value, 1e-300) +
                             out.denominator.error / out.denominator.value);
    return out;
}

}  // namespace hgo
