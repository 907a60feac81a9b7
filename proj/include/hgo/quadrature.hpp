#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgo/errors.hpp"

namespace hgo {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;

    void validate() const {
        if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: need a positive tolerance");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Integration range with optional analytic hints. A declared endpoint
/// singularity `beta` means the integrand behaves like (r - lower)^{-beta}
/// (resp. (upper - r)^{-beta}) with 0 <= beta < 1 and is removed by the
/// power substitution r = lower + w^{1/(1-beta)}. `tail_decay` declares
/// |f(r)| ~ r^{-c} at the far end (0 = undeclared); after the r -> 1/u
/// fold the leftover u^{c-2} endpoint is removed the same way when c < 2.
/// Finite ranges spanning orders of magnitude get the same fold when the
/// integrand is declared to decay.
struct Interval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double left_singularity = 0.0;
    double right_singularity = 0.0;
    double tail_decay = 0.0;

    static Interval finite(double a, double b) { return {a, b, 0.0, 0.0, 0.0}; }
    static Interval semi_infinite(double a = 0.0) {
        return {a, std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
    }

    Interval with_left_singularity(double beta) const {
        Interval iv = *this;
        iv.left_singularity = beta;
        return iv;
    }
    Interval with_right_singularity(double beta) const {
        Interval iv = *this;
        iv.right_singularity = beta;
        return iv;
    }
    Interval with_tail_decay(double c) const {
        Interval iv = *this;
        iv.tail_decay = c;
        return iv;
    }

    bool infinite() const { return std::isinf(upper); }

    void validate() const {
        if (!(lower >= 0.0) && infinite())
            throw std::invalid_argument("Interval: semi-infinite range needs lower >= 0");
        if (!(lower <= upper)) throw std::invalid_argument("Interval: lower > upper");
        if (left_singularity < 0.0 || left_singularity >= 1.0)
            throw std::invalid_argument("Interval: left singularity exponent outside [0,1)");
        if (right_singularity < 0.0 || right_singularity >= 1.0)
            throw std::invalid_argument("Interval: right singularity exponent outside [0,1)");
        if (infinite() && right_singularity != 0.0)
            throw std::invalid_argument("Interval: right singularity with infinite upper bound");
        if (infinite() && tail_decay != 0.0 && tail_decay <= 1.0)
            throw DivergenceError("integrate_1d: declared tail decay r^-" +
                                  std::to_string(tail_decay) +
                                  " is not integrable at infinity");
    }
};

namespace detail {

/// r^e * factor without overflowing intermediates: falls back to the
/// exp-log form when the direct product leaves the double range even
/// though the result itself is representable.
inline double stable_pow_mul(double r, double e, double factor) {
    if (factor == 0.0 || r == 0.0) return 0.0;
    const double direct = std::pow(r, e) * factor;
    if (std::isfinite(direct) && direct != 0.0) return direct;
    const double log_mag = e * std::log(r) + std::log(std::abs(factor));
    const double mag = std::exp(log_mag);
    return factor < 0.0 ? -mag : mag;
}

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae and weights).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double integral;
    double error;
};

template <typename F>
GkEstimate gk15(const F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(center);
    double resg = kGauss7Weights[3] * fc;
    double resk = kGk15Weights[7] * fc;
    double resabs = kGk15Weights[7] * std::abs(fc);

    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGk15Nodes[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kGk15Weights[j] * sum;
        resabs += kGk15Weights[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kGauss7Weights[j / 2] * sum;
    }

    const double reskh = 0.5 * resk;
    double resasc = kGk15Weights[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGk15Weights[j] *
                  (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double habs = std::abs(half);
    resabs *= habs;
    resasc *= habs;
    double abserr = std::abs((resk - resg) * half);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        abserr = std::max(eps * 50.0 * resabs, abserr);
    return {resk * half, abserr};
}

// One finite sub-problem after all substitutions.
struct Segment {
    std::function<double(double)> integrand;
    double lo = 0.0;
    double hi = 1.0;
};

// r = a + (b-a) w^{1/(1-beta)} removes an (r-a)^{-beta} endpoint.
template <typename F>
std::function<double(double)> power_sub_left(F f, double a, double width, double beta) {
    const double q = 1.0 / (1.0 - beta);
    return [f = std::move(f), a, width, beta, q](double w) {
        const double wp = std::pow(w, q);
        return f(a + width * wp) * width * q * std::pow(w, q - 1.0);
    };
}

// r = b - (b-a) w^{1/(1-beta)} removes a (b-r)^{-beta} endpoint.
template <typename F>
std::function<double(double)> power_sub_right(F f, double b, double width, double beta) {
    const double q = 1.0 / (1.0 - beta);
    return [f = std::move(f), b, width, beta, q](double w) {
        const double wp = std::pow(w, q);
        return f(b - width * wp) * width * q * std::pow(w, q - 1.0);
    };
}

template <typename F>
std::function<double(double)> affine(F f, double a, double b) {
    return [f = std::move(f), a, w = b - a](double u) { return f(a + w * u) * w; };
}

// Fold [a, b) onto (a/b, 1] via r = a/u; the Jacobian is a/u^2. With
// b = inf the folded domain reaches u = 0.
template <typename F>
std::function<double(double)> fold_tail(F f, double a) {
    return [f = std::move(f), a](double u) {
        const double r = a / u;
        return f(r) * a / (u * u);
    };
}

// A finite range is "wide" when its endpoints differ by orders of
// magnitude; plain bisection then cannot find the O(split)-scale mass, so
// such ranges get the same fold as infinite ones.
inline bool wide_range(double lo, double hi) { return hi > 64.0 * std::max(lo, 1.0); }

template <typename F>
void build_segments(const F& f, const Interval& iv, std::vector<Segment>& out) {
    const double a = iv.lower;
    const bool fold_finite = wide_range(a, iv.upper) && iv.right_singularity == 0.0 &&
                             iv.tail_decay >= 1.0;
    if (iv.infinite() || fold_finite) {
        const double split = std::max(a, 1.0);
        if (a < split) {
            Interval head = Interval::finite(a, split);
            head.left_singularity = iv.left_singularity;
            build_segments(f, head, out);
        }
        // Integrand decay r^-c becomes a u^{c-2} endpoint after folding.
        auto folded = fold_tail(f, split);
        const double u_lo = iv.infinite() ? 0.0 : split / iv.upper;
        const double leftover = 2.0 - iv.tail_decay;
        if (leftover > 0.0 && leftover < 1.0) {
            // The power substitution maps [0,1] onto itself, so the folded
            // domain [u_lo, 1] pulls back to [u_lo^{1-leftover}, 1].
            out.push_back({power_sub_left(std::move(folded), 0.0, 1.0, leftover),
                           std::pow(u_lo, 1.0 - leftover), 1.0});
        } else {
            out.push_back({std::move(folded), u_lo, 1.0});
        }
        return;
    }

    const double b = iv.upper;
    if (iv.left_singularity > 0.0 && iv.right_singularity > 0.0) {
        const double mid = 0.5 * (a + b);
        Interval lhs = Interval::finite(a, mid).with_left_singularity(iv.left_singularity);
        Interval rhs = Interval::finite(mid, b).with_right_singularity(iv.right_singularity);
        build_segments(f, lhs, out);
        build_segments(f, rhs, out);
        return;
    }
    if (iv.left_singularity > 0.0)
        out.push_back({power_sub_left(f, a, b - a, iv.left_singularity), 0.0, 1.0});
    else if (iv.right_singularity > 0.0)
        out.push_back({power_sub_right(f, b, b - a, iv.right_singularity), 0.0, 1.0});
    else
        out.push_back({affine(f, a, b), 0.0, 1.0});
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the given interval.
/// Declared singularities and tails are transformed away first; the
/// remaining finite pieces share one worst-first refinement queue.
/// Throws AccuracyError when the subdivision budget runs out.
template <typename F>
IntegralResult integrate_1d(const F& f, const Interval& interval,
                            const QuadratureSpec& spec = {}) {
    spec.validate();
    interval.validate();
    if (interval.lower == interval.upper) return {0.0, 0.0, 0};

    std::vector<detail::Segment> segments;
    detail::build_segments(f, interval, segments);

    struct Piece {
        double error;
        double value;
        double lo, hi;
        std::size_t seg;
        bool operator<(const Piece& other) const { return error < other.error; }
    };

    std::priority_queue<Piece> queue;
    long evals = 0;
    double total = 0.0;  // running sums over every live and frozen piece
    double err = 0.0;
    double frozen_value = 0.0;  // pieces too narrow to refine further
    double frozen_error = 0.0;

    auto push_piece = [&](std::size_t seg, double lo, double hi) {
        auto est = detail::gk15(segments[seg].integrand, lo, hi);
        evals += 15;
        total += est.integral;
        err += est.error;
        queue.push({est.error, est.integral, lo, hi, seg});
    };

    // A few initial cuts per segment guard against features all 15 nodes miss.
    constexpr int kInitialCuts = 8;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const double lo = segments[s].lo, hi = segments[s].hi;
        for (int i = 0; i < kInitialCuts; ++i)
            push_piece(s, lo + (hi - lo) * i / double(kInitialCuts),
                       lo + (hi - lo) * (i + 1) / double(kInitialCuts));
    }

    // Incremental sums drift; rebuild them from the live pieces now and then.
    std::vector<Piece> scratch;
    auto resum = [&] {
        scratch.clear();
        double v = frozen_value, e = frozen_error;
        std::priority_queue<Piece> copy = queue;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        total = v;
        err = e;
    };

    int subdivisions = 0;
    const double eps = std::numeric_limits<double>::epsilon();
    while (true) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (err <= tol || queue.empty()) {
            resum();
            return {total, err, evals};
        }
        if (subdivisions >= spec.max_subdivisions) {
            resum();
            if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
                return {total, err, evals};
            throw AccuracyError("integrate_1d: no convergence after " +
                                    std::to_string(subdivisions) + " subdivisions (error " +
                                    std::to_string(err) + ", tol " + std::to_string(tol) + ")",
                                total, err);
        }

        Piece worst = queue.top();
        queue.pop();
        total -= worst.value;
        err -= worst.error;
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (worst.hi - worst.lo <= 50.0 * eps) {
            frozen_value += worst.value;  // roundoff floor reached
            frozen_error += worst.error;
            total += worst.value;
            err += worst.error;
            continue;
        }
        push_piece(worst.seg, worst.lo, mid);
        push_piece(worst.seg, mid, worst.hi);
        ++subdivisions;
        if (subdivisions % 512 == 0) resum();
    }
}

/// Iterated 1-D quadrature over up to three dimensions. Inner integrals
/// run at tightened tolerances; their worst relative error is folded into
/// the reported estimate additively.
inline IntegralResult integrate_nested(
    const std::function<double(std::span<const double>)>& f,
    std::span<const Interval> dims, const QuadratureSpec& spec = {}) {
    if (dims.empty()) throw std::invalid_argument("integrate_nested: no dimensions");
    if (dims.size() > 3)
        throw std::invalid_argument("integrate_nested: supports at most 3 dimensions");
    if (dims.size() == 1)
        return integrate_1d([&](double t) { return f(std::span<const double>(&t, 1)); },
                            dims[0], spec);

    QuadratureSpec inner_spec = spec;
    // Deep in a slowly decaying outer tail the inner values shrink below
    // any fixed absolute floor while their region still carries weight,
    // so inner integrals must converge in relative terms alone.
    inner_spec.abs_tol = std::numeric_limits<double>::min();
    inner_spec.rel_tol = std::max(spec.rel_tol * 2e-2, 1e-13);

    long inner_evals = 0;
    double worst_inner_rel = 0.0;
    std::vector<double> point(dims.size());

    std::function<double(std::size_t)> level = [&](std::size_t d) -> double {
        if (d == dims.size() - 1) {
            auto res = integrate_1d(
                [&](double t) {
                    point[d] = t;
                    return f(point);
                },
                dims[d], inner_spec);
            inner_evals += res.evaluations;
            if (res.value != 0.0)
                worst_inner_rel =
                    std::max(worst_inner_rel, res.error_estimate / std::abs(res.value));
            return res.value;
        }
        auto res = integrate_1d(
            [&](double t) {
                point[d] = t;
                return level(d + 1);
            },
            dims[d], inner_spec);
        inner_evals += res.evaluations;
        if (res.value != 0.0)
            worst_inner_rel =
                std::max(worst_inner_rel, res.error_estimate / std::abs(res.value));
        return res.value;
    };

    auto outer = integrate_1d([&](double t) {
        point[0] = t;
        return level(1);
    },
                              dims[0], spec);
    outer.evaluations += inner_evals;
    outer.error_estimate += worst_inner_rel * std::abs(outer.value);
    return outer;
}

}  // namespace hgo
