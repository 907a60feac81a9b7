#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgo/monte_carlo.hpp"
#include "hgo/rng.hpp"
#include "hgo/special_functions.hpp"

namespace hgo {

/// A point of the Heisenberg group H^n: 2n real horizontal coordinates
/// followed by one vertical coordinate. Immutable value type.
class GroupPoint {
public:
    explicit GroupPoint(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.size() < 3 || coords_.size() % 2 == 0)
            throw std::invalid_argument("GroupPoint: coordinate count must be 2n+1 with n >= 1");
    }

    static GroupPoint zero(int n) { return GroupPoint(std::vector<double>(2 * n + 1, 0.0)); }

    int n() const { return static_cast<int>(coords_.size() - 1) / 2; }
    int dim() const { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
    double vertical() const { return coords_.back(); }
    std::span<const double> coords() const { return coords_; }

private:
    std::vector<double> coords_;
};

namespace detail {

inline void require_same_space(const GroupPoint& x, const GroupPoint& y, const char* op) {
    if (x.dim() != y.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) +
                                    ")");
}

}  // namespace detail

/// Group law: horizontal parts add, the vertical part picks up the
/// symplectic twist 2 sum_j (y_j x_{n+j} - x_j y_{n+j}).
inline GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y) {
    detail::require_same_space(x, y, "group_mul");
    const int n = x.n();
    std::vector<double> out(static_cast<std::size_t>(2 * n + 1));
    for (int i = 0; i < 2 * n; ++i) out[i] = x[i] + y[i];
    double twist = 0.0;
    for (int j = 0; j < n; ++j) twist += y[j] * x[n + j] - x[j] * y[n + j];
    out[2 * n] = x[2 * n] + y[2 * n] + 2.0 * twist;
    return GroupPoint(std::move(out));
}

inline GroupPoint inverse(const GroupPoint& x) {
    std::vector<double> out(x.coords().begin(), x.coords().end());
    for (double& c : out) c = -c;
    return GroupPoint(std::move(out));
}

/// Anisotropic dilation: horizontal coordinates scale by r, vertical by r^2.
inline GroupPoint dilate(double r, const GroupPoint& x) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
    const int n = x.n();
    std::vector<double> out(static_cast<std::size_t>(2 * n + 1));
    for (int i = 0; i < 2 * n; ++i) out[i] = r * x[i];
    out[2 * n] = r * r * x[2 * n];
    return GroupPoint(std::move(out));
}

/// Koranyi gauge |x|_h = ((|z|^2)^2 + t^2)^{1/4}.
inline double koranyi_norm(const GroupPoint& x) {
    const int n = x.n();
    double z2 = 0.0;
    for (int i = 0; i < 2 * n; ++i) z2 += x[i] * x[i];
    const double t = x[2 * n];
    return std::pow(z2 * z2 + t * t, 0.25);
}

/// Left-invariant gauge distance d(p, q) = |q^{-1} p|_h.
inline double distance(const GroupPoint& p, const GroupPoint& q) {
    detail::require_same_space(p, q, "distance");
    return koranyi_norm(group_mul(inverse(q), p));
}

/// Orthogonal matrix acting on the horizontal layer.
class RotationMatrix {
public:
    RotationMatrix(int dim, std::vector<double> row_major)
        : dim_(dim), a_(std::move(row_major)) {
        if (dim_ < 2 || dim_ % 2 != 0)
            throw std::invalid_argument("RotationMatrix: dimension must be even and >= 2");
        if (a_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw std::invalid_argument("RotationMatrix: entry count does not match dimension");
    }

    static RotationMatrix identity(int dim) {
        std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i) * dim + i] = 1.0;
        return RotationMatrix(dim, std::move(a));
    }

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    /// Max-norm departure of R^T R from the identity.
    double orthogonality_defect() const {
        double worst = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                double dot = 0.0;
                for (int k = 0; k < dim_; ++k) dot += (*this)(k, i) * (*this)(k, j);
                worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        return worst;
    }

private:
    int dim_;
    std::vector<double> a_;
};

/// Haar-ish random rotation as a product of random Givens rotations over
/// every coordinate pair. Deterministic in the rng state.
inline RotationMatrix random_rotation(int dim, SampleRng& rng) {
    std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i) * dim + i] = 1.0;
    auto at = [&a, dim](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * dim + j];
    };
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double c = std::cos(angle), s = std::sin(angle);
            for (int k = 0; k < dim; ++k) {
                const double vi = at(i, k), vj = at(j, k);
                at(i, k) = c * vi - s * vj;
                at(j, k) = s * vi + c * vj;
            }
        }
    return RotationMatrix(dim, std::move(a));
}

/// Rotate the horizontal part of x by R, keeping the vertical part. Any
/// R in O(2n) preserves the Koranyi norm since it depends on |z| only.
inline GroupPoint rotate_horizontal(const RotationMatrix& R, const GroupPoint& x,
                                    double orthogonality_tol = 1e-10) {
    const int n = x.n();
    if (R.dim() != 2 * n)
        throw std::invalid_argument("rotate_horizontal: matrix dimension must be 2n");
    if (R.orthogonality_defect() > orthogonality_tol)
        throw std::invalid_argument("rotate_horizontal: matrix is not orthogonal within " +
                                    std::to_string(orthogonality_tol));
    std::vector<double> out(static_cast<std::size_t>(2 * n + 1));
    for (int i = 0; i < 2 * n; ++i) {
        double s = 0.0;
        for (int j = 0; j < 2 * n; ++j) s += R(i, j) * x[j];
        out[i] = s;
    }
    out[2 * n] = x[2 * n];
    return GroupPoint(std::move(out));
}

/// Gauge-polar form x = delta_r(theta) with |theta|_h = 1.
struct PolarPoint {
    double r;
    GroupPoint theta;
};

inline PolarPoint polar_decompose(const GroupPoint& x) {
    const double r = koranyi_norm(x);
    if (r == 0.0) throw std::domain_error("polar_decompose: zero point has no direction");
    return {r, dilate(1.0 / r, x)};
}

inline GroupPoint polar_compose(const PolarPoint& p) { return dilate(p.r, p.theta); }

/// Lebesgue volume of the unit Koranyi ball together with the printed
/// closed-form value it is usually quoted as. The two disagree by a factor
/// that reports must surface, so both are carried everywhere.
struct BallVolume {
    double lebesgue;
    double quoted_formula;
};

inline BallVolume unit_ball_volume(int n) {
    if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
    const double pi = std::numbers::pi;
    // Slicing in t and horizontal polar coordinates reduce the volume to
    // area(S^{2n-1}) * int_0^1 rho^{2n-1} 2 sqrt(1-rho^4) drho, and the
    // substitution u = rho^4 turns the integral into Beta(n/2, 3/2)/4.
    const double lebesgue = std::pow(pi, n) / gamma_fn(static_cast<double>(n)) *
                            beta_fn(0.5 * n, 1.5);
    const double quoted = 2.0 * std::pow(pi, n + 0.5) * gamma_fn(0.5 * n) /
                          ((n + 1.0) * gamma_fn(static_cast<double>(n)) *
                           gamma_fn(0.5 * (n + 1.0)));
    return {lebesgue, quoted};
}

/// Ambient parameters of H^n: homogeneous dimension Q = 2n+2, unit-ball
/// volume, and the polar sphere mass omega_Q = Q * |B(0,1)|.
class HeisenbergSpace {
public:
    explicit HeisenbergSpace(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("HeisenbergSpace: n must be >= 1");
        const BallVolume v = unit_ball_volume(n);
        ball_volume_ = v.lebesgue;
        quoted_ball_volume_ = v.quoted_formula;
    }

    int n() const { return n_; }
    int Q() const { return 2 * n_ + 2; }
    int dim() const { return 2 * n_ + 1; }
    double ball_volume() const { return ball_volume_; }
    double omega_q() const { return Q() * ball_volume_; }
    /// Value of the commonly printed unit-ball formula, kept for reports.
    double quoted_ball_volume() const { return quoted_ball_volume_; }
    double quoted_omega_q() const { return Q() * quoted_ball_volume_; }

    GroupPoint zero() const { return GroupPoint::zero(n_); }

    /// Unit reference point e: first horizontal coordinate direction.
    GroupPoint reference_point() const {
        std::vector<double> c(static_cast<std::size_t>(dim()), 0.0);
        c[0] = 1.0;
        return GroupPoint(std::move(c));
    }

private:
    int n_;
    double ball_volume_;
    double quoted_ball_volume_;
};

namespace detail {

inline GroupPoint draw_ball_point(const HeisenbergSpace& space, SampleRng& rng) {
    const int d = space.dim();
    std::vector<double> c(static_cast<std::size_t>(d));
    while (true) {
        for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1.0, 1.0);
        GroupPoint x{std::vector<double>(c)};
        if (koranyi_norm(x) <= 1.0) return x;
    }
}

}  // namespace detail

/// Deterministic uniform samples from the unit Koranyi ball, by rejection
/// from the box |z_i| <= 1, |t| <= 1. Sample i depends only on (seed, i).
inline std::vector<GroupPoint> sample_ball(const HeisenbergSpace& space, long count,
                                           std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("sample_ball: count must be >= 0");
    std::vector<GroupPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        SampleRng rng(seed, static_cast<std::uint64_t>(i));
        out.push_back(detail::draw_ball_point(space, rng));
    }
    return out;
}

/// Uniform sampler over the Koranyi ball of the given radius.
inline DomainSampler<GroupPoint> ball_sampler(const HeisenbergSpace& space, double radius = 1.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball_sampler: radius must be positive");
    return {std::pow(radius, space.Q()) * space.ball_volume(),
            [space, radius](SampleRng& rng) {
                GroupPoint x = detail::draw_ball_point(space, rng);
                return radius == 1.0 ? x : dilate(radius, x);
            }};
}

/// Uniform sampler over the dilated coordinate box delta_s([-1,1]^{2n+1}).
inline DomainSampler<GroupPoint> box_sampler(const HeisenbergSpace& space, double s = 1.0) {
    if (!(s > 0.0)) throw std::invalid_argument("box_sampler: scale must be positive");
    const int n = space.n();
    const double volume = std::pow(2.0 * s, 2 * n) * 2.0 * s * s;
    return {volume, [n, s](SampleRng& rng) {
                std::vector<double> c(static_cast<std::size_t>(2 * n + 1));
                for (int i = 0; i < 2 * n; ++i) c[i] = rng.uniform(-s, s);
                c[2 * n] = rng.uniform(-s * s, s * s);
                return GroupPoint(std::move(c));
            }};
}

/// Uniform sampler over the Koranyi annulus r_min <= |x|_h <= r_max,
/// drawn in polar form: the direction comes from a projected ball draw
/// (which has exactly the normalized sphere law) and the radius from the
/// r^{Q-1} density.
inline DomainSampler<GroupPoint> annulus_sampler(const HeisenbergSpace& space, double r_min,
                                                 double r_max) {
    if (!(r_min >= 0.0) || !(r_max > r_min) || std::isinf(r_max))
        throw std::invalid_argument("annulus_sampler: need 0 <= r_min < r_max < inf");
    const int q = space.Q();
    const double lo_q = std::pow(r_min, q);
    const double hi_q = std::pow(r_max, q);
    return {space.ball_volume() * (hi_q - lo_q), [space, q, lo_q, hi_q](SampleRng& rng) {
                GroupPoint direction = polar_decompose(detail::draw_ball_point(space, rng)).theta;
                const double u = rng.uniform01();
                const double r = std::pow(lo_q + u * (hi_q - lo_q), 1.0 / q);
                return dilate(r, direction);
            }};
}

}  // namespace hgo
