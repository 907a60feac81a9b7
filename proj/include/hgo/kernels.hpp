#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "hgo/heisenberg.hpp"

namespace hgo {

enum class KernelKind { Hilbert1, HLP, MLinearHilbert, CustomRadialProfile };

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Hilbert1: return "hilbert1";
        case KernelKind::HLP: return "hlp";
        case KernelKind::MLinearHilbert: return "mlinear-hilbert";
        case KernelKind::CustomRadialProfile: return "custom-radial";
    }
    return "?";
}

/// Nonnegative kernel on H^n x H^n, homogeneous of degree -Q and a
/// function of the gauge norms only, described by its radial profile
/// k(rho) = K(e, y) for |y|_h = rho. Pointwise values follow from
/// K(x, y) = |x|^{-Q} k(|y|/|x|). The m-linear Hilbert kind instead
/// carries the joint kernel (|x|^Q + sum |y_i|^Q)^{-m}.
class KernelSpec {
public:
    static KernelSpec hilbert1(const HeisenbergSpace& space) {
        const double q = space.Q();
        return KernelSpec(KernelKind::Hilbert1, space, 1,
                          [q](double rho) { return 1.0 / (1.0 + std::pow(rho, q)); },
                          /*tail=*/q);
    }

    static KernelSpec hlp(const HeisenbergSpace& space) {
        const double q = space.Q();
        return KernelSpec(KernelKind::HLP, space, 1,
                          [q](double rho) { return 1.0 / std::max(1.0, std::pow(rho, q)); },
                          /*tail=*/q);
    }

    static KernelSpec mlinear_hilbert(const HeisenbergSpace& space, int m) {
        if (m < 1) throw std::invalid_argument("mlinear_hilbert: m must be >= 1");
        const double q = space.Q();
        KernelSpec k(KernelKind::MLinearHilbert, space, m,
                     [q](double rho) { return 1.0 / (1.0 + std::pow(rho, q)); },
                     /*tail=*/q);
        return k;
    }

    /// User profile with a declared tail exponent (k ~ rho^{-tail}) so
    /// convergence checks can run without probing the function.
    static KernelSpec custom_radial(const HeisenbergSpace& space,
                                    std::function<double(double)> profile,
                                    double tail_exponent) {
        return KernelSpec(KernelKind::CustomRadialProfile, space, 1, std::move(profile),
                          tail_exponent);
    }

    KernelKind kind() const { return kind_; }
    int arity() const { return m_; }
    double homogeneity_degree() const { return -static_cast<double>(q_) * m_; }
    double profile_tail_exponent() const { return tail_; }
    const HeisenbergSpace& space() const { return space_; }
    GroupPoint reference_point() const { return space_.reference_point(); }

    double radial_profile(double rho) const { return profile_(rho); }

    /// K(x, y) for the unary kinds. x must not be the origin. Built-ins
    /// use their exact closed forms; the generic profile route would lose
    /// to overflow at extreme |y|/|x| ratios.
    double evaluate(const GroupPoint& x, const GroupPoint& y) const {
        if (m_ != 1)
            throw std::logic_error("KernelSpec: pointwise evaluate is unary; use evaluate_norms");
        const double rx = koranyi_norm(x);
        if (rx == 0.0) throw std::domain_error("KernelSpec: kernel is singular at x = 0");
        const double ry = koranyi_norm(y);
        switch (kind_) {
            case KernelKind::Hilbert1:
            case KernelKind::MLinearHilbert:
                return 1.0 / (std::pow(rx, q_) + std::pow(ry, q_));
            case KernelKind::HLP:
                return 1.0 / std::max(std::pow(rx, q_), std::pow(ry, q_));
            case KernelKind::CustomRadialProfile:
                break;
        }
        return std::pow(rx, -static_cast<double>(q_)) * profile_(ry / rx);
    }

    /// Joint kernel value from gauge norms: (x^Q + sum y_i^Q)^{-m}.
    double evaluate_norms(double x_norm, std::span<const double> y_norms) const {
        if (kind_ != KernelKind::MLinearHilbert && kind_ != KernelKind::Hilbert1)
            throw std::logic_error("KernelSpec: evaluate_norms needs a Hilbert-family kernel");
        double denom = std::pow(x_norm, q_);
        for (double yn : y_norms) denom += std::pow(yn, q_);
        return std::pow(denom, -static_cast<double>(m_));
    }

    struct SpotCheckReport {
        double worst_homogeneity = 0.0;   // relative defect of the -Q scaling law
        double worst_rotation = 0.0;      // relative defect of K(Rx,Ry) = K(x,y)
        bool nonnegative = true;
        bool passed(double tol = 1e-10) const {
            return nonnegative && worst_homogeneity <= tol && worst_rotation <= tol;
        }
    };

    /// Numerical spot-check of the declared kernel invariants on sampled
    /// point pairs, random dilations and random horizontal rotations.
    SpotCheckReport spot_check(long pairs, std::uint64_t seed) const {
        SpotCheckReport report;
        for (long i = 0; i < pairs; ++i) {
            SampleRng rng(seed, static_cast<std::uint64_t>(i));
            GroupPoint x = detail::draw_ball_point(space_, rng);
            GroupPoint y = detail::draw_ball_point(space_, rng);
            if (koranyi_norm(x) < 1e-3) x = dilate(0.5, space_.reference_point());
            const double value = evaluate(x, y);
            if (!(value >= 0.0)) report.nonnegative = false;

            const double lambda = std::exp(rng.uniform(-2.0, 2.0));
            const double scaled = evaluate(dilate(lambda, x), dilate(lambda, y));
            const double predicted = std::pow(lambda, homogeneity_degree()) * value;
            if (predicted != 0.0)
                report.worst_homogeneity = std::max(
                    report.worst_homogeneity, std::abs(scaled - predicted) / std::abs(predicted));

            RotationMatrix rot = random_rotation(2 * space_.n(), rng);
            const double rotated = evaluate(rotate_horizontal(rot, x), rotate_horizontal(rot, y));
            if (value != 0.0)
                report.worst_rotation = std::max(report.worst_rotation,
                                                 std::abs(rotated - value) / std::abs(value));
        }
        return report;
    }

private:
    KernelSpec(KernelKind kind, const HeisenbergSpace& space, int m,
               std::function<double(double)> profile, double tail)
        : kind_(kind), space_(space), q_(space.Q()), m_(m), profile_(std::move(profile)),
          tail_(tail) {}

    KernelKind kind_;
    HeisenbergSpace space_;
    int q_;
    int m_;
    std::function<double(double)> profile_;
    double tail_;
};

}  // namespace hgo
