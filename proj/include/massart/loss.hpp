#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "massart/geometry.hpp"
#include "massart/noise.hpp"
#include "massart/stats.hpp"

namespace massart {

struct HingeParams {
    double tau;

    explicit HingeParams(double t) : tau(t) {
        if (!(t > 0.0)) throw std::invalid_argument("HingeParams: tau must be positive");
    }
};

// max(0, 1 - y (w . x) / tau). w need not have unit length.
inline double hinge(std::span<const double> w, std::span<const double> x, int y, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("hinge: tau must be positive");
    return std::max(0.0, 1.0 - static_cast<double>(y) * dot(w, x) / tau);
}

inline double empirical_hinge(std::span<const double> w, std::span<const LabeledExample> sample,
                              double tau) {
    if (sample.empty()) throw std::invalid_argument("empirical_hinge: empty sample");
    double s = 0.0;
    for (const auto& ex : sample) s += hinge(w, ex.point.coords(), ex.label, tau);
    return s / static_cast<double>(sample.size());
}

// Fraction of examples with sign(w . x) != y, sign(0) = +1.
inline double empirical_01(std::span<const double> w, std::span<const LabeledExample> sample) {
    if (sample.empty()) throw std::invalid_argument("empirical_01: empty sample");
    std::size_t wrong = 0;
    for (const auto& ex : sample) {
        if (sign_of(dot(w, ex.point.coords())) != ex.label) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(sample.size());
}

// Error against clean labels under the uniform marginal: theta(w, w*) / pi.
inline double true_error_uniform(const UnitVector& w, const UnitVector& target) {
    return angle(w, target) / kPi;
}

// Monte-Carlo estimate of err(w) - err(w*) under the noisy distribution,
// via the disagreement-weighted integrand (1 - 2 eta(x)) 1{h_w(x) != h_w*(x)}.
inline Estimate excess_error_mc(const UnitVector& w, const MassartInstance& instance,
                                std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("excess_error_mc: need at least one sample");
    if (w.dim() != instance.dim()) throw DimensionMismatch("excess_error_mc: dimension mismatch");
    RunningStats stats;
    Vec x(instance.dim());
    const auto target = instance.target().coords();
    for (std::size_t i = 0; i < n; ++i) {
        sample_unit_ball_into(x, rng);
        double v = 0.0;
        if (sign_of(dot(w.coords(), x)) != sign_of(dot(target, x))) {
            v = 1.0 - 2.0 * instance.flip_prob(x);
        }
        stats.add(v);
    }
    return stats.estimate();
}

}  // namespace massart
