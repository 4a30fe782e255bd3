#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "massart/geometry.hpp"
#include "massart/rng.hpp"

namespace massart {

enum class NoiseKind { Noiseless, Rcn, Quadrant, Wedge, Custom };

inline std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::Noiseless: return "none";
        case NoiseKind::Rcn: return "rcn";
        case NoiseKind::Quadrant: return "quadrant";
        case NoiseKind::Wedge: return "wedge";
        case NoiseKind::Custom: return "custom";
    }
    return "custom";
}

// Parameters that identify a built-in construction. Unused fields are zero.
struct NoiseParams {
    NoiseKind kind = NoiseKind::Noiseless;
    double beta = 1.0;
    double eta = 0.0;
    double alpha = 0.0;
};

using FlipProbability = std::function<double(std::span<const double>)>;

// The data-generating process: uniform marginal on the unit ball, clean label
// sign(target . x), flipped with probability flip_prob(x) <= (1 - beta)/2.
class MassartInstance {
public:
    MassartInstance(UnitVector target, double beta, FlipProbability flip, NoiseParams params)
        : target_(std::move(target)), beta_(beta), flip_(std::move(flip)), params_(params) {
        if (!(beta >= 0.0 && beta <= 1.0)) {
            throw std::invalid_argument("MassartInstance: beta must lie in [0, 1]");
        }
        if (!flip_) throw std::invalid_argument("MassartInstance: missing flip probability");
        params_.beta = beta;
    }

    const UnitVector& target() const { return target_; }
    std::size_t dim() const { return target_.dim(); }
    double beta() const { return beta_; }
    double max_flip() const { return (1.0 - beta_) / 2.0; }
    const NoiseParams& params() const { return params_; }

    double flip_prob(std::span<const double> x) const { return flip_(x); }

    int clean_label(std::span<const double> x) const { return sign_of(dot(target_.coords(), x)); }

private:
    UnitVector target_;
    double beta_;
    FlipProbability flip_;
    NoiseParams params_;
};

struct LabeledExample {
    BallPoint point;
    int label;

    LabeledExample(BallPoint p, int y) : point(std::move(p)), label(y) {
        if (y != 1 && y != -1) throw std::invalid_argument("LabeledExample: label must be +1 or -1");
    }
};

// Draws a noisy label for x. One uniform variate is consumed per call, whether
// or not the point is noisy, so label streams stay aligned across instances.
inline int label(const MassartInstance& instance, std::span<const double> x, Rng& rng) {
    const int clean = instance.clean_label(x);
    const double u = uniform01(rng);
    return u < instance.flip_prob(x) ? -clean : clean;
}

inline MassartInstance make_noiseless(UnitVector target) {
    return MassartInstance(std::move(target), 1.0, [](std::span<const double>) { return 0.0; },
                           {NoiseKind::Noiseless, 1.0, 0.0, 0.0});
}

// Random classification noise: every label flips with the same probability.
inline MassartInstance make_rcn(UnitVector target, double eta) {
    if (!(eta >= 0.0 && eta < 0.5)) throw std::invalid_argument("make_rcn: eta must lie in [0, 1/2)");
    const double beta = 1.0 - 2.0 * eta;
    return MassartInstance(std::move(target), beta,
                           [eta](std::span<const double>) { return eta; },
                           {NoiseKind::Rcn, beta, eta, 0.0});
}

// Target e1; labels flip with probability (1 - beta)/2 exactly where x1 x2 < 0.
inline MassartInstance make_quadrant_adversary(double beta, std::size_t d = 2) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("make_quadrant_adversary: beta must lie in (0, 1]");
    }
    const double eta = (1.0 - beta) / 2.0;
    return MassartInstance(
        UnitVector::axis(d, 0), beta,
        [eta](std::span<const double> x) { return x[0] * x[1] < 0.0 ? eta : 0.0; },
        {NoiseKind::Quadrant, beta, eta, 0.0});
}

enum class WedgeRegion { A, B, D };

inline char to_char(WedgeRegion r) {
    switch (r) {
        case WedgeRegion::A: return 'A';
        case WedgeRegion::B: return 'B';
        case WedgeRegion::D: return 'D';
    }
    return '?';
}

struct RegionTag {
    WedgeRegion region;
    bool in_c;
};

namespace detail {

// Polar angle of (x1, x2) measured counter-clockwise from e1, in [0, 2 pi).
inline double polar_angle(double x1, double x2) {
    double t = std::atan2(x2, x1);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

// Circular distance between angles.
inline double angular_gap(double a, double b) {
    double g = std::fmod(std::fabs(a - b), 2.0 * kPi);
    return g > kPi ? 2.0 * kPi - g : g;
}

// Region of polar angle t for the wedge construction with w* = e1 and
// w = (cos alpha, sin alpha). A: disagreement wedges. D: agreement points
// closer to the w* boundary. B: agreement points closer to the w boundary.
inline RegionTag classify_polar(double alpha, double t) {
    const double half = alpha / 2.0;
    const double q = kPi / 2.0;
    auto within = [](double v, double lo, double hi) { return v > lo && v < hi; };
    WedgeRegion r;
    if (within(t, q, q + alpha) || within(t, 3.0 * q, 3.0 * q + alpha)) {
        r = WedgeRegion::A;
    } else if (within(t, half, q) || within(t, kPi + half, 3.0 * q)) {
        r = WedgeRegion::D;
    } else {
        r = WedgeRegion::B;
    }
    const bool in_c = angular_gap(t, 0.0) < half || angular_gap(t, kPi) < half;
    return {r, in_c};
}

inline void check_wedge_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < kPi / 3.0)) {
        throw std::invalid_argument("wedge construction: alpha must lie in (0, pi/3)");
    }
}

}  // namespace detail

// Region of a planar point in the wedge construction, plus membership of the
// double wedge C of half-angle alpha/2 around the axis of w*. C overlaps B.
inline RegionTag region_of(double alpha, std::span<const double> x) {
    detail::check_wedge_alpha(alpha);
    if (x.size() != 2) throw InvalidDimension("region_of: the wedge construction is planar");
    if (x[0] == 0.0 && x[1] == 0.0) throw std::domain_error("region_of: the origin has no region");
    return detail::classify_polar(alpha, detail::polar_angle(x[0], x[1]));
}

// Planar construction making hinge minimization inconsistent: labels are
// deterministic in region D and flipped with probability eta elsewhere.
inline MassartInstance make_wedge_adversary(double alpha, double eta) {
    detail::check_wedge_alpha(alpha);
    if (!(eta >= 0.0 && eta < 0.5)) {
        throw std::invalid_argument("make_wedge_adversary: eta must lie in [0, 1/2)");
    }
    const double beta = 1.0 - 2.0 * eta;
    return MassartInstance(
        UnitVector::axis(2, 0), beta,
        [alpha, eta](std::span<const double> x) {
            const auto tag = detail::classify_polar(alpha, detail::polar_angle(x[0], x[1]));
            return tag.region == WedgeRegion::D ? 0.0 : eta;
        },
        {NoiseKind::Wedge, beta, eta, alpha});
}

// Custom adversary. The bound flip_prob <= (1 - beta)/2 is spot-checked on
// `spot_checks` uniform points.
inline MassartInstance make_custom_instance(UnitVector target, double beta, FlipProbability flip,
                                            Rng& rng, std::size_t spot_checks = 100'000) {
    MassartInstance inst(std::move(target), beta, std::move(flip),
                         {NoiseKind::Custom, beta, (1.0 - beta) / 2.0, 0.0});
    Vec x(inst.dim());
    for (std::size_t i = 0; i < spot_checks; ++i) {
        sample_unit_ball_into(x, rng);
        const double p = inst.flip_prob(x);
        if (!(p >= 0.0 && p <= inst.max_flip() + 1e-12)) {
            throw std::invalid_argument("make_custom_instance: flip probability " +
                                        std::to_string(p) + " violates the Massart bound");
        }
    }
    return inst;
}

inline std::vector<LabeledExample> clean_labels(std::span<const LabeledExample> sample,
                                                const UnitVector& target) {
    std::vector<LabeledExample> out;
    out.reserve(sample.size());
    for (const auto& ex : sample) {
        out.emplace_back(ex.point, sign_of(dot(target.coords(), ex.point.coords())));
    }
    return out;
}

inline std::vector<LabeledExample> draw_labeled(const MassartInstance& instance, std::size_t m,
                                                Rng& rng) {
    std::vector<LabeledExample> out;
    out.reserve(m);
    Vec x(instance.dim());
    for (std::size_t i = 0; i < m; ++i) {
        sample_unit_ball_into(x, rng);
        const int y = label(instance, x, rng);
        out.emplace_back(BallPoint(x), y);
    }
    return out;
}

}  // namespace massart
