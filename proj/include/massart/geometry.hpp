#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "massart/quadrature.hpp"
#include "massart/rng.hpp"

namespace massart {

using Vec = std::vector<double>;

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PathologicalBand : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kBallTolerance = 1e-12;
inline constexpr std::uint64_t kMaxBandDraws = 1'000'000'000ULL;

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: dimensions " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// sign with sign(0) := +1, shared by labels, losses and learners.
inline int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

inline void check_dimension(std::size_t d) {
    if (d < 2) throw InvalidDimension("dimension must be at least 2, got " + std::to_string(d));
}

// A direction in R^d (d >= 2) with unit Euclidean norm.
class UnitVector {
public:
    // Accepts coordinates already of unit norm (within 1e-9).
    explicit UnitVector(Vec coords) : coords_(std::move(coords)) {
        check_dimension(coords_.size());
        const double n = norm(coords_);
        if (std::fabs(n - 1.0) > kUnitTolerance) {
            throw std::invalid_argument("UnitVector: norm " + std::to_string(n) + " is not 1");
        }
    }

    // Normalizes arbitrary non-zero coordinates.
    static UnitVector normalized(std::span<const double> v) {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw std::invalid_argument("UnitVector::normalized: zero or non-finite vector");
        }
        Vec c(v.begin(), v.end());
        for (auto& x : c) x /= n;
        return UnitVector(std::move(c));
    }

    static UnitVector axis(std::size_t d, std::size_t i) {
        check_dimension(d);
        if (i >= d) throw std::out_of_range("UnitVector::axis: index out of range");
        Vec c(d, 0.0);
        c[i] = 1.0;
        return UnitVector(std::move(c));
    }

    // (cos t, sin t, 0, ..., 0): the unit vector at angle t from e1 in the (e1, e2) plane.
    static UnitVector planar(std::size_t d, double t) {
        check_dimension(d);
        Vec c(d, 0.0);
        c[0] = std::cos(t);
        c[1] = std::sin(t);
        return UnitVector(std::move(c));
    }

    std::size_t dim() const { return coords_.size(); }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    const Vec& vec() const { return coords_; }

    friend bool operator==(const UnitVector&, const UnitVector&) = default;

private:
    Vec coords_;
};

// A point of the closed unit ball.
class BallPoint {
public:
    explicit BallPoint(Vec coords) : coords_(std::move(coords)) {
        if (norm(coords_) > 1.0 + kBallTolerance) {
            throw std::invalid_argument("BallPoint: point lies outside the unit ball");
        }
    }

    std::size_t dim() const { return coords_.size(); }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    const Vec& vec() const { return coords_; }

    friend bool operator==(const BallPoint&, const BallPoint&) = default;

private:
    Vec coords_;
};

// The slab {x : |center . x| < half_width}.
struct Band {
    UnitVector center;
    double half_width;

    Band(UnitVector c, double b) : center(std::move(c)), half_width(b) {
        if (!(b > 0.0 && b <= 1.0)) {
            throw std::invalid_argument("Band: half width must lie in (0, 1], got " +
                                        std::to_string(b));
        }
    }

    bool contains(std::span<const double> x) const {
        return std::fabs(dot(center.coords(), x)) < half_width;
    }
};

// Writes a uniform point of the d-ball into `out` (d = out.size()).
// Direction: normalized isotropic Gaussian. Radius: U^(1/d).
inline void sample_unit_ball_into(std::span<double> out, Rng& rng) {
    const std::size_t d = out.size();
    check_dimension(d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (auto& x : out) {
            x = gauss(rng);
            sq += x * x;
        }
    } while (!(sq > 0.0));
    const double radius = std::pow(uniform01(rng), 1.0 / static_cast<double>(d));
    const double scale = radius / std::sqrt(sq);
    for (auto& x : out) x *= scale;
}

inline BallPoint sample_unit_ball(std::size_t d, Rng& rng) {
    check_dimension(d);
    Vec x(d);
    sample_unit_ball_into(x, rng);
    return BallPoint(std::move(x));
}

// Rejection sampler for the band. Returns the number of uniform-ball draws
// discarded before the accepted one.
inline std::uint64_t sample_in_band_into(const Band& band, std::span<double> out, Rng& rng) {
    if (out.size() != band.center.dim()) throw DimensionMismatch("sample_in_band: dimension mismatch");
    std::uint64_t rejected = 0;
    for (;;) {
        sample_unit_ball_into(out, rng);
        if (band.contains(out)) return rejected;
        if (++rejected >= kMaxBandDraws) {
            throw PathologicalBand("sample_in_band: no acceptance after 1e9 draws (half width " +
                                   std::to_string(band.half_width) + ")");
        }
    }
}

struct BandDraw {
    BallPoint point;
    std::uint64_t rejected;
};

inline BandDraw sample_in_band(const Band& band, std::size_t d, Rng& rng) {
    if (d != band.center.dim()) throw DimensionMismatch("sample_in_band: dimension mismatch");
    Vec x(d);
    const auto rejected = sample_in_band_into(band, x, rng);
    return {BallPoint(std::move(x)), rejected};
}

// Angle between two directions, in [0, pi].
inline double angle(const UnitVector& u, const UnitVector& v) {
    const double c = std::clamp(dot(u.coords(), v.coords()), -1.0, 1.0);
    return std::acos(c);
}

// Angle between arbitrary non-zero vectors.
inline double angle_between(std::span<const double> u, std::span<const double> v) {
    const double nu = norm(u), nv = norm(v);
    if (!(nu > 0.0) || !(nv > 0.0)) throw std::invalid_argument("angle_between: zero vector");
    return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}

// V_{d-1} / V_d = Gamma(d/2 + 1) / (sqrt(pi) Gamma((d + 1)/2)).
inline double volume_ratio(std::size_t d) {
    check_dimension(d);
    const double dd = static_cast<double>(d);
    return std::exp(std::lgamma(dd / 2.0 + 1.0) - std::lgamma((dd + 1.0) / 2.0)) /
           std::sqrt(kPi);
}

// Density of u . x for x uniform on the d-ball, up to the V_{d-1}/V_d factor.
inline double band_density_kernel(std::size_t d, double z) {
    const double s = 1.0 - z * z;
    if (s <= 0.0) return 0.0;
    return std::pow(s, (static_cast<double>(d) - 1.0) / 2.0);
}

// Exact probability that u . x lies in [a, b] under the uniform d-ball.
inline double band_mass(std::size_t d, double a, double b) {
    check_dimension(d);
    if (a > b) std::swap(a, b);
    a = std::max(a, -1.0);
    b = std::min(b, 1.0);
    if (a >= b) return 0.0;
    return volume_ratio(d) *
           integrate_adaptive([d](double z) { return band_density_kernel(d, z); }, a, b, 1e-10);
}

struct BandMassBounds {
    double lower;
    double upper;
    double exact;
};

// Two-sided bracket on the mass of {a <= u . x <= b}, valid for
// a, b in [-C/sqrt(d), C/sqrt(d)] and C < d/2.
inline BandMassBounds band_mass_bounds(std::size_t d, double a, double b, double C) {
    check_dimension(d);
    const double dd = static_cast<double>(d);
    const double limit = C / std::sqrt(dd);
    if (!(C >= 0.0) || !(C < dd / 2.0)) {
        throw std::domain_error("band_mass_bounds: need 0 <= C < d/2");
    }
    const double slack = 1e-15;
    if (std::fabs(a) > limit + slack || std::fabs(b) > limit + slack) {
        throw std::domain_error("band_mass_bounds: endpoints outside [-C/sqrt(d), C/sqrt(d)]");
    }
    if (a > b) throw std::domain_error("band_mass_bounds: need a <= b");
    const double ratio = volume_ratio(d);
    const double width = b - a;
    return {width * std::exp2(-C) * ratio, width * ratio, band_mass(d, a, b)};
}

// Upper bound on P[sign(u.x) != sign(w.x) and |u.x| > c alpha / sqrt(d)]
// for unit u, w at angle alpha.
inline double disagreement_outside_band_bound(std::size_t d, double alpha, double c) {
    if (d <= 2) throw InvalidDimension("disagreement_outside_band_bound: need d > 2");
    if (!(alpha >= 0.0 && alpha < kPi / 2.0)) {
        throw std::domain_error("disagreement_outside_band_bound: alpha must lie in [0, pi/2)");
    }
    if (!(c >= 1.0)) throw std::domain_error("disagreement_outside_band_bound: need c >= 1");
    const double dd = static_cast<double>(d);
    return alpha / kPi * std::exp(-c * c * (dd - 2.0) / (2.0 * dd));
}

}  // namespace massart
