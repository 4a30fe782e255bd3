#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solver, quadrature or closed forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "massart/noise.hpp"

namespace massart::oracle {

// Composite Gauss-Legendre (5 nodes per panel) on [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, std::size_t panels = 4000) {
    static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                    -0.9061798459386640, 0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (int k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
        total += 0.5 * h * s;
    }
    return total;
}

inline double naive_hinge(std::span<const double> w, std::span<const LabeledExample> sample,
                          double tau) {
    double s = 0.0;
    for (const auto& ex : sample) {
        double p = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) p += w[j] * ex.point[j];
        s += std::max(0.0, 1.0 - ex.label * p / tau);
    }
    return s / static_cast<double>(sample.size());
}

struct GridMin {
    double value;
    double x, y;
};

// Minimum of the empirical hinge over a polar grid of the disk
// {|v - center| <= radius} in the plane: n_r radii times n_t angles plus the center.
inline GridMin grid_min_hinge_disk(std::span<const LabeledExample> sample, double tau,
                                   std::span<const double> center, double radius,
                                   std::size_t n_r = 2000, std::size_t n_t = 2000) {
    // Precompute y x / tau so each grid point costs one pass.
    std::vector<double> ax, ay;
    for (const auto& ex : sample) {
        ax.push_back(ex.label * ex.point[0] / tau);
        ay.push_back(ex.label * ex.point[1] / tau);
    }
    const double inv_m = 1.0 / static_cast<double>(sample.size());
    auto eval = [&](double vx, double vy) {
        double s = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) s += std::max(0.0, 1.0 - ax[i] * vx - ay[i] * vy);
        return s * inv_m;
    };
    GridMin best{eval(center[0], center[1]), center[0], center[1]};
    std::vector<double> cs(n_t), sn(n_t);
    for (std::size_t t = 0; t < n_t; ++t) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n_t);
        cs[t] = std::cos(th);
        sn[t] = std::sin(th);
    }
    for (std::size_t r = 1; r <= n_r; ++r) {
        const double rad = radius * static_cast<double>(r) / static_cast<double>(n_r);
        for (std::size_t t = 0; t < n_t; ++t) {
            const double vx = center[0] + rad * cs[t], vy = center[1] + rad * sn[t];
            const double v = eval(vx, vy);
            if (v < best.value) best = {v, vx, vy};
        }
    }
    return best;
}

// Binomial 3-sigma half width for a proportion p at n trials.
inline double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace massart::oracle
