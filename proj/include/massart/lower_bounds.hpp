#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "massart/geometry.hpp"
#include "massart/learners.hpp"
#include "massart/loss.hpp"
#include "massart/noise.hpp"
#include "massart/quadrature.hpp"
#include "massart/stats.hpp"

namespace massart {

// ---- Average under the quadrant adversary ---------------------------------

inline double average_drift_angle(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("average_drift_angle: beta must lie in (0, 1]");
    return std::atan((1.0 - beta) / (1.0 + beta));
}

struct AverageExcessBounds {
    double angle_bound;   // beta * arctan(x) / pi, the excess of the drifted direction
    double closed_bound;  // beta x / pi, the closed form stated with the construction
    double valid_bound;   // beta x / ((1 + x) pi) <= angle_bound
};

// x = (1 - beta)/(1 + beta). The drifted direction disagrees with w* only on
// the noisy quadrants, so its excess error is beta theta / pi.
inline AverageExcessBounds average_excess_lower(double beta) {
    const double theta = average_drift_angle(beta);
    const double x = (1.0 - beta) / (1.0 + beta);
    return {beta * theta / kPi, beta * x / kPi, beta * x / ((1.0 + x) * kPi)};
}

// Angle of the normalized Average of m examples drawn from the band
// |w* . x| < b under the quadrant adversary in dimension d.
inline double average_in_band_angle(double beta, std::size_t d, double b, std::size_t m, Rng& rng) {
    const auto inst = make_quadrant_adversary(beta, d);
    const Band band(inst.target(), b);
    Vec sum(d, 0.0), x(d);
    for (std::size_t i = 0; i < m; ++i) {
        sample_in_band_into(band, x, rng);
        const int y = label(inst, x, rng);
        for (std::size_t j = 0; j < d; ++j) sum[j] += y * x[j];
    }
    return angle_between(sum, inst.target().coords());
}

// ---- Hinge inconsistency on the wedge distribution ------------------------

struct HingeAreas {
    double cA, dA, cB, dB, cC, dC, cD, dD;
    double cT;
};

namespace detail {

inline void check_alpha_open(double alpha) {
    if (!(alpha > 0.0 && alpha < kPi / 3.0)) throw std::invalid_argument("alpha must lie in (0, pi/3)");
}

// 1 - cos(a) without cancellation.
inline double one_minus_cos(double a) {
    const double s = std::sin(a / 2.0);
    return 2.0 * s * s;
}

// (1/pi) int int_0^1 (1 -/+ z sin(phi) / tau)_+ z dz dphi over phi in (p0, p1),
// one wedge with phi measured from the decision boundary of w*.
inline double wedge_clean(double p0, double p1, double tau) {
    if (tau >= 1.0) {
        return ((p1 - p0) / 2.0 - (std::cos(p0) - std::cos(p1)) / (3.0 * tau)) / kPi;
    }
    auto radial = [tau](double phi) {
        const double s = std::sin(phi);
        return s <= tau ? 0.5 - s / (3.0 * tau) : tau * tau / (6.0 * s * s);
    };
    // The radial integral has a kink where sin(phi) = tau.
    const double k1 = std::asin(tau), k2 = kPi - k1;
    std::vector<double> cuts{p0};
    for (double k : {k1, k2}) {
        if (k > p0 && k < p1) cuts.push_back(k);
    }
    cuts.push_back(p1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_adaptive(radial, cuts[i], cuts[i + 1], 1e-12);
    }
    return total / kPi;
}

inline double wedge_dirty(double p0, double p1, double tau) {
    return ((p1 - p0) / 2.0 + (std::cos(p0) - std::cos(p1)) / (3.0 * tau)) / kPi;
}

}  // namespace detail

// Per-wedge expected hinge of h_{w*} on each region, with correct (c) and
// flipped (d) labels. Noisy values are closed forms; clean values are closed
// forms for tau >= 1 and a one-dimensional quadrature of the exact radial
// integral otherwise. cT is the triangle bound on cC.
inline HingeAreas hinge_areas(double alpha, double tau) {
    detail::check_alpha_open(alpha);
    if (!(tau > 0.0)) throw std::invalid_argument("hinge_areas: tau must be positive");
    const double a0 = 0.0, a1 = alpha;
    const double b0 = alpha, b1 = (kPi + alpha) / 2.0;
    const double d0 = 0.0, d1 = (kPi - alpha) / 2.0;
    const double c0 = (kPi - alpha) / 2.0, c1 = (kPi + alpha) / 2.0;
    HingeAreas r;
    r.cA = detail::wedge_clean(a0, a1, tau);
    r.dA = detail::wedge_dirty(a0, a1, tau);
    r.cB = detail::wedge_clean(b0, b1, tau);
    r.dB = detail::wedge_dirty(b0, b1, tau);
    r.cC = detail::wedge_clean(c0, c1, tau);
    r.dC = detail::wedge_dirty(c0, c1, tau);
    r.cD = detail::wedge_clean(d0, d1, tau);
    r.dD = detail::wedge_dirty(d0, d1, tau);
    r.cT = tau * tau * std::tan(alpha / 2.0) / (3.0 * kPi);
    return r;
}

// Noise level above which w beats w* in tau-hinge loss, for tau >= 1.
inline double eta1(double alpha) {
    if (!(alpha > 0.0 && alpha <= kPi / 3.0)) throw std::invalid_argument("eta1: alpha must lie in (0, pi/3]");
    const double num = detail::one_minus_cos(alpha);
    return num / (num + 2.0 * std::sin(alpha / 2.0));
}

// Threshold for tau <= 1 obtained from the triangle bound on cC.
inline double eta2(double alpha, double tau) {
    detail::check_alpha_open(alpha);
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("eta2: tau must lie in (0, 1]");
    const double num = 2.0 / 3.0 * detail::one_minus_cos(alpha);
    const double den = num + 2.0 / 3.0 * std::sin(alpha / 2.0) + alpha * tau / 2.0 -
                       tau * tau * tau / 3.0 * std::tan(alpha / 2.0);
    if (!(den > 0.0)) throw std::domain_error("eta2: non-positive denominator");
    return num / den;
}

struct HingeGapReport {
    double alpha = 0.0, eta = 0.0, tau = 0.0;
    HingeAreas areas{};
    double gap = 0.0;        // L_tau(h_w) - L_tau(h_{w*})
    double gap_upper = 0.0;  // same with cC replaced by cT
    double threshold = 0.0;  // (dA - cA) / ((dA - cA) + (dC - cC))
    bool certified_negative = false;
    double eta1 = 0.0;
    double eta2 = 0.0;  // evaluated at min(tau, 1)
};

inline HingeGapReport hinge_gap(double alpha, double eta, double tau) {
    if (!(eta >= 0.0 && eta < 0.5)) throw std::invalid_argument("hinge_gap: eta must lie in [0, 1/2)");
    HingeGapReport r;
    r.alpha = alpha;
    r.eta = eta;
    r.tau = tau;
    r.areas = hinge_areas(alpha, tau);
    const auto& a = r.areas;
    double da, dc;
    if (tau >= 1.0) {
        da = 2.0 / (3.0 * kPi * tau) * detail::one_minus_cos(alpha);
        dc = 4.0 / (3.0 * kPi * tau) * std::sin(alpha / 2.0);
    } else {
        da = a.dA - a.cA;
        dc = a.dC - a.cC;
    }
    r.gap = 2.0 * ((1.0 - eta) * da - eta * dc);
    r.gap_upper = tau >= 1.0 ? r.gap : 2.0 * ((1.0 - eta) * da - eta * (a.dC - a.cT));
    r.threshold = da / (da + dc);
    r.certified_negative = r.gap_upper < 0.0;
    r.eta1 = eta1(alpha);
    r.eta2 = eta2(alpha, std::min(tau, 1.0));
    return r;
}

// Largest alpha (to relative 1e-6) with eta1(alpha) < eta0/2 and, for
// tau0 < 1, eta2(alpha, tau0) < eta0/2 with the disagreement wedge inside the
// tau0-band (sin alpha <= tau0).
inline double choose_alpha(double tau0, double eta0) {
    if (!(tau0 > 0.0)) throw std::invalid_argument("choose_alpha: tau0 must be positive");
    if (!(eta0 > 0.0 && eta0 < 0.5)) throw std::invalid_argument("choose_alpha: eta0 must lie in (0, 1/2)");
    auto ok = [&](double a) {
        if (!(eta1(a) < eta0 / 2.0)) return false;
        if (tau0 >= 1.0) return true;
        return std::sin(a) <= tau0 && eta2(a, tau0) < eta0 / 2.0;
    };
    double hi = std::nextafter(kPi / 3.0, 0.0);
    if (ok(hi)) return hi;
    double lo = hi / 2.0;
    while (!ok(lo)) {
        hi = lo;
        lo /= 2.0;
    }
    while ((hi - lo) > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Monte-Carlo counterpart of hinge_areas plus a direct gap estimate.
struct McHingeReport {
    double alpha = 0.0, eta = 0.0, tau = 0.0;
    std::size_t n = 0;
    Estimate cA, dA, cB, dB, cC, dC, cD, dD;
    // Per-wedge hinge of h_{w*} under labels drawn from the wedge distribution.
    Estimate observed_A, observed_B, observed_C, observed_D;
    Estimate gap;  // L_tau(h_w) - L_tau(h_{w*}) with the noise integrated out
};

inline McHingeReport mc_hinge_by_region(double alpha, double eta, double tau, std::size_t n, Rng& rng) {
    detail::check_alpha_open(alpha);
    if (!(tau > 0.0)) throw std::invalid_argument("mc_hinge_by_region: tau must be positive");
    if (n == 0) throw std::invalid_argument("mc_hinge_by_region: need at least one sample");
    const auto inst = make_wedge_adversary(alpha, eta);
    const Vec target{1.0, 0.0};
    const Vec w{std::cos(alpha), std::sin(alpha)};

    // Index: region (A, B, D, C) x (clean, dirty, observed).
    RunningStats stats[4][3];
    RunningStats gap;
    Vec x(2);
    for (std::size_t i = 0; i < n; ++i) {
        sample_unit_ball_into(x, rng);
        const int y = label(inst, x, rng);
        if (x[0] == 0.0 && x[1] == 0.0) continue;
        const auto tag = region_of(alpha, x);
        const int s = inst.clean_label(x);
        const double clean = hinge(target, x, s, tau);
        const double dirty = hinge(target, x, -s, tau);
        const double observed = hinge(target, x, y, tau);
        const int r = static_cast<int>(tag.region);
        for (int region = 0; region < 3; ++region) {
            const bool in = region == r;
            stats[region][0].add(in ? clean : 0.0);
            stats[region][1].add(in ? dirty : 0.0);
            stats[region][2].add(in ? observed : 0.0);
        }
        stats[3][0].add(tag.in_c ? clean : 0.0);
        stats[3][1].add(tag.in_c ? dirty : 0.0);
        stats[3][2].add(tag.in_c ? observed : 0.0);

        const double p = inst.flip_prob(x);
        const double diff_clean = hinge(w, x, s, tau) - clean;
        const double diff_dirty = hinge(w, x, -s, tau) - dirty;
        gap.add((1.0 - p) * diff_clean + p * diff_dirty);
    }
    // Each region is a pair of congruent wedges.
    auto half = [](const RunningStats& st) {
        const auto e = st.estimate();
        return Estimate{e.mean / 2.0, e.std_err / 2.0};
    };
    McHingeReport out;
    out.alpha = alpha;
    out.eta = eta;
    out.tau = tau;
    out.n = n;
    out.cA = half(stats[0][0]);
    out.dA = half(stats[0][1]);
    out.observed_A = half(stats[0][2]);
    out.cB = half(stats[1][0]);
    out.dB = half(stats[1][1]);
    out.observed_B = half(stats[1][2]);
    out.cD = half(stats[2][0]);
    out.dD = half(stats[2][1]);
    out.observed_D = half(stats[2][2]);
    out.cC = half(stats[3][0]);
    out.dC = half(stats[3][1]);
    out.observed_C = half(stats[3][2]);
    out.gap = gap.estimate();
    return out;
}

}  // namespace massart
