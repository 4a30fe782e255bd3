#pragma once

#include <cmath>
#include <stdexcept>

namespace massart {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance `tol`.
// The interval is pre-split into a few panels so that narrow features are not
// missed by the first coarse estimate.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerance must be positive");
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, tol, max_depth);
    constexpr int kPanels = 8;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == kPanels) ? b : lo + h;
        const double mid = 0.5 * (lo + hi);
        const double flo = f(lo), fhi = f(hi), fmid = f(mid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::simpson_step(f, lo, flo, hi, fhi, mid, fmid, whole, tol / kPanels,
                                      max_depth);
    }
    return total;
}

}  // namespace massart
