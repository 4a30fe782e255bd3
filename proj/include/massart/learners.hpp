#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "massart/geometry.hpp"
#include "massart/hinge_solver.hpp"
#include "massart/loss.hpp"
#include "massart/noise.hpp"
#include "massart/rng.hpp"

namespace massart {

// Localization schedule: round k (1-based) uses
//   alpha_k = ao pi (1 - lambda)^(k-1),  b_{k-1} = min(1, c_band alpha_k / sqrt(d)),
//   tau_k = tau_ratio b_{k-1},  m_k = ceil(m_scale d (d + ln((k + k^2) / delta))).
struct Schedule {
    std::size_t d = 2;
    double epsilon = 0.1;
    double delta = 0.1;
    double lambda = 0.5;
    double ao = 0.25;
    double c_band = 1.5;
    double tau_ratio = 0.5;
    double m_scale = 5.0;
    std::size_t rounds = 1;
    // Replaces the m_k formula when set.
    std::optional<std::size_t> fixed_m;

    double alpha(std::size_t k) const {
        return ao * kPi * std::pow(1.0 - lambda, static_cast<double>(k) - 1.0);
    }
    double band(std::size_t k) const {
        return std::min(1.0, c_band * alpha(k) / std::sqrt(static_cast<double>(d)));
    }
    double tau(std::size_t k) const { return tau_ratio * band(k); }
    std::size_t labels(std::size_t k) const {
        if (fixed_m) return *fixed_m;
        const double kk = static_cast<double>(k);
        const double dd = static_cast<double>(d);
        return static_cast<std::size_t>(std::ceil(m_scale * dd * (dd + std::log((kk + kk * kk) / delta))));
    }
};

// s = ceil(log(1/epsilon) / log(1/(1 - lambda))).
inline std::size_t round_count(double epsilon, double lambda) {
    return static_cast<std::size_t>(std::ceil(std::log(1.0 / epsilon) / -std::log1p(-lambda)));
}

namespace detail {

inline void check_schedule_args(std::size_t d, double epsilon, double delta) {
    check_dimension(d);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("schedule: epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("schedule: delta must lie in (0, 1)");
}

}  // namespace detail

// sqrt(2.50306) (3.6e-6)^(1/4)
inline double paper_tau_ratio() { return std::sqrt(2.50306) * std::pow(3.6e-6, 0.25); }

inline Schedule paper_schedule(std::size_t d, double epsilon, double delta, double m_scale = 5.0) {
    detail::check_schedule_args(d, epsilon, delta);
    if (d <= 20) throw std::invalid_argument("paper_schedule: the constants need d > 20");
    Schedule s;
    s.d = d;
    s.epsilon = epsilon;
    s.delta = delta;
    s.lambda = 1e-6;
    s.ao = 0.038709;
    s.c_band = 2.3463;
    s.tau_ratio = paper_tau_ratio();
    s.m_scale = m_scale;
    s.rounds = round_count(epsilon, s.lambda);
    return s;
}

// Desk-scale constants; the guarantee of the paper schedule does not cover them.
inline Schedule practical_schedule(std::size_t d, double epsilon, double delta, double lambda = 0.5,
                                   double c_band = 1.5, double tau_ratio = 0.5, double m_scale = 5.0,
                                   double ao = 0.25) {
    detail::check_schedule_args(d, epsilon, delta);
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("practical_schedule: lambda must lie in (0, 1)");
    if (!(c_band > 0.0) || !(tau_ratio > 0.0) || !(m_scale > 0.0) || !(ao > 0.0)) {
        throw std::invalid_argument("practical_schedule: constants must be positive");
    }
    Schedule s;
    s.d = d;
    s.epsilon = epsilon;
    s.delta = delta;
    s.lambda = lambda;
    s.ao = ao;
    s.c_band = c_band;
    s.tau_ratio = tau_ratio;
    s.m_scale = m_scale;
    s.rounds = round_count(epsilon, lambda);
    return s;
}

// Access to the data source. Learners call draw() for unlabeled points and
// query() only for points they decide to label; target() is for reporting.
class InstanceOracle {
public:
    explicit InstanceOracle(const MassartInstance& instance) : instance_(&instance) {}

    std::size_t dim() const { return instance_->dim(); }
    void draw(std::span<double> out, Rng& rng) const { sample_unit_ball_into(out, rng); }
    int query(std::span<const double> x, Rng& rng) const { return label(*instance_, x, rng); }
    const UnitVector& target() const { return instance_->target(); }
    const MassartInstance& instance() const { return *instance_; }

private:
    const MassartInstance* instance_;
};

struct RoundRecord {
    std::size_t k = 0;
    double angle_to_target = 0.0;
    std::size_t labels = 0;     // cumulative label queries
    std::size_t unlabeled = 0;  // cumulative unlabeled draws, accepted or rejected
    double hinge = 0.0;
    double lower_bound = 0.0;
    bool converged = false;
    bool flagged = false;
    double alpha = 0.0;
    double band = 0.0;
    double tau = 0.0;
    double step = 0.0;  // |v_k - w_{k-1}|
    Vec w;              // w_k
};

struct RunReport {
    UnitVector final_w = UnitVector::axis(2, 0);
    std::vector<RoundRecord> rounds;
    std::size_t total_labels = 0;
    std::size_t total_unlabeled = 0;
    std::size_t flagged_rounds = 0;
};

// Margin-based active learning: each round labels m_k points drawn from the
// band around w_{k-1}, minimizes the tau_k-hinge over B(w_{k-1}, alpha_k) and
// normalizes.
template <class Oracle>
RunReport margin_based_learn(const Oracle& oracle, const Schedule& schedule, const UnitVector& w0,
                             Rng& rng, const SolverOptions& solver = {}) {
    const std::size_t d = oracle.dim();
    if (w0.dim() != d || schedule.d != d) throw DimensionMismatch("margin_based_learn: dimension mismatch");
    RunReport report;
    report.final_w = w0;
    UnitVector w = w0;
    Vec x(d);
    std::vector<LabeledExample> working;
    for (std::size_t k = 1; k <= schedule.rounds; ++k) {
        RoundRecord rec;
        rec.k = k;
        rec.alpha = schedule.alpha(k);
        rec.band = schedule.band(k);
        rec.tau = schedule.tau(k);
        const std::size_t m = schedule.labels(k);
        const Band band(w, rec.band);

        working.clear();
        working.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::uint64_t draws = 0;
            do {
                if (draws++ >= kMaxBandDraws) {
                    throw PathologicalBand("margin_based_learn: band acceptance cap reached in round " +
                                           std::to_string(k));
                }
                oracle.draw(x, rng);
            } while (!band.contains(x));
            report.total_unlabeled += draws;
            const int y = oracle.query(x, rng);
            working.emplace_back(BallPoint(x), y);
        }
        report.total_labels += m;

        SolverOptions opts = solver;
        opts.seed = derive_seed(solver.seed, k);
        const auto solve = minimize_hinge_in_ball(working, rec.tau, w.coords(), rec.alpha, opts);
        rec.hinge = solve.achieved;
        rec.lower_bound = solve.lower_bound;
        rec.converged = solve.converged;
        rec.step = distance(solve.v, w.coords());
        rec.flagged = !solve.converged;
        if (norm(solve.v) < 1e-9) {
            rec.flagged = true;
        } else {
            w = UnitVector::normalized(solve.v);
        }
        if (rec.flagged) ++report.flagged_rounds;
        rec.angle_to_target = angle(w, oracle.target());
        rec.w = w.vec();
        rec.labels = report.total_labels;
        rec.unlabeled = report.total_unlabeled;
        report.rounds.push_back(rec);
    }
    report.final_w = w;
    return report;
}

// (1/m) sum_i y_i x_i
inline Vec average_learner(std::span<const LabeledExample> sample) {
    if (sample.empty()) throw std::invalid_argument("average_learner: empty sample");
    Vec w(sample.front().point.dim(), 0.0);
    for (const auto& ex : sample) {
        const auto x = ex.point.coords();
        if (x.size() != w.size()) throw DimensionMismatch("average_learner: dimension mismatch");
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += ex.label * x[j];
    }
    for (auto& c : w) c /= static_cast<double>(sample.size());
    return w;
}

struct OneShotResult {
    std::optional<UnitVector> direction;  // empty when the minimizer is 0
    SolveResult solve;
};

// Hinge minimization over the unit ball, then normalization.
inline OneShotResult one_shot_hinge(std::span<const LabeledExample> sample, double tau,
                                    const SolverOptions& opts = {}) {
    if (sample.empty()) throw std::invalid_argument("one_shot_hinge: empty sample");
    const Vec origin(sample.front().point.dim(), 0.0);
    OneShotResult out;
    out.solve = minimize_hinge_in_ball(sample, tau, origin, 1.0, opts);
    if (norm(out.solve.v) >= 1e-9) out.direction = UnitVector::normalized(out.solve.v);
    return out;
}

// Normalized Average over m fresh labeled examples. Stands in for a dedicated
// initialization procedure.
template <class Oracle>
UnitVector average_initializer(const Oracle& oracle, std::size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("average_initializer: need at least one example");
    const std::size_t d = oracle.dim();
    Vec sum(d, 0.0), x(d);
    for (std::size_t i = 0; i < m; ++i) {
        oracle.draw(x, rng);
        const int y = oracle.query(x, rng);
        for (std::size_t j = 0; j < d; ++j) sum[j] += y * x[j];
    }
    if (!(norm(sum) > 0.0)) throw std::runtime_error("average_initializer: zero average");
    return UnitVector::normalized(sum);
}

}  // namespace massart
