#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "massart/geometry.hpp"
#include "massart/noise.hpp"
#include "massart/rng.hpp"

namespace massart {

struct SolverOptions {
    // Accelerated-gradient iterations per restart, shared across smoothing stages.
    std::size_t max_iters = 20'000;
    // Additive slack kappa: the solve is converged once best - lower_bound <= kappa.
    double suboptimality = 1e-6;
    // Additional random feasible starting points, used only while not converged.
    std::size_t restarts = 5;
    // Subgradient polishing iterations per restart and the Polyak step multiplier.
    std::size_t polish_iters = 2'000;
    double step_scale = 1.0;
    // First Huber smoothing width; divided by 10 per stage.
    double initial_smoothing = 0.1;
    std::uint64_t seed = 0;
};

struct SolveResult {
    Vec v;
    double achieved = 0.0;     // empirical hinge at v
    double lower_bound = 0.0;  // certified lower bound on the constrained minimum
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t restart = 0;   // index of the start that produced v
};

// Euclidean projection onto the closed ball B(center, radius).
inline Vec project_to_ball(std::span<const double> v, std::span<const double> center, double radius) {
    if (v.size() != center.size()) throw DimensionMismatch("project_to_ball: dimension mismatch");
    if (!(radius > 0.0)) throw std::invalid_argument("project_to_ball: radius must be positive");
    Vec out(v.begin(), v.end());
    const double dist = distance(v, center);
    if (dist > radius) {
        const double s = radius / dist;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = center[i] + (v[i] - center[i]) * s;
    }
    return out;
}

namespace detail {

// Empirical tau-hinge over a packed sample. Row i stores a_i = y_i x_i / tau,
// so the loss is mean_i max(0, 1 - a_i . v).
class HingeProblem {
public:
    HingeProblem(std::span<const LabeledExample> sample, double tau, std::span<const double> center,
                 double radius)
        : m_(sample.size()), d_(center.size()), center_(center.begin(), center.end()), radius_(radius) {
        rows_.resize(m_ * d_);
        for (std::size_t i = 0; i < m_; ++i) {
            const auto x = sample[i].point.coords();
            if (x.size() != d_) throw DimensionMismatch("minimize_hinge_in_ball: dimension mismatch");
            const double s = static_cast<double>(sample[i].label) / tau;
            for (std::size_t j = 0; j < d_; ++j) rows_[i * d_ + j] = s * x[j];
        }
        margins_.resize(m_);
        weights_.resize(m_);
    }

    std::size_t dim() const { return d_; }
    double radius() const { return radius_; }
    std::span<const double> center() const { return center_; }

    void project(Vec& v) const {
        const double dist = distance(v, center_);
        if (dist > radius_) {
            const double s = radius_ / dist;
            for (std::size_t j = 0; j < d_; ++j) v[j] = center_[j] + (v[j] - center_[j]) * s;
        }
    }

    double objective(std::span<const double> v) {
        compute_margins(v);
        double s = 0.0;
        for (double z : margins_) s += std::max(0.0, z);
        return s / static_cast<double>(m_);
    }

    // Huber-smoothed value and gradient with width mu. Also reports the exact
    // hinge at v. After the call, weights() holds clip(z_i / mu, 0, 1).
    struct Smoothed {
        double value;
        double exact;
    };

    Smoothed smoothed(std::span<const double> v, double mu, Vec& grad) {
        compute_margins(v);
        double value = 0.0, exact = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double z = margins_[i];
            double w = 0.0;
            if (z >= mu) {
                value += z - 0.5 * mu;
                w = 1.0;
            } else if (z > 0.0) {
                value += 0.5 * z * z / mu;
                w = z / mu;
            }
            if (z > 0.0) exact += z;
            weights_[i] = w;
        }
        weighted_row_sum(grad);
        for (auto& g : grad) g = -g;
        const double inv_m = 1.0 / static_cast<double>(m_);
        return {value * inv_m, exact * inv_m};
    }

    // Weak-duality bound: for any theta in [0,1]^m,
    //   min_{v in ball} f(v) >= mean(theta) - g . center - radius |g|,
    // with g = mean_i theta_i a_i.
    double dual_bound_from_weights() {
        Vec g(d_);
        weighted_row_sum(g);
        double mean_theta = 0.0;
        for (double w : weights_) mean_theta += w;
        mean_theta /= static_cast<double>(m_);
        return mean_theta - dot(g, center_) - radius_ * norm(g);
    }

    // Dual bound using the hard active set {z_i > 0} at v.
    double dual_bound_hard(std::span<const double> v) {
        compute_margins(v);
        for (std::size_t i = 0; i < m_; ++i) weights_[i] = margins_[i] > 0.0 ? 1.0 : 0.0;
        return dual_bound_from_weights();
    }

    // Sharpens the dual bound at v: weights are fixed to 1{z_i > 0} away from
    // the kinks and optimized over [0, 1] for |z_i| <= delta by projected
    // ascent with a backtracked step.
    double dual_bound_refined(std::span<const double> v, double delta, std::size_t iters = 300) {
        compute_margins(v);
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < m_; ++i) {
            const double z = margins_[i];
            if (std::fabs(z) <= delta) {
                free.push_back(i);
                weights_[i] = 0.5;
            } else {
                weights_[i] = z > 0.0 ? 1.0 : 0.0;
            }
        }
        double best = dual_bound_from_weights();
        if (free.empty()) return best;

        Vec g(d_), theta(free.size()), trial(free.size());
        for (std::size_t k = 0; k < free.size(); ++k) theta[k] = weights_[free[k]];
        double step = static_cast<double>(m_);
        double current = best;
        for (std::size_t it = 0; it < iters && step > 1e-12; ++it) {
            weighted_row_sum(g);
            const double gn = norm(g);
            for (std::size_t k = 0; k < free.size(); ++k) {
                const double* a = &rows_[free[k] * d_];
                double ac = 0.0, ag = 0.0;
                for (std::size_t j = 0; j < d_; ++j) {
                    ac += a[j] * center_[j];
                    ag += a[j] * g[j];
                }
                const double grad = (1.0 - ac - (gn > 0.0 ? radius_ * ag / gn : 0.0)) /
                                    static_cast<double>(m_);
                trial[k] = std::clamp(theta[k] + step * grad, 0.0, 1.0);
            }
            for (std::size_t k = 0; k < free.size(); ++k) weights_[free[k]] = trial[k];
            const double value = dual_bound_from_weights();
            if (value > current) {
                current = value;
                theta = trial;
                step *= 1.5;
            } else {
                for (std::size_t k = 0; k < free.size(); ++k) weights_[free[k]] = theta[k];
                step *= 0.5;
            }
        }
        return std::max(best, current);
    }

    // A subgradient of the exact hinge at v (0 at kinks). Returns f(v).
    double subgradient(std::span<const double> v, Vec& grad) {
        compute_margins(v);
        double exact = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double z = margins_[i];
            weights_[i] = z > 0.0 ? 1.0 : 0.0;
            if (z > 0.0) exact += z;
        }
        weighted_row_sum(grad);
        for (auto& g : grad) g = -g;
        return exact / static_cast<double>(m_);
    }

    // Largest eigenvalue of A^T A / m by power iteration.
    double gram_spectral_norm(std::size_t iters = 30) const {
        Vec u(d_, 1.0 / std::sqrt(static_cast<double>(d_))), next(d_);
        double lambda = 0.0;
        for (std::size_t it = 0; it < iters; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < m_; ++i) {
                const double* a = &rows_[i * d_];
                double p = 0.0;
                for (std::size_t j = 0; j < d_; ++j) p += a[j] * u[j];
                for (std::size_t j = 0; j < d_; ++j) next[j] += p * a[j];
            }
            for (auto& x : next) x /= static_cast<double>(m_);
            lambda = norm(next);
            if (!(lambda > 0.0)) return 0.0;
            for (std::size_t j = 0; j < d_; ++j) u[j] = next[j] / lambda;
        }
        return lambda;
    }

private:
    void compute_margins(std::span<const double> v) {
        for (std::size_t i = 0; i < m_; ++i) {
            const double* a = &rows_[i * d_];
            double p = 0.0;
            for (std::size_t j = 0; j < d_; ++j) p += a[j] * v[j];
            margins_[i] = 1.0 - p;
        }
    }

    void weighted_row_sum(Vec& out) const {
        out.assign(d_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double w = weights_[i];
            if (w == 0.0) continue;
            const double* a = &rows_[i * d_];
            for (std::size_t j = 0; j < d_; ++j) out[j] += w * a[j];
        }
        for (auto& x : out) x /= static_cast<double>(m_);
    }

    std::size_t m_, d_;
    Vec center_;
    double radius_;
    Vec rows_;
    Vec margins_;
    Vec weights_;
};

struct RunState {
    Vec best;
    double best_value = std::numeric_limits<double>::infinity();
    double lower_bound = 0.0;
    std::size_t iterations = 0;

    void offer(std::span<const double> v, double value) {
        if (value < best_value) {
            best_value = value;
            best.assign(v.begin(), v.end());
        }
    }
    void bound(double lb) { lower_bound = std::max(lower_bound, lb); }
    double gap() const { return best_value - lower_bound; }
};

// Tries progressively wider kink sets until the incumbent is certified.
inline void certify(HingeProblem& problem, RunState& state, double kappa) {
    for (double delta : {1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
        if (state.gap() <= kappa) return;
        state.bound(problem.dual_bound_refined(state.best, delta));
    }
}

// One start: FISTA with backtracking and gradient restarts on a sequence of
// Huber smoothings, then projected subgradient steps with Polyak step length
// (f(v) - lower_bound) / |g|^2.
inline void solve_from(HingeProblem& problem, Vec start, const SolverOptions& opts, RunState& state) {
    const std::size_t d = problem.dim();
    const double kappa = opts.suboptimality;
    problem.project(start);
    state.offer(start, problem.objective(start));
    state.bound(problem.dual_bound_hard(start));
    if (state.gap() <= kappa) return;

    const double gram = std::max(problem.gram_spectral_norm(), 1e-12);
    double mu = opts.initial_smoothing;
    const double mu_floor = std::max(0.25 * kappa, 1e-12);
    const std::size_t stages = [&] {
        std::size_t s = 1;
        for (double m = mu; m > mu_floor; m *= 0.1) ++s;
        return s;
    }();
    const std::size_t per_stage = std::max<std::size_t>(opts.max_iters / stages, 10);

    Vec x = start, y = start, x_new(d), grad(d), grad_new(d), step(d);
    for (std::size_t stage = 0; stage < stages && state.gap() > kappa; ++stage) {
        double lipschitz = gram / mu;
        double t = 1.0;
        y = x;
        double stage_ref = problem.smoothed(x, mu, grad).value;
        for (std::size_t it = 0; it < per_stage; ++it) {
            ++state.iterations;
            const double fy = problem.smoothed(y, mu, grad).value;
            double f_new = 0.0;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t j = 0; j < d; ++j) x_new[j] = y[j] - grad[j] / lipschitz;
                problem.project(x_new);
                double lin = 0.0, sq = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = x_new[j] - y[j];
                    lin += grad[j] * diff;
                    sq += diff * diff;
                }
                const auto s = problem.smoothed(x_new, mu, grad_new);
                f_new = s.value;
                if (f_new <= fy + lin + 0.5 * lipschitz * sq + 1e-15) {
                    state.offer(x_new, s.exact);
                    break;
                }
                lipschitz *= 2.0;
            }
            // weights now correspond to x_new
            if (it % 10 == 0) state.bound(problem.dual_bound_from_weights());

            double restart_test = 0.0;
            for (std::size_t j = 0; j < d; ++j) restart_test += (y[j] - x_new[j]) * (x_new[j] - x[j]);
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            if (restart_test > 0.0) {
                t = 1.0;
                y = x_new;
            } else {
                const double momentum = (t - 1.0) / t_next;
                for (std::size_t j = 0; j < d; ++j) y[j] = x_new[j] + momentum * (x_new[j] - x[j]);
                t = t_next;
            }
            std::swap(x, x_new);

            if (state.gap() <= kappa) return;
            if ((it + 1) % 50 == 0) {
                if (stage_ref - f_new < 1e-3 * mu) break;
                stage_ref = f_new;
            }
        }
        state.bound(problem.dual_bound_hard(state.best));
        certify(problem, state, kappa);
        mu = std::max(mu * 0.1, mu_floor);
    }

    // Polishing from the incumbent.
    Vec v = state.best, avg(d, 0.0);
    std::size_t averaged = 0;
    for (std::size_t it = 0; it < opts.polish_iters && state.gap() > kappa; ++it) {
        ++state.iterations;
        const double f = problem.subgradient(v, grad);
        state.offer(v, f);
        if (it % 25 == 0) state.bound(problem.dual_bound_from_weights());
        const double g2 = dot(grad, grad);
        if (!(g2 > 0.0)) break;
        const double len = opts.step_scale * std::max(f - state.lower_bound, 0.0) / g2;
        if (!(len > 0.0)) break;
        for (std::size_t j = 0; j < d; ++j) v[j] -= len * grad[j];
        problem.project(v);
        for (std::size_t j = 0; j < d; ++j) avg[j] += v[j];
        ++averaged;
    }
    if (averaged > 0) {
        for (auto& a : avg) a /= static_cast<double>(averaged);
        problem.project(avg);
        state.offer(avg, problem.objective(avg));
    }
    certify(problem, state, kappa);
}

}  // namespace detail

// Minimizes the empirical tau-hinge loss over {v : |v - center| <= radius}.
// The result carries a certified lower bound on the constrained minimum; the
// solve counts as converged when achieved - lower_bound <= opts.suboptimality.
inline SolveResult minimize_hinge_in_ball(std::span<const LabeledExample> sample, double tau,
                                          std::span<const double> center, double radius,
                                          const SolverOptions& opts = {}) {
    if (sample.empty()) throw std::invalid_argument("minimize_hinge_in_ball: empty sample");
    if (!(tau > 0.0)) throw std::invalid_argument("minimize_hinge_in_ball: tau must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("minimize_hinge_in_ball: radius must be positive");
    if (!(opts.suboptimality > 0.0)) {
        throw std::invalid_argument("minimize_hinge_in_ball: suboptimality must be positive");
    }
    detail::HingeProblem problem(sample, tau, center, radius);
    const std::size_t d = center.size();

    SolveResult result;
    double global_lb = 0.0;
    std::size_t total_iters = 0;
    bool have = false;
    for (std::size_t r = 0; r <= opts.restarts; ++r) {
        Vec start(center.begin(), center.end());
        if (r > 0) {
            Rng rng = make_rng(opts.seed, r);
            Vec u(d);
            sample_unit_ball_into(u, rng);
            for (std::size_t j = 0; j < d; ++j) start[j] += radius * u[j];
        }
        detail::RunState state;
        state.lower_bound = global_lb;
        detail::solve_from(problem, std::move(start), opts, state);
        total_iters += state.iterations;
        global_lb = std::max(global_lb, state.lower_bound);
        if (!have || state.best_value < result.achieved) {
            result.v = state.best;
            result.achieved = state.best_value;
            result.restart = r;
            have = true;
        }
        if (result.achieved - global_lb <= opts.suboptimality) break;
    }
    result.lower_bound = std::min(global_lb, result.achieved);
    result.converged = result.achieved - global_lb <= opts.suboptimality;
    result.iterations = total_iters;
    return result;
}

}  // namespace massart
