// Margin-based learner against the passive baselines on the same noise.
// Usage: active_vs_passive [seed]

#include <cstdio>
#include <cstdlib>

#include "massart/learners.hpp"
#include "massart/lower_bounds.hpp"

using namespace massart;

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const std::size_t d = 5;
    const double eta = 0.1;
    const auto inst = make_rcn(UnitVector::axis(d, 0), eta);
    const InstanceOracle oracle(inst);

    const auto schedule = practical_schedule(d, 0.005, 0.1);
    Rng rng = make_rng(seed);
    const auto w0 = average_initializer(oracle, 2000, rng);
    SolverOptions solver;
    solver.suboptimality = 1e-4;
    solver.seed = seed;
    const auto report = margin_based_learn(oracle, schedule, w0, rng, solver);

    std::printf("active, d=%zu, RCN eta=%.2f, start angle %.4f\n", d, eta, angle(w0, inst.target()));
    std::printf("%3s %10s %8s %10s %8s\n", "k", "angle", "labels", "unlabeled", "band");
    for (const auto& r : report.rounds) {
        std::printf("%3zu %10.5f %8zu %10zu %8.4f\n", r.k, r.angle_to_target, r.labels + 2000, r.unlabeled,
                    r.band);
    }

    // Passive Average with the same label budget, on the same noise.
    const std::size_t budget = report.total_labels + 2000;
    const auto sample = draw_labeled(inst, budget, rng);
    const auto avg = UnitVector::normalized(average_learner(sample));
    std::printf("passive Average, %zu labels: angle %.5f\n", budget, angle(avg, inst.target()));

    // Under the quadrant adversary Average is biased no matter how many labels it sees.
    const double beta = 0.5;
    const auto quad = make_quadrant_adversary(beta);
    const auto big = draw_labeled(quad, 1'000'000, rng);
    const auto avg_q = UnitVector::normalized(average_learner(big));
    std::printf("quadrant beta=%.1f: Average angle %.4f, predicted %.4f\n", beta, angle(avg_q, quad.target()),
                average_drift_angle(beta));
    return 0;
}
