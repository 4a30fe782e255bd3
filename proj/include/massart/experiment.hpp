#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "massart/geometry.hpp"
#include "massart/hinge_solver.hpp"
#include "massart/learners.hpp"
#include "massart/loss.hpp"
#include "massart/lower_bounds.hpp"
#include "massart/noise.hpp"
#include "massart/rng.hpp"
#include "massart/verifier.hpp"

namespace massart::experiment {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFlagged = 2;

struct GeometrySection {
    std::size_t d = 5;
};

// kind: none | rcn | quadrant | wedge. Flip probabilities are (1 - beta)/2;
// wedge alpha = 0 lets choose_alpha pick the angle from experiment.tau.
struct NoiseSection {
    std::string kind = "none";
    double beta = 1.0;
    double alpha = 0.0;
};

struct ScheduleSection {
    std::string kind = "practical";  // practical | paper
    double epsilon = 0.05;
    double delta = 0.1;
    double lambda = 0.5;
    double c_band = 1.5;
    double tau_ratio = 0.5;
    double m_scale = 5.0;
    double ao = 0.25;
    std::size_t fixed_m = 0;     // 0: use the m_k formula
    std::size_t max_rounds = 0;  // 0: no cap
    std::size_t init_labels = 2000;
};

struct SolverSection {
    std::size_t max_iters = 20'000;
    double suboptimality = 0.0;  // 0: 1e-6 for the paper schedule, 1e-4 for the practical one
    std::size_t restarts = 5;
    std::size_t polish_iters = 2'000;
};

struct ExperimentSection {
    std::uint64_t seed = 1;
    std::size_t seeds = 5;
    std::size_t samples = 0;  // 0: per-command default
    double tau = 1.0;
    double sigmas = 3.0;
    std::size_t verify_d = 25;
    std::vector<std::string> checks;  // empty: every check
    std::vector<double> eta_grid{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    std::vector<double> beta_grid{0.25, 0.5, 0.9};
};

struct Config {
    GeometrySection geometry;
    NoiseSection noise;
    ScheduleSection schedule;
    SolverSection solver;
    ExperimentSection experiment;
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"theorem_inequality", "lemma_Lwstar",     "lemma_clean_dirty",
                                                "lemma_error_in_band", "band_lemmas",     "generalization"};
    return names;
}

namespace detail {

template <class T>
void read_field(const json& section, const char* section_name, const char* key, T& out) {
    if (!section.contains(key)) return;
    try {
        out = section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(section_name) + "." + key + ": " + e.what());
    }
}

inline void reject_unknown(const json& section, const char* name, std::initializer_list<const char*> keys) {
    if (!section.is_object()) throw ConfigError(std::string(name) + ": expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : section.items()) {
        if (!allowed.count(k)) throw ConfigError(std::string("unknown field ") + name + "." + k);
    }
}

inline const json& section_or_empty(const json& doc, const char* name) {
    static const json empty = json::object();
    return doc.contains(name) ? doc.at(name) : empty;
}

}  // namespace detail

inline Config parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    detail::reject_unknown(doc, "config", {"geometry", "noise", "schedule", "solver", "experiment"});
    Config c;
    const auto& g = detail::section_or_empty(doc, "geometry");
    detail::reject_unknown(g, "geometry", {"d"});
    detail::read_field(g, "geometry", "d", c.geometry.d);

    const auto& n = detail::section_or_empty(doc, "noise");
    detail::reject_unknown(n, "noise", {"kind", "beta", "alpha"});
    detail::read_field(n, "noise", "kind", c.noise.kind);
    detail::read_field(n, "noise", "beta", c.noise.beta);
    detail::read_field(n, "noise", "alpha", c.noise.alpha);

    const auto& s = detail::section_or_empty(doc, "schedule");
    detail::reject_unknown(s, "schedule", {"kind", "epsilon", "delta", "lambda", "c_band", "tau_ratio", "m_scale",
                                           "ao", "fixed_m", "max_rounds", "init_labels"});
    detail::read_field(s, "schedule", "kind", c.schedule.kind);
    detail::read_field(s, "schedule", "epsilon", c.schedule.epsilon);
    detail::read_field(s, "schedule", "delta", c.schedule.delta);
    detail::read_field(s, "schedule", "lambda", c.schedule.lambda);
    detail::read_field(s, "schedule", "c_band", c.schedule.c_band);
    detail::read_field(s, "schedule", "tau_ratio", c.schedule.tau_ratio);
    detail::read_field(s, "schedule", "m_scale", c.schedule.m_scale);
    detail::read_field(s, "schedule", "ao", c.schedule.ao);
    detail::read_field(s, "schedule", "fixed_m", c.schedule.fixed_m);
    detail::read_field(s, "schedule", "max_rounds", c.schedule.max_rounds);
    detail::read_field(s, "schedule", "init_labels", c.schedule.init_labels);

    const auto& v = detail::section_or_empty(doc, "solver");
    detail::reject_unknown(v, "solver", {"max_iters", "suboptimality", "restarts", "polish_iters"});
    detail::read_field(v, "solver", "max_iters", c.solver.max_iters);
    detail::read_field(v, "solver", "suboptimality", c.solver.suboptimality);
    detail::read_field(v, "solver", "restarts", c.solver.restarts);
    detail::read_field(v, "solver", "polish_iters", c.solver.polish_iters);

    const auto& e = detail::section_or_empty(doc, "experiment");
    detail::reject_unknown(e, "experiment", {"seed", "seeds", "samples", "tau", "sigmas", "verify_d", "checks",
                                             "eta_grid", "beta_grid"});
    detail::read_field(e, "experiment", "seed", c.experiment.seed);
    detail::read_field(e, "experiment", "seeds", c.experiment.seeds);
    detail::read_field(e, "experiment", "samples", c.experiment.samples);
    detail::read_field(e, "experiment", "tau", c.experiment.tau);
    detail::read_field(e, "experiment", "sigmas", c.experiment.sigmas);
    detail::read_field(e, "experiment", "verify_d", c.experiment.verify_d);
    detail::read_field(e, "experiment", "checks", c.experiment.checks);
    detail::read_field(e, "experiment", "eta_grid", c.experiment.eta_grid);
    detail::read_field(e, "experiment", "beta_grid", c.experiment.beta_grid);
    return c;
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return parse_config(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
}

inline json to_json(const Config& c) {
    return json{
        {"geometry", {{"d", c.geometry.d}}},
        {"noise", {{"kind", c.noise.kind}, {"beta", c.noise.beta}, {"alpha", c.noise.alpha}}},
        {"schedule",
         {{"kind", c.schedule.kind},
          {"epsilon", c.schedule.epsilon},
          {"delta", c.schedule.delta},
          {"lambda", c.schedule.lambda},
          {"c_band", c.schedule.c_band},
          {"tau_ratio", c.schedule.tau_ratio},
          {"m_scale", c.schedule.m_scale},
          {"ao", c.schedule.ao},
          {"fixed_m", c.schedule.fixed_m},
          {"max_rounds", c.schedule.max_rounds},
          {"init_labels", c.schedule.init_labels}}},
        {"solver",
         {{"max_iters", c.solver.max_iters},
          {"suboptimality", c.solver.suboptimality},
          {"restarts", c.solver.restarts},
          {"polish_iters", c.solver.polish_iters}}},
        {"experiment",
         {{"seed", c.experiment.seed},
          {"seeds", c.experiment.seeds},
          {"samples", c.experiment.samples},
          {"tau", c.experiment.tau},
          {"sigmas", c.experiment.sigmas},
          {"verify_d", c.experiment.verify_d},
          {"checks", c.experiment.checks},
          {"eta_grid", c.experiment.eta_grid},
          {"beta_grid", c.experiment.beta_grid}}},
    };
}

// FNV-1a (64 bit) of the canonical JSON dump, as 16 hex digits.
inline std::string config_hash(const Config& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_json(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void validate(const Config& c) {
    try {
        check_dimension(c.geometry.d);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("geometry.d: ") + e.what());
    }
    const auto& n = c.noise;
    if (n.kind != "none" && n.kind != "rcn" && n.kind != "quadrant" && n.kind != "wedge") {
        throw ConfigError("noise.kind must be one of none, rcn, quadrant, wedge");
    }
    if (!(n.beta > 0.0 && n.beta <= 1.0)) throw ConfigError("noise.beta must lie in (0, 1]");
    if (n.kind == "wedge") {
        if (c.geometry.d != 2) throw ConfigError("noise.kind = wedge needs geometry.d = 2");
        if (!(n.alpha == 0.0 || (n.alpha > 0.0 && n.alpha < kPi / 3.0))) {
            throw ConfigError("noise.alpha must be 0 or lie in (0, pi/3)");
        }
    }
    const auto& s = c.schedule;
    if (s.kind != "practical" && s.kind != "paper") throw ConfigError("schedule.kind must be practical or paper");
    if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) throw ConfigError("schedule.epsilon must lie in (0, 1)");
    if (!(s.delta > 0.0 && s.delta < 1.0)) throw ConfigError("schedule.delta must lie in (0, 1)");
    if (!(s.lambda > 0.0 && s.lambda < 1.0)) throw ConfigError("schedule.lambda must lie in (0, 1)");
    if (!(s.c_band > 0.0 && s.tau_ratio > 0.0 && s.m_scale > 0.0 && s.ao > 0.0)) {
        throw ConfigError("schedule constants must be positive");
    }
    if (s.kind == "paper" && c.geometry.d <= 20) throw ConfigError("schedule.kind = paper needs geometry.d > 20");
    if (s.init_labels == 0) throw ConfigError("schedule.init_labels must be positive");
    if (!(c.solver.suboptimality >= 0.0)) throw ConfigError("solver.suboptimality must be non-negative");
    if (c.solver.max_iters == 0) throw ConfigError("solver.max_iters must be positive");
    const auto& e = c.experiment;
    if (e.seeds == 0) throw ConfigError("experiment.seeds must be positive");
    if (!(e.tau > 0.0)) throw ConfigError("experiment.tau must be positive");
    if (!(e.sigmas >= 0.0)) throw ConfigError("experiment.sigmas must be non-negative");
    if (e.verify_d < 2) throw ConfigError("experiment.verify_d must be at least 2");
    for (const auto& name : e.checks) {
        bool found = false;
        for (const auto& k : known_checks()) found = found || k == name;
        if (!found) throw ConfigError("unknown check " + name);
    }
    for (double eta : e.eta_grid) {
        if (!(eta >= 0.0 && eta < 0.5)) throw ConfigError("experiment.eta_grid entries must lie in [0, 1/2)");
    }
    for (double beta : e.beta_grid) {
        if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("experiment.beta_grid entries must lie in (0, 1]");
    }
}

inline SolverOptions solver_options(const Config& c, std::uint64_t seed) {
    SolverOptions o;
    o.max_iters = c.solver.max_iters;
    o.suboptimality = c.solver.suboptimality > 0.0 ? c.solver.suboptimality
                                                   : (c.schedule.kind == "paper" ? 1e-6 : 1e-4);
    o.restarts = c.solver.restarts;
    o.polish_iters = c.solver.polish_iters;
    o.seed = seed;
    return o;
}

// Wedge angle in use: the configured one, else choose_alpha(tau, eta).
inline double wedge_alpha(const Config& c) {
    if (c.noise.alpha > 0.0) return c.noise.alpha;
    const double eta = (1.0 - c.noise.beta) / 2.0;
    if (!(eta > 0.0)) throw ConfigError("noise.kind = wedge needs beta < 1 or an explicit alpha");
    return choose_alpha(c.experiment.tau, eta);
}

// Target e1 throughout.
inline MassartInstance make_instance(const Config& c) {
    const std::size_t d = c.geometry.d;
    const double eta = (1.0 - c.noise.beta) / 2.0;
    if (c.noise.kind == "none") {
        if (c.noise.beta != 1.0) throw ConfigError("noise.kind = none needs beta = 1");
        return make_noiseless(UnitVector::axis(d, 0));
    }
    if (c.noise.kind == "rcn") return make_rcn(UnitVector::axis(d, 0), eta);
    if (c.noise.kind == "quadrant") return make_quadrant_adversary(c.noise.beta, d);
    return make_wedge_adversary(wedge_alpha(c), eta);
}

inline Schedule make_schedule(const Config& c) {
    const auto& s = c.schedule;
    Schedule out = s.kind == "paper"
                       ? paper_schedule(c.geometry.d, s.epsilon, s.delta, s.m_scale)
                       : practical_schedule(c.geometry.d, s.epsilon, s.delta, s.lambda, s.c_band, s.tau_ratio,
                                            s.m_scale, s.ao);
    if (s.fixed_m > 0) out.fixed_m = s.fixed_m;
    if (s.max_rounds > 0) out.rounds = std::min(out.rounds, s.max_rounds);
    return out;
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Writes through a sibling temporary and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline json stamp(const Config& c) {
    return json{{"config_hash", config_hash(c)}, {"seed", c.experiment.seed}, {"config", to_json(c)}};
}

inline std::string csv_stamp(const Config& c) {
    return "# config_hash=" + config_hash(c) + " seed=" + std::to_string(c.experiment.seed) + "\n";
}

// learn: runreport.json and rounds.csv.
inline int cmd_learn(const Config& c, const std::filesystem::path& out, std::ostream& log) {
    validate(c);
    const auto instance = make_instance(c);
    const InstanceOracle oracle(instance);
    const auto schedule = make_schedule(c);
    const std::uint64_t seed = c.experiment.seed;

    Rng init_rng = make_rng(seed, 1);
    const auto w0 = average_initializer(oracle, c.schedule.init_labels, init_rng);
    const double start_angle = angle(w0, instance.target());
    if (start_angle > schedule.alpha(1)) {
        log << "warning: initial angle " << start_angle << " exceeds alpha_1 = " << schedule.alpha(1) << "\n";
    }
    Rng rng = make_rng(seed, 2);
    const auto report = margin_based_learn(oracle, schedule, w0, rng, solver_options(c, derive_seed(seed, 3)));
    Rng eval_rng = make_rng(seed, 4);
    const auto excess = excess_error_mc(report.final_w, instance, 200'000, eval_rng);
    const double final_angle = angle(report.final_w, instance.target());

    std::string csv = csv_stamp(c) + "k,angle_rad,excess_err,labels,unlabeled,hinge,converged\n";
    json rounds = json::array();
    for (const auto& r : report.rounds) {
        csv += std::to_string(r.k) + "," + format_number(r.angle_to_target) + "," +
               format_number(r.angle_to_target / kPi) + "," + std::to_string(r.labels) + "," +
               std::to_string(r.unlabeled) + "," + format_number(r.hinge) + "," + (r.converged ? "1" : "0") + "\n";
        rounds.push_back({{"k", r.k},
                          {"angle_rad", r.angle_to_target},
                          {"labels", r.labels},
                          {"unlabeled", r.unlabeled},
                          {"hinge", r.hinge},
                          {"lower_bound", r.lower_bound},
                          {"converged", r.converged},
                          {"flagged", r.flagged},
                          {"alpha", r.alpha},
                          {"band", r.band},
                          {"tau", r.tau},
                          {"step", r.step}});
    }
    json doc = stamp(c);
    doc["command"] = "learn";
    doc["initial_angle"] = start_angle;
    doc["init_labels"] = c.schedule.init_labels;
    doc["rounds_planned"] = schedule.rounds;
    doc["final_w"] = report.final_w.vec();
    doc["final_angle"] = final_angle;
    doc["final_error_clean"] = final_angle / kPi;
    doc["final_excess_mc"] = {{"mean", excess.mean}, {"std_err", excess.std_err}};
    doc["total_labels"] = report.total_labels;
    doc["total_unlabeled"] = report.total_unlabeled;
    doc["flagged_rounds"] = report.flagged_rounds;
    doc["rounds"] = rounds;
    write_atomic(out / "runreport.json", doc.dump(2) + "\n");
    write_atomic(out / "rounds.csv", csv);
    log << "learn: " << report.rounds.size() << " rounds, angle " << final_angle << ", labels "
        << report.total_labels << ", flagged " << report.flagged_rounds << "\n";
    return report.flagged_rounds > 0 ? kExitFlagged : kExitOk;
}

// baselines: Average and one-shot hinge per seed on the configured instance.
inline int cmd_baselines(const Config& c, const std::filesystem::path& out, std::ostream& log) {
    validate(c);
    const auto instance = make_instance(c);
    const std::size_t m = c.experiment.samples > 0 ? c.experiment.samples : 10'000;
    std::string csv = csv_stamp(c) + "seed,method,angle_rad,excess_err,excess_se\n";
    RunningStats avg_angle, hinge_angle;
    std::size_t degenerate = 0;
    for (std::size_t s = 0; s < c.experiment.seeds; ++s) {
        Rng rng = make_rng(c.experiment.seed, 100 + s);
        const auto sample = draw_labeled(instance, m, rng);
        auto emit = [&](const char* method, const UnitVector& w, RunningStats& acc) {
            Rng eval = make_rng(c.experiment.seed, 10'000 + s);
            const auto ex = excess_error_mc(w, instance, 100'000, eval);
            const double a = angle(w, instance.target());
            acc.add(a);
            csv += std::to_string(s) + "," + method + "," + format_number(a) + "," + format_number(ex.mean) + "," +
                   format_number(ex.std_err) + "\n";
        };
        emit("average", UnitVector::normalized(average_learner(sample)), avg_angle);
        const auto shot = one_shot_hinge(sample, c.experiment.tau, solver_options(c, derive_seed(c.experiment.seed, s)));
        if (shot.direction) {
            emit("one_shot_hinge", *shot.direction, hinge_angle);
        } else {
            ++degenerate;
        }
    }
    json doc = stamp(c);
    doc["command"] = "baselines";
    doc["samples"] = m;
    doc["mean_angle"] = {{"average", avg_angle.mean()}, {"one_shot_hinge", hinge_angle.mean()}};
    doc["one_shot_degenerate"] = degenerate;
    if (c.noise.kind == "quadrant") doc["average_drift_angle"] = average_drift_angle(c.noise.beta);
    if (c.noise.kind == "wedge") doc["wedge_alpha"] = wedge_alpha(c);
    write_atomic(out / "baselines.csv", csv);
    write_atomic(out / "baselines.json", doc.dump(2) + "\n");
    log << "baselines: average " << avg_angle.mean() << ", one-shot hinge " << hinge_angle.mean() << "\n";
    return kExitOk;
}

// lowerbounds: wedge hinge gap (closed form against Monte Carlo) over the eta
// grid, and the Average drift over the beta grid.
inline int cmd_lowerbounds(const Config& c, const std::filesystem::path& out, std::ostream& log) {
    validate(c);
    const double alpha = c.noise.alpha > 0.0 ? c.noise.alpha : kPi / 6.0;
    const double tau = c.experiment.tau;
    const std::size_t n = c.experiment.samples > 0 ? c.experiment.samples : 1'000'000;
    std::string gap_csv = csv_stamp(c) + "alpha,eta,tau,gap_closed,gap_mc,gap_se,threshold,eta1,eta2,certified_negative\n";
    for (std::size_t i = 0; i < c.experiment.eta_grid.size(); ++i) {
        const double eta = c.experiment.eta_grid[i];
        const auto closed = hinge_gap(alpha, eta, tau);
        Rng rng = make_rng(c.experiment.seed, 200 + i);
        const auto mc = mc_hinge_by_region(alpha, eta, tau, n, rng);
        gap_csv += format_number(alpha) + "," + format_number(eta) + "," + format_number(tau) + "," +
                   format_number(closed.gap) + "," + format_number(mc.gap.mean) + "," + format_number(mc.gap.std_err) +
                   "," + format_number(closed.threshold) + "," + format_number(closed.eta1) + "," +
                   format_number(closed.eta2) + "," + (closed.certified_negative ? "1" : "0") + "\n";
    }
    std::string avg_csv = csv_stamp(c) + "beta,drift_angle,excess_of_drift,closed_bound,valid_bound\n";
    for (double beta : c.experiment.beta_grid) {
        const auto b = average_excess_lower(beta);
        avg_csv += format_number(beta) + "," + format_number(average_drift_angle(beta)) + "," +
                   format_number(b.angle_bound) + "," + format_number(b.closed_bound) + "," +
                   format_number(b.valid_bound) + "\n";
    }
    json doc = stamp(c);
    doc["command"] = "lowerbounds";
    doc["alpha"] = alpha;
    doc["eta1"] = eta1(alpha);
    doc["eta1_pi_over_3"] = eta1(kPi / 3.0);
    if (c.noise.beta < 1.0) {
        const double eta0 = (1.0 - c.noise.beta) / 2.0;
        const double a0 = choose_alpha(tau, eta0);
        doc["choose_alpha"] = {{"tau0", tau}, {"eta0", eta0}, {"alpha0", a0}, {"eta1", eta1(a0)}};
        if (tau < 1.0) doc["choose_alpha"]["eta2"] = eta2(a0, tau);
    }
    write_atomic(out / "hinge_gap.csv", gap_csv);
    write_atomic(out / "average_bounds.csv", avg_csv);
    write_atomic(out / "lowerbounds.json", doc.dump(2) + "\n");
    log << "lowerbounds: " << c.experiment.eta_grid.size() << " gap rows, " << c.experiment.beta_grid.size()
        << " Average rows\n";
    return kExitOk;
}

inline json to_json(const NamedValues& values) {
    json j = json::object();
    for (const auto& [k, v] : values) j[k] = v;
    return j;
}

inline json to_json(const CheckResult& r) {
    return json{{"check", r.check},   {"params", to_json(r.params)}, {"statistic", r.statistic},
                {"bound", r.bound},   {"sigma", r.sigma},            {"pass", r.pass},
                {"margin", r.margin}, {"report_only", r.report_only}, {"details", to_json(r.details)}};
}

// Runs one named check with its own stream.
inline std::vector<CheckResult> run_check(const std::string& name, const Config& c, std::size_t n, Rng& rng) {
    const double z = c.experiment.sigmas;
    const std::size_t d = c.experiment.verify_d;
    const double ratio = paper_tau_ratio();
    if (name == "theorem_inequality") return {check_theorem_inequality()};
    if (name == "lemma_Lwstar") return {check_lemma_Lwstar(d, kPaperBand, ratio, n, rng, kFirstAngle, z)};
    if (name == "lemma_clean_dirty") {
        return {check_lemma_clean_dirty(d, 0.99, kPaperBand, ratio, BandAdversary::Uniform, n, rng, kFirstAngle, 100, z),
                check_lemma_clean_dirty(d, 0.99, kPaperBand, ratio, BandAdversary::Targeted, n, rng, kFirstAngle, 100, z)};
    }
    if (name == "lemma_error_in_band") {
        const auto solver = solver_options(c, derive_seed(c.experiment.seed, 5));
        return {check_lemma_error_in_band(d, 1.0, RoundParams{}, n, rng, solver, z),
                check_lemma_error_in_band(d, 1.0 - 3.6e-6, RoundParams{}, n, rng, solver, z)};
    }
    if (name == "band_lemmas") {
        BandLemmaGrid grid;
        grid.n = n;
        return check_band_lemmas(grid, rng, z);
    }
    if (name == "generalization") {
        GeneralizationParams p;
        p.m = 100'000;
        return {check_generalization(p, rng)};
    }
    throw ConfigError("unknown check " + name);
}

// verify: verify.json; exit 2 when a check inside its regime fails.
inline int cmd_verify(const Config& c, const std::filesystem::path& out, std::ostream& log) {
    validate(c);
    const std::size_t n = c.experiment.samples > 0 ? c.experiment.samples : 1'000'000;
    const auto& names = c.experiment.checks.empty() ? known_checks() : c.experiment.checks;
    json checks = json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
        Rng rng = make_rng(c.experiment.seed, 300 + i);
        for (const auto& r : run_check(names[i], c, n, rng)) {
            checks.push_back(to_json(r));
            if (!r.report_only) all_pass = all_pass && r.pass;
            log << (r.pass ? "pass " : "FAIL ") << r.check << " statistic " << r.statistic << " bound " << r.bound
                << (r.report_only ? " (report only)" : "") << "\n";
        }
    }
    json doc = stamp(c);
    doc["command"] = "verify";
    doc["samples"] = n;
    doc["all_pass"] = all_pass;
    doc["checks"] = checks;
    write_atomic(out / "verify.json", doc.dump(2) + "\n");
    return all_pass ? kExitOk : kExitFlagged;
}

}  // namespace massart::experiment
