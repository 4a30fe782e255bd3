#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "massart/experiment.hpp"

namespace ex = massart::experiment;

namespace {

struct Overrides {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> d;
    std::optional<double> epsilon, beta, alpha, tau, sigmas;
    std::optional<std::string> schedule;
    std::optional<std::size_t> samples;
};

void add_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "experiment seed");
    cmd->add_option("--d", o.d, "dimension");
    cmd->add_option("--epsilon", o.epsilon, "target excess error");
    cmd->add_option("--beta", o.beta, "Massart parameter; flips happen with probability (1-beta)/2");
    cmd->add_option("--alpha", o.alpha, "wedge angle (0 lets choose_alpha decide)");
    cmd->add_option("--tau", o.tau, "hinge threshold for baselines and lowerbounds");
    cmd->add_option("--schedule", o.schedule, "schedule kind")->check(CLI::IsMember({"paper", "practical"}));
    cmd->add_option("--samples", o.samples, "sample size or Monte-Carlo size, per command");
    cmd->add_option("--sigmas", o.sigmas, "Monte-Carlo tolerance in standard errors for verify");
}

ex::Config resolve(const Overrides& o) {
    ex::Config c = o.config.empty() ? ex::Config{} : ex::load_config(o.config);
    if (o.seed) c.experiment.seed = *o.seed;
    if (o.d) c.geometry.d = *o.d;
    if (o.epsilon) c.schedule.epsilon = *o.epsilon;
    if (o.beta) c.noise.beta = *o.beta;
    if (o.alpha) c.noise.alpha = *o.alpha;
    if (o.tau) c.experiment.tau = *o.tau;
    if (o.schedule) c.schedule.kind = *o.schedule;
    if (o.samples) c.experiment.samples = *o.samples;
    if (o.sigmas) c.experiment.sigmas = *o.sigmas;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Margin-based active learning under Massart noise: experiments and checks"};
    app.require_subcommand(1);
    Overrides o;
    auto* learn = app.add_subcommand("learn", "run the margin-based learner");
    auto* baselines = app.add_subcommand("baselines", "Average and one-shot hinge on the configured noise");
    auto* lower = app.add_subcommand("lowerbounds", "hinge gap and Average drift tables");
    auto* verify = app.add_subcommand("verify", "run the lemma checks");
    for (auto* cmd : {learn, baselines, lower, verify}) add_flags(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ex::kExitInvalid;
    }

    try {
        const auto config = resolve(o);
        const std::filesystem::path out = o.out;
        if (learn->parsed()) return ex::cmd_learn(config, out, std::cout);
        if (baselines->parsed()) return ex::cmd_baselines(config, out, std::cout);
        if (lower->parsed()) return ex::cmd_lowerbounds(config, out, std::cout);
        return ex::cmd_verify(config, out, std::cout);
    } catch (const ex::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return ex::kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ex::kExitInvalid;
    }
}
