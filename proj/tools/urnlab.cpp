#include <CLI11.hpp>
#include <iostream>

#include "urnlab/errors.hpp"
#include "urnlab/experiments.hpp"

using namespace urnlab;

namespace {

void add_common(CLI::App* sub, ExperimentConfig& c, std::string& kernel_file) {
    auto* kf = sub->add_option("--kernel", kernel_file, "Kernel file");
    auto* gen = sub->add_option("--generator", c.generator, "Generator name followed by key=value parameters")
                    ->expected(1, -1);
    kf->excludes(gen);
    sub->add_option("--u0", c.u0, "Initial measure, \"c:w,c:w,...\"");
    sub->add_option("--steps", c.steps, "Number of steps (or n_max / tree size)");
    sub->add_option("--horizon", c.horizon, "Enumeration horizon (or certificate fit length)");
    sub->add_option("--replicas", c.replicas, "Replicas, samples or trees");
    sub->add_option("--seed", c.master_seed, "Master seed");
    sub->add_option("--out", c.output_dir, "Output directory");
    sub->add_option("--tol", c.tol, "Check tolerance");
    sub->add_option("--threads", c.threads, "Worker threads (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Urn, recursive tree and star walk experiments"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string kernel_file;
    const char* help[] = {
        "Simulate the urn and compare with the stationary law",
        "Compare exact sequence laws of the urn and the tree chain",
        "Covariance bound on fixed recursive trees",
        "Depth-sum series: closed form, growth and Monte Carlo",
        "Local-time variance against the depth-sum bound",
        "Star walk limits and urn coupling",
        "Fit an ergodicity certificate",
    };
    const auto& names = subcommand_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto* sub = app.add_subcommand(names[i], help[i]);
        add_common(sub, config, kernel_file);
        const auto kind = *parse_subcommand(names[i]);
        if (kind == Subcommand::SeriesCheck) {
            sub->add_option("--r", config.r, "Depth weight r in (0,1)");
            sub->add_option("--t", config.t, "Root weight t");
        }
        if (kind == Subcommand::VarianceCheck) sub->add_option("--color", config.color, "Color whose local time is tracked");
        if (kind == Subcommand::CovarianceCheck) sub->add_option("--trees", config.trees, "Number of fixed trees");
        if (kind == Subcommand::CovarianceCheck || kind == Subcommand::VarianceCheck ||
            kind == Subcommand::ErgodicityFit)
            sub->add_option("--probes", config.probes, "Probe colors")->delimiter(',');
        sub->callback([&config, kind] { config.subcommand = kind; });
    }

    CLI11_PARSE(app, argc, argv);
    if (!kernel_file.empty()) config.kernel_file = kernel_file;

    try {
        const auto result = run_experiment(config);
        for (const auto& c : result.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " threshold=" << c.threshold
                      << '\n';
        std::cout << "report: " << (config.output_dir / "report.json").string() << '\n';
        return result.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
