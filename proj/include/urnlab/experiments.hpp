#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/reports.hpp"

namespace urnlab {

enum class Subcommand {
    UrnRun,
    CouplingCheck,
    CovarianceCheck,  // "lemma31-check"
    SeriesCheck,      // "lemma32-check"
    VarianceCheck,
    StarwalkRun,
    ErgodicityFit,
};

std::string to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(std::string_view name);
const std::vector<std::string>& subcommand_names();

// Unset optionals take per-subcommand defaults (see README).
struct ExperimentConfig {
    Subcommand subcommand = Subcommand::UrnRun;
    std::optional<std::filesystem::path> kernel_file;
    std::vector<std::string> generator;  // name, then key=value tokens
    std::string u0 = "0:1";              // delta0 for starwalk-run
    std::optional<std::size_t> steps;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> replicas;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir = ".";
    std::optional<double> tol;

    double r = 0.5;      // lemma32-check
    double t = 1.0;      // lemma32-check
    Color color = 0;     // variance-check
    std::size_t trees = 10;  // lemma31-check
    std::vector<Color> probes;  // ergodicity-fit, lemma31-check, variance-check
    unsigned threads = 0;  // 0: hardware concurrency; never changes results
};

// Canonical JSON of every field that affects results (output_dir and threads excluded).
Json canonical_config(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);
Kernel load_kernel_source(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ExperimentResult {
    Json report;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> files;

    bool passed() const;
    int exit_code() const { return passed() ? 0 : 1; }
};

// Validates, runs the subcommand, writes report.json and data files under
// output_dir (created if missing). Outputs are a pure function of the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace urnlab
