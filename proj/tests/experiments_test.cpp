#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/experiments.hpp"
#include "urnlab/replicas.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/urn.hpp"

using namespace urnlab;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir = fs::path(__FILE__).parent_path() / "data";

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("urnlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string field_of(const ExperimentConfig& c) {
    try {
        run_experiment(c);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

ExperimentConfig urn_config(const fs::path& out) {
    ExperimentConfig c;
    c.subcommand = Subcommand::UrnRun;
    c.kernel_file = data_dir / "two_state.kernel";
    c.steps = 20000;
    c.replicas = 4;
    c.master_seed = 99;
    c.output_dir = out;
    return c;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("stream seeds are a fixed function of master seed and index") {
    // Reference values from an independent SplitMix64 implementation.
    CHECK(splitmix64(0) == 16294208416658607535ULL);
    CHECK(derive_stream_seed(0, 0) == 15204172177749531820ULL);
    CHECK(derive_stream_seed(42, 7) == 18137862473986332194ULL);
    CHECK(Rng::stream(42, 7).seed() == derive_stream_seed(42, 7));

    // The engine is the standard 64-bit Mersenne twister.
    std::mt19937_64 reference;
    for (int i = 1; i < 10000; ++i) reference();
    CHECK(reference() == 9981545732273789042ULL);
    Rng rng(5489);
    std::mt19937_64 engine(5489);
    CHECK(rng.uniform() == static_cast<double>(engine() >> 11) * 0x1.0p-53);
}

TEST_CASE("replica results do not depend on the thread count") {
    auto f = [](std::size_t i, Rng& rng) { return rng.uniform() + static_cast<double>(i); };
    auto one = run_replicas<double>(50, 3, f, 1);
    auto four = run_replicas<double>(50, 3, f, 4);
    CHECK(one == four);
    CHECK(one[7] == Rng::stream(3, 7).uniform() + 7);
}

TEST_CASE("subcommand names") {
    for (const auto& name : subcommand_names()) CHECK(to_string(*parse_subcommand(name)) == name);
    CHECK(parse_subcommand("lemma31-check") == Subcommand::CovarianceCheck);
    CHECK_FALSE(parse_subcommand("nope").has_value());
}

TEST_CASE("coupling check on the flip kernel") {
    ExperimentConfig c;
    c.subcommand = Subcommand::CouplingCheck;
    c.kernel_file = data_dir / "flip.kernel";
    c.horizon = 3;
    c.output_dir = scratch("coupling");
    auto result = run_experiment(c);
    CHECK(result.exit_code() == 0);
    CHECK(result.report["results"]["tv_distance"] == 0.0);
    CHECK(result.report["results"]["mode"] == "rational");
    CHECK(result.report["pass"] == true);
    CHECK(fs::exists(c.output_dir / "report.json"));
    CHECK(slurp(c.output_dir / "coupling_laws.csv").find("0 1 0 1,") != std::string::npos);
}

TEST_CASE("urn run reports the distance to the stationary law") {
    auto c = urn_config(scratch("urn"));
    c.steps = 100000;
    c.replicas = 1;
    auto result = run_experiment(c);
    Rng rng = Rng::stream(99, 0);
    auto trace = urn_run(urn_init(testing::m("0:1"), testing::two_state()), 100000, rng);
    const double l1 = l1_distance(normalized_config(trace.final_state), testing::m("0:0.6666666666666666,1:0.3333333333333333"));
    CHECK(result.report["results"]["l1_distance"].get<double>() == doctest::Approx(l1).epsilon(1e-9));
    CHECK(result.report["results"]["stationary"]["0"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    const auto summary = Json::parse(slurp(c.output_dir / "urn_summary.json"));
    CHECK(summary["seed"] == 99);
    CHECK(summary["local_times"]["0"].get<std::size_t>() + summary["local_times"]["1"].get<std::size_t>() == 100000);
    CHECK(slurp(c.output_dir / "urn_trace.csv").rfind("# seed=99 config=", 0) == 0);
}

TEST_CASE("series check") {
    ExperimentConfig c;
    c.subcommand = Subcommand::SeriesCheck;
    c.r = 0.5;
    c.t = 1.0;
    c.steps = 1000;
    c.output_dir = scratch("series");
    auto result = run_experiment(c);
    CHECK(result.report["results"]["closed_form_relative_gap"].get<double>() < 1e-9);
    CHECK(result.checks.front().name == "closed_form_relative_gap");
    CHECK(result.checks.front().pass);
    const auto csv = slurp(c.output_dir / "series.csv");
    CHECK(csv.find("n,A_n,B_n,ratio\n0,0.5,1,\n1,0.875,2.75,") != std::string::npos);
}

TEST_CASE("ergodicity fit and star walk through the front end") {
    ExperimentConfig e;
    e.subcommand = Subcommand::ErgodicityFit;
    e.generator = {"reset-chain", "epsilon=0.3", "nu_geometric_p=0.5"};
    e.output_dir = scratch("ergodicity");
    auto er = run_experiment(e);
    CHECK(er.exit_code() == 0);
    CHECK(er.report["results"]["doeblin"]["epsilon"].get<double>() >= 0.3 - 1e-13);

    ExperimentConfig s;
    s.subcommand = Subcommand::StarwalkRun;
    s.generator = {"star-walk", "p=0.5,0.3,0.2"};
    s.steps = 20000;
    s.output_dir = scratch("starwalk");
    auto sr = run_experiment(s);
    CHECK(sr.report["results"]["coupling_mismatches"] == 0);
    CHECK(slurp(s.output_dir / "starwalk_series.csv").find("n,sigma_ratio,delta_0,delta_1,delta_2\n") !=
          std::string::npos);
}

TEST_CASE("identical configurations give byte-identical artifacts") {
    auto a = urn_config(scratch("det_a"));
    auto b = urn_config(scratch("det_b"));
    a.threads = 1;
    b.threads = 3;
    auto ra = run_experiment(a);
    auto rb = run_experiment(b);
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
        CHECK(ra.files[i].filename() == rb.files[i].filename());
        CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
    }
    CHECK(config_hash(a) == config_hash(b));
    auto other = a;
    other.master_seed = 100;
    CHECK(config_hash(other) != config_hash(a));
}

TEST_CASE("configuration errors name the field") {
    auto base = urn_config(scratch("errors"));
    auto c = base;
    c.replicas = 0;
    CHECK(field_of(c) == "replicas");
    c = base;
    c.kernel_file.reset();
    CHECK(field_of(c) == "kernel");
    c = base;
    c.generator = {"reset-chain", "epsilon=0.3", "nu_geometric_p=0.5"};
    CHECK(field_of(c) == "kernel");
    c = base;
    c.u0 = "0:1,1";
    CHECK(field_of(c) == "u0");
    c = base;
    c.kernel_file.reset();
    c.generator = {"reset-chain", "epsilon0.3"};
    CHECK(field_of(c) == "generator");
    c = base;
    c.kernel_file = data_dir / "missing.kernel";
    CHECK(field_of(c) == "kernel");
    c = base;
    c.tol = -1.0;
    CHECK(field_of(c) == "tol");

    ExperimentConfig s;
    s.subcommand = Subcommand::SeriesCheck;
    s.output_dir = base.output_dir;
    s.steps = 10;
    CHECK(field_of(s) == "steps");
    s.steps = 1000;
    s.r = 1.5;
    CHECK(field_of(s) == "r");

    ExperimentConfig h;
    h.subcommand = Subcommand::CouplingCheck;
    h.kernel_file = data_dir / "flip.kernel";
    h.horizon = 9;
    h.output_dir = base.output_dir;
    CHECK(field_of(h) == "horizon");
}

}
