#include "urnlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "urnlab/analysis.hpp"
#include "urnlab/bmc.hpp"
#include "urnlab/ergodicity.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/hash.hpp"
#include "urnlab/kernel_io.hpp"
#include "urnlab/replicas.hpp"
#include "urnlab/rrt.hpp"
#include "urnlab/starwalk.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<Subcommand, std::string>>& subcommand_table() {
    static const std::vector<std::pair<Subcommand, std::string>> table = {
        {Subcommand::UrnRun, "urn-run"},
        {Subcommand::CouplingCheck, "coupling-check"},
        {Subcommand::CovarianceCheck, "lemma31-check"},
        {Subcommand::SeriesCheck, "lemma32-check"},
        {Subcommand::VarianceCheck, "variance-check"},
        {Subcommand::StarwalkRun, "starwalk-run"},
        {Subcommand::ErgodicityFit, "ergodicity-fit"},
    };
    return table;
}

bool uses_kernel(Subcommand s) { return s != Subcommand::SeriesCheck; }

// Fills every unset optional with the subcommand default.
ExperimentConfig resolve(ExperimentConfig c) {
    struct Defaults {
        std::size_t steps, horizon, replicas;
        double tol;
    };
    static const std::map<Subcommand, Defaults> defaults = {
        {Subcommand::UrnRun, {10000, 0, 1, 0.02}},
        {Subcommand::CouplingCheck, {0, 3, 1, 1e-10}},
        {Subcommand::CovarianceCheck, {20, 40, 10000, 0.95}},
        {Subcommand::SeriesCheck, {1000, 0, 10000, 1e-9}},
        {Subcommand::VarianceCheck, {10000, 40, 1000, 2.0}},
        {Subcommand::StarwalkRun, {100000, 0, 1, 0.02}},
        {Subcommand::ErgodicityFit, {30, 1, 1, 0.0}},
    };
    const auto& d = defaults.at(c.subcommand);
    if (!c.steps) c.steps = d.steps;
    if (!c.horizon) c.horizon = d.horizon;
    if (!c.replicas) c.replicas = d.replicas;
    if (!c.tol) c.tol = d.tol;
    return c;
}

SparseMeasure parse_u0(const ExperimentConfig& c) {
    try {
        return SparseMeasure::parse(c.u0);
    } catch (const Error& e) {
        throw ConfigError("u0", e.what());
    }
}

std::vector<Color> probe_colors(const ExperimentConfig& c, const Kernel& kernel) {
    if (!c.probes.empty()) return c.probes;
    const std::size_t n = kernel.num_colors().value_or(10);
    std::vector<Color> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

CheckResult at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, value <= threshold};
}

CheckResult below(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, value < threshold};
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

struct Context {
    const ExperimentConfig& config;
    std::string hash;
    ExperimentResult& result;

    void write(const std::string& name, const std::string& body) {
        const fs::path p = config.output_dir / name;
        write_text(p, body);
        result.files.push_back(p);
    }
    void write_csv(const std::string& name, const std::string& body) {
        write(name, csv_preamble(config.master_seed, hash) + body);
    }
    void check(CheckResult c) { result.checks.push_back(std::move(c)); }
};

// ---------------------------------------------------------------------------

struct UrnReplica {
    double l1 = 0.0;
    double local_dev = 0.0;
    double mass_gap = 0.0;
    std::uint64_t stream_seed = 0;
    std::optional<UrnTrace> trace;
};

Json run_urn(Context& ctx, const Kernel& kernel) {
    const auto& c = ctx.config;
    const SparseMeasure u0 = parse_u0(c);
    const std::size_t n = *c.steps;
    const SparseMeasure pi = stationary_distribution(kernel, default_stationary_tolerance(kernel));

    auto runs = run_replicas<UrnReplica>(
        *c.replicas, c.master_seed,
        [&](std::size_t index, Rng& rng) {
            UrnReplica out;
            out.stream_seed = rng.seed();
            UrnTrace trace = urn_run(urn_init(u0, kernel), n, rng);
            out.l1 = l1_distance(normalized_config(trace.final_state), pi);
            if (n > 0) {
                std::vector<SparseMeasure::Entry> freq;
                for (const auto& [v, count] : trace.local_times)
                    freq.emplace_back(v, static_cast<double>(count) / static_cast<double>(n));
                out.local_dev = sup_distance(SparseMeasure::from_entries(std::move(freq)), pi);
            }
            const auto& st = trace.final_state;
            out.mass_gap = std::abs(st.config.total_mass() + st.discarded - (static_cast<double>(n) + st.t0));
            if (index == 0) out.trace = std::move(trace);
            return out;
        },
        c.threads);

    const UrnTrace& first = *runs[0].trace;
    ctx.write_csv("urn_trace.csv", urn_trace_csv(first));
    ctx.write("urn_summary.json", json_text(urn_summary_json(first, c.master_seed)));

    std::string rows = "replica,stream_seed,l1_distance,local_time_deviation\n";
    std::vector<double> l1s, devs;
    double mass_gap = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        rows += std::to_string(i) + ',' + std::to_string(runs[i].stream_seed) + ',' + format_double(runs[i].l1) + ',' +
                format_double(runs[i].local_dev) + '\n';
        l1s.push_back(runs[i].l1);
        devs.push_back(runs[i].local_dev);
        mass_gap = std::max(mass_gap, runs[i].mass_gap);
    }
    ctx.write_csv("urn_replicas.csv", rows);

    const double tol = *c.tol;
    ctx.check(below("l1_to_stationary", runs[0].l1, tol));
    ctx.check(below("local_time_deviation", runs[0].local_dev, tol));
    if (runs.size() > 1) {
        ctx.check(below("median_l1_to_stationary", median(l1s), tol / 2));
        ctx.check(below("median_local_time_deviation", median(devs), tol / 2));
    }
    ctx.check(at_most("mass_conservation", mass_gap, 1e-9 * std::max<double>(1.0, static_cast<double>(n))));

    Json out;
    out["stationary"] = measure_json(pi);
    out["stationary_residual"] = stationary_residual(kernel, pi);
    out["l1_distance"] = runs[0].l1;
    out["local_time_deviation"] = runs[0].local_dev;
    out["median_l1_distance"] = median(l1s);
    out["median_local_time_deviation"] = median(devs);
    return out;
}

// ---------------------------------------------------------------------------

std::string sequence_text(const ColorSequence& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(s[i]);
    }
    return out;
}

Json run_coupling(Context& ctx, const Kernel& kernel) {
    const auto& c = ctx.config;
    const SparseMeasure u0 = parse_u0(c);
    const int horizon = static_cast<int>(*c.horizon);
    const SequenceLaw urn = urn_exact_law(u0, kernel, horizon);
    const SequenceLaw tree = bmc_exact_law(u0, kernel, horizon);

    std::map<ColorSequence, std::pair<double, double>> joined;
    for (const auto& [s, p] : urn.atoms) joined[s].first = p;
    for (const auto& [s, p] : tree.atoms) joined[s].second = p;
    std::string rows = "sequence,urn_probability,bmc_probability\n";
    for (const auto& [s, pq] : joined)
        rows += sequence_text(s) + ',' + format_double(pq.first) + ',' + format_double(pq.second) + '\n';
    ctx.write_csv("coupling_laws.csv", rows);

    Json out;
    out["horizon"] = horizon;
    out["atoms"] = joined.size();
    const auto exact = coupling_tv_exact(urn, tree);
    if (exact) {
        const std::string text = exact->str();
        out["mode"] = "rational";
        out["tv_distance"] = to_double(*exact);
        out["tv_distance_exact"] = text;
        ctx.check({"tv_distance", to_double(*exact), 0.0, *exact == 0});
    } else {
        const double tv = coupling_tv(urn, tree);
        out["mode"] = "floating";
        out["tv_distance"] = tv;
        ctx.check(at_most("tv_distance", tv, *c.tol));
    }
    return out;
}

// ---------------------------------------------------------------------------

Json certificate_json(const ErgodicityCertificate& cert) {
    Json out;
    out["C"] = cert.C;
    out["rho"] = cert.rho;
    out["n_first"] = cert.n_first;
    out["n_last"] = cert.n_last;
    out["fallback_rho"] = cert.fallback_rho;
    out["sup_errors"] = cert.sup_errors;
    out["stationary"] = measure_json(cert.pi);
    return out;
}

Json run_covariance(Context& ctx, const Kernel& kernel) {
    const auto& c = ctx.config;
    const SparseMeasure u0 = parse_u0(c);
    const std::vector<Color> colors = probe_colors(c, kernel);
    const auto cert = fit_ergodicity_certificate(kernel, colors, colors, *c.horizon);
    const double t = u0.total_mass();

    std::string rows = "tree,u,w,color,estimate,standard_error,exact,bound,within_bound\n";
    std::string trees_text;
    double worst_excess = -INFINITY;
    std::size_t compared = 0, agreeing = 0;
    for (std::size_t i = 0; i < c.trees; ++i) {
        Rng grow = Rng::stream(c.master_seed, i);
        const RecursiveTree tree = grow_rrt(t, *c.steps, grow);
        trees_text += "# tree " + std::to_string(i) + "\n" + tree.serialize();
        const auto reports = conditional_covariance_all_pairs(tree, kernel, u0, colors, *c.replicas,
                                                              derive_stream_seed(c.master_seed, 1000000 + i), &cert);
        for (const auto& r : reports) {
            const double exact = exact_conditional_covariance(tree, kernel, u0, r.u, r.w, r.v);
            worst_excess = std::max(worst_excess, r.mc_estimate - r.bound - 3.0 * r.standard_error);
            ++compared;
            if (std::abs(r.mc_estimate - exact) <= 3.0 * r.standard_error + 1e-12) ++agreeing;
            rows += std::to_string(i) + ',' + std::to_string(r.u) + ',' + std::to_string(r.w) + ',' +
                    std::to_string(r.v) + ',' + format_double(r.mc_estimate) + ',' + format_double(r.standard_error) +
                    ',' + format_double(exact) + ',' + format_double(r.bound) + ',' + (r.within_bound() ? "1" : "0") +
                    '\n';
        }
    }
    ctx.write_csv("covariance.csv", rows);
    ctx.write("trees.txt", trees_text);

    const double agreement = compared ? static_cast<double>(agreeing) / static_cast<double>(compared) : 1.0;
    ctx.check({"certificate_dominates_evidence", cert.dominates_evidence() ? 1.0 : 0.0, 1.0,
               cert.dominates_evidence()});
    ctx.check(at_most("covariance_bound_excess", compared ? worst_excess : 0.0, 0.0));
    ctx.check({"exact_agreement_fraction", agreement, *c.tol, agreement >= *c.tol});

    Json out;
    out["certificate"] = certificate_json(cert);
    out["pairs"] = compared;
    out["worst_bound_excess"] = compared ? worst_excess : 0.0;
    out["exact_agreement_fraction"] = agreement;
    return out;
}

// ---------------------------------------------------------------------------

GrowthRegime b_regime_for(double r) {
    if (r > 0.5) return GrowthRegime::BHigh;
    if (r == 0.5) return GrowthRegime::BHalf;
    return GrowthRegime::BLow;
}

Json growth_json(const GrowthReport& g) {
    Json out;
    out["regime"] = to_string(g.regime);
    out["sup_ratio"] = g.sup_ratio;
    out["median_ratio"] = g.median_ratio;
    out["top_decade_max"] = g.top_decade_max;
    out["bounded"] = g.bounded();
    return out;
}

Json run_series(Context& ctx) {
    const auto& c = ctx.config;
    const std::size_t n_max = *c.steps;
    const auto a = a_series_recursive(c.r, c.t, n_max);
    const auto closed = a_series_closed_form_all(c.r, c.t, n_max);
    const auto b = b_series_recursive(c.r, c.t, n_max);
    const GrowthRegime regime = b_regime_for(c.r);
    ctx.write_csv("series.csv", series_csv(a, b, regime));

    double gap = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n)
        gap = std::max(gap, std::abs(closed.values[n] - a.values[n]) / std::abs(a.values[n]));
    ctx.check(at_most("closed_form_relative_gap", gap, *c.tol));

    const auto ga = growth_bound_check(a, GrowthRegime::A);
    const auto gb = growth_bound_check(b, regime);
    ctx.check(at_most("a_growth_top_decade_over_median", ga.top_decade_max / ga.median_ratio, 2.0));
    ctx.check(at_most("b_growth_top_decade_over_median", gb.top_decade_max / gb.median_ratio, 2.0));

    Json mc = Json::array();
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{20}}) {
        const auto est = mc_series_estimate(c.r, c.t, n, *c.replicas, derive_stream_seed(c.master_seed, n));
        const double za = est.a_se > 0 ? std::abs(est.a_hat - a.values[n]) / est.a_se : 0.0;
        const double zb = est.b_se > 0 ? std::abs(est.b_hat - b.values[n]) / est.b_se : 0.0;
        ctx.check(at_most("mc_a_z_n" + std::to_string(n), za, 3.0));
        ctx.check(at_most("mc_b_z_n" + std::to_string(n), zb, 3.0));
        Json row;
        row["n"] = n;
        row["a_hat"] = est.a_hat;
        row["a_se"] = est.a_se;
        row["a_exact"] = a.values[n];
        row["b_hat"] = est.b_hat;
        row["b_se"] = est.b_se;
        row["b_exact"] = b.values[n];
        mc.push_back(row);
    }

    Json out;
    out["r"] = c.r;
    out["t"] = c.t;
    out["n_max"] = n_max;
    out["closed_form_relative_gap"] = gap;
    out["a_growth"] = growth_json(ga);
    out["b_growth"] = growth_json(gb);
    out["monte_carlo"] = std::move(mc);
    return out;
}

// ---------------------------------------------------------------------------

Json run_variance(Context& ctx, const Kernel& kernel) {
    const auto& c = ctx.config;
    const SparseMeasure u0 = parse_u0(c);
    const std::vector<Color> probes = probe_colors(c, kernel);
    const auto cert = fit_ergodicity_certificate(kernel, probes, probes, *c.horizon);

    std::vector<std::size_t> checkpoints;
    for (std::size_t n = 100; n <= *c.steps; n *= 10) checkpoints.push_back(n);
    if (checkpoints.back() != *c.steps) checkpoints.push_back(*c.steps);

    const auto check = local_time_variance_check(kernel, u0, c.color, checkpoints, *c.replicas, c.master_seed, &cert);
    std::string rows = "n,j_hat,b_n,ratio,bound\n";
    double worst = 0.0;
    for (const auto& p : check.points) {
        rows += std::to_string(p.n) + ',' + format_double(p.j_hat) + ',' + format_double(p.b_n) + ',' +
                format_double(p.ratio) + ',' + format_double(p.bound) + '\n';
        worst = std::max(worst, p.ratio);
    }
    ctx.write_csv("variance.csv", rows);
    const double first = check.points.front().ratio;
    ctx.check(at_most("variance_ratio_growth", first > 0 ? worst / first : 0.0, *c.tol));

    Json out;
    out["color"] = c.color;
    out["rho"] = check.rho;
    out["calibration"] = check.calibration;
    out["certificate"] = certificate_json(cert);
    return out;
}

// ---------------------------------------------------------------------------

Json run_starwalk(Context& ctx, const Kernel& alpha) {
    const auto& c = ctx.config;
    const SparseMeasure delta0 = parse_u0(c);
    const std::size_t n = *c.steps;
    const SparseMeasure pi = stationary_distribution(alpha, default_stationary_tolerance(alpha));
    const StarLimits limits = star_limits(pi);

    // Main run: weights observed at time n, update times until sigma_n exists.
    Rng rng = Rng::stream(c.master_seed, 0);
    StarWalkState walk = star_walk_init(delta0, alpha);
    const std::size_t every = std::max<std::size_t>(1, n / 100);
    WalkTrace trace = star_walk_run(walk, n, rng, every);
    if (walk.updates < n) {
        const WalkTrace rest = star_walk_run_updates(walk, n - walk.updates, rng);
        trace.update_times.insert(trace.update_times.end(), rest.update_times.begin(), rest.update_times.end());
        trace.y_increments.insert(trace.y_increments.end(), rest.y_increments.begin(), rest.y_increments.end());
        trace.reinforced.insert(trace.reinforced.end(), rest.reinforced.begin(), rest.reinforced.end());
    }

    std::vector<Color> columns;
    for (const auto& [j, w] : trace.snapshots.back().weights) columns.push_back(j);
    std::string rows = "n,sigma_ratio";
    for (Color j : columns) rows += ",delta_" + std::to_string(j);
    rows += '\n';
    for (const auto& snap : trace.snapshots) {
        const double nd = static_cast<double>(snap.n);
        rows += std::to_string(snap.n) + ',' +
                format_double(static_cast<double>(trace.sigma(snap.n)) / (nd + 1.0));
        for (Color j : columns) rows += ',' + format_double(snap.weights.at(j) / (nd + walk.delta));
        rows += '\n';
    }
    ctx.write_csv("starwalk_series.csv", rows);

    const double sigma_ratio = n ? static_cast<double>(trace.sigma(n)) / (static_cast<double>(n) + 1.0) : 0.0;
    const SparseMeasure& at_n = trace.snapshots.back().weights;
    ctx.check(below("sigma_limit", std::abs(sigma_ratio - limits.sigma_limit), *c.tol));
    Json weights = Json::object();
    for (const auto& [j, pj] : pi) {
        const double ratio = at_n.at(j) / (static_cast<double>(n) + walk.delta);
        weights[std::to_string(j)] = ratio;
        if (pj >= 0.05)
            ctx.check(below("weight_limit_" + std::to_string(j), std::abs(ratio - limits.weight_limits.at(j)), *c.tol));
    }

    // Coupled run against the urn on one shared stream.
    const std::size_t coupled = std::min<std::size_t>(n, 10000);
    Rng walk_rng = Rng::stream(c.master_seed, 1);
    Rng urn_rng = Rng::stream(c.master_seed, 1);
    StarWalkState w = star_walk_init(delta0, alpha);
    UrnState u = urn_init(delta0, alpha);
    std::size_t mismatches = 0, zeros = 0, loops = 0;
    for (std::size_t k = 0; k < coupled; ++k) {
        const WalkTrace one = star_walk_run_updates(w, 1, walk_rng);
        if (urn_step(u, urn_rng) == 0) ++zeros;
        if (one.y_increments.back() == 1) ++loops;
        if (!(w.weights == u.config) || loops != zeros) ++mismatches;
    }
    ctx.check(at_most("coupling_mismatches", static_cast<double>(mismatches), 0.0));

    Json summary;
    summary["seed"] = c.master_seed;
    summary["steps"] = n;
    summary["updates"] = walk.updates;
    summary["sigma_ratio"] = sigma_ratio;
    summary["sigma_limit"] = limits.sigma_limit;
    summary["weight_ratios"] = weights;
    summary["weight_limits"] = measure_json(limits.weight_limits);
    summary["stationary"] = measure_json(pi);
    summary["kernel_hash"] = hex_hash(alpha.description_hash());
    ctx.write("starwalk_summary.json", json_text(summary));

    Json out = summary;
    out["coupled_updates"] = coupled;
    out["coupling_mismatches"] = mismatches;
    return out;
}

// ---------------------------------------------------------------------------

Json run_ergodicity(Context& ctx, const Kernel& kernel) {
    const auto& c = ctx.config;
    const std::vector<Color> probes = probe_colors(c, kernel);
    const auto cert = fit_ergodicity_certificate(kernel, probes, probes, *c.steps);

    std::string rows = "n,sup_error,bound\n";
    for (std::size_t i = 0; i < cert.sup_errors.size(); ++i) {
        const std::size_t n = cert.n_first + i;
        rows += std::to_string(n) + ',' + format_double(cert.sup_errors[i]) + ',' + format_double(cert.bound(n)) + '\n';
    }
    ctx.write_csv("ergodicity.csv", rows);
    Json cj = certificate_json(cert);
    cj["seed"] = c.master_seed;
    cj["kernel_hash"] = hex_hash(kernel.description_hash());
    ctx.write("certificate.json", json_text(cj));
    ctx.check({"certificate_dominates_evidence", cert.dominates_evidence() ? 1.0 : 0.0, 1.0,
               cert.dominates_evidence()});

    Json out = certificate_json(cert);
    const auto doeblin = check_doeblin(kernel, *c.horizon, probes);
    if (doeblin) {
        Json d;
        d["n0"] = doeblin->n0;
        d["epsilon"] = doeblin->epsilon;
        d["nu"] = measure_json(doeblin->nu);
        out["doeblin"] = std::move(d);
    } else {
        out["doeblin"] = nullptr;
    }
    return out;
}

}  // namespace

std::string to_string(Subcommand s) {
    for (const auto& [k, name] : subcommand_table())
        if (k == s) return name;
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (const auto& [k, n] : subcommand_table())
        if (n == name) return k;
    return std::nullopt;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [k, n] : subcommand_table()) out.push_back(n);
        return out;
    }();
    return names;
}

bool ExperimentResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json canonical_config(const ExperimentConfig& raw) {
    const ExperimentConfig c = resolve(raw);
    Json j;
    j["subcommand"] = to_string(c.subcommand);
    if (uses_kernel(c.subcommand)) {
        if (c.kernel_file) j["kernel_file"] = c.kernel_file->generic_string();
        if (!c.generator.empty()) j["generator"] = c.generator;
        j["u0"] = c.u0;
    }
    j["steps"] = *c.steps;
    j["horizon"] = *c.horizon;
    j["replicas"] = *c.replicas;
    j["seed"] = c.master_seed;
    j["tol"] = *c.tol;
    switch (c.subcommand) {
        case Subcommand::SeriesCheck:
            j["r"] = c.r;
            j["t"] = c.t;
            break;
        case Subcommand::VarianceCheck:
            j["color"] = c.color;
            j["probes"] = c.probes;
            break;
        case Subcommand::CovarianceCheck:
            j["trees"] = c.trees;
            j["probes"] = c.probes;
            break;
        case Subcommand::ErgodicityFit:
            j["probes"] = c.probes;
            break;
        default:
            break;
    }
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    return hex_hash(fnv1a_64(canonical_config(config).dump()));
}

void validate(const ExperimentConfig& raw) {
    const ExperimentConfig c = resolve(raw);
    if (*c.replicas < 1) throw ConfigError("replicas", "must be at least 1");
    if (!(*c.tol >= 0.0) || !std::isfinite(*c.tol)) throw ConfigError("tol", "must be a finite non-negative number");
    if (uses_kernel(c.subcommand)) {
        if (c.kernel_file && !c.generator.empty()) throw ConfigError("kernel", "give either --kernel or --generator");
        if (!c.kernel_file && c.generator.empty()) throw ConfigError("kernel", "one of --kernel or --generator is required");
        parse_u0(c);
    }
    switch (c.subcommand) {
        case Subcommand::CouplingCheck:
            if (*c.horizon > static_cast<std::size_t>(kDefaultEnumerationCap))
                throw ConfigError("horizon", "at most " + std::to_string(kDefaultEnumerationCap));
            break;
        case Subcommand::CovarianceCheck:
            if (*c.steps < 1) throw ConfigError("steps", "tree size must be at least 1");
            if (*c.replicas < 2) throw ConfigError("replicas", "need at least 2 samples");
            if (c.trees < 1) throw ConfigError("trees", "must be at least 1");
            if (*c.horizon < 4) throw ConfigError("horizon", "certificate fit needs at least 4 steps");
            break;
        case Subcommand::SeriesCheck:
            if (!(c.r > 0.0 && c.r < 1.0)) throw ConfigError("r", "must lie in (0, 1)");
            if (!(c.t > 0.0) || !std::isfinite(c.t)) throw ConfigError("t", "must be positive");
            if (*c.steps < 1000) throw ConfigError("steps", "n_max must be at least 1000");
            if (*c.replicas < 100) throw ConfigError("replicas", "need at least 100 trees");
            break;
        case Subcommand::VarianceCheck:
            if (*c.steps < 100) throw ConfigError("steps", "largest checkpoint must be at least 100");
            if (*c.replicas < 2) throw ConfigError("replicas", "need at least 2 replicas");
            if (*c.horizon < 4) throw ConfigError("horizon", "certificate fit needs at least 4 steps");
            break;
        case Subcommand::ErgodicityFit:
            if (*c.steps < 4) throw ConfigError("steps", "certificate fit needs at least 4 steps");
            if (*c.horizon < 1) throw ConfigError("horizon", "Doeblin step count must be at least 1");
            break;
        default:
            break;
    }
}

Kernel load_kernel_source(const ExperimentConfig& c) {
    try {
        if (c.kernel_file) return load_kernel(*c.kernel_file);
        if (c.generator.empty()) throw ConfigError("kernel", "one of --kernel or --generator is required");
        std::map<std::string, std::string> params;
        for (std::size_t i = 1; i < c.generator.size(); ++i) {
            const auto& tok = c.generator[i];
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("generator", "expected key=value, got '" + tok + "'");
            params[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        return Kernel::generator(c.generator[0], params);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(c.kernel_file ? "kernel" : "generator", e.what());
    }
}

ExperimentResult run_experiment(const ExperimentConfig& raw) {
    validate(raw);
    const ExperimentConfig c = resolve(raw);
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) throw ConfigError("out", "cannot create " + c.output_dir.string() + ": " + ec.message());

    ExperimentResult result;
    Context ctx{c, config_hash(c), result};
    std::optional<Kernel> kernel;
    if (uses_kernel(c.subcommand)) kernel = load_kernel_source(c);

    Json details;
    switch (c.subcommand) {
        case Subcommand::UrnRun: details = run_urn(ctx, *kernel); break;
        case Subcommand::CouplingCheck: details = run_coupling(ctx, *kernel); break;
        case Subcommand::CovarianceCheck: details = run_covariance(ctx, *kernel); break;
        case Subcommand::SeriesCheck: details = run_series(ctx); break;
        case Subcommand::VarianceCheck: details = run_variance(ctx, *kernel); break;
        case Subcommand::StarwalkRun: details = run_starwalk(ctx, *kernel); break;
        case Subcommand::ErgodicityFit: details = run_ergodicity(ctx, *kernel); break;
    }

    Json checks = Json::array();
    for (const auto& ch : result.checks) {
        Json row;
        row["name"] = ch.name;
        row["value"] = ch.value;
        row["threshold"] = ch.threshold;
        row["pass"] = ch.pass;
        checks.push_back(row);
    }
    Json& report = result.report;
    report["subcommand"] = to_string(c.subcommand);
    report["config"] = canonical_config(c);
    report["config_hash"] = ctx.hash;
    report["seed"] = c.master_seed;
    if (kernel) report["kernel_hash"] = hex_hash(kernel->description_hash());
    report["results"] = std::move(details);
    report["checks"] = std::move(checks);
    report["pass"] = result.passed();
    ctx.write("report.json", json_text(report));
    return result;
}

}  // namespace urnlab
