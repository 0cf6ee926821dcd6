#include "urnlab/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "urnlab/errors.hpp"

namespace urnlab {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string hex_hash(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json measure_json(const SparseMeasure& m) {
    Json out = Json::object();
    for (const auto& [c, w] : m) out[std::to_string(c)] = w;
    return out;
}

std::string csv_preamble(std::uint64_t seed, const std::string& config_hash) {
    return "# seed=" + std::to_string(seed) + " config=" + config_hash + "\n";
}

std::string urn_trace_csv(const UrnTrace& trace) {
    std::string out = "step,drawn_color\n";
    out.reserve(out.size() + trace.draws.size() * 10);
    for (std::size_t k = 0; k < trace.draws.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += std::to_string(trace.draws[k]);
        out += '\n';
    }
    return out;
}

Json urn_summary_json(const UrnTrace& trace, std::uint64_t master_seed) {
    Json local = Json::object();
    for (const auto& [c, n] : trace.local_times) local[std::to_string(c)] = n;
    Json out;
    out["steps"] = trace.final_state.steps;
    out["local_times"] = std::move(local);
    out["normalized_config"] = measure_json(normalized_config(trace.final_state));
    out["seed"] = master_seed;
    out["stream_seed"] = trace.seed;
    out["kernel_hash"] = hex_hash(trace.final_state.kernel.description_hash());
    out["discarded_mass"] = trace.final_state.discarded;
    return out;
}

double growth_normalizer(GrowthRegime regime, double r, std::size_t n) {
    const double x = static_cast<double>(n);
    switch (regime) {
        case GrowthRegime::A: return std::pow(x, r);
        case GrowthRegime::BHigh: return std::pow(x, 2.0 * r);
        case GrowthRegime::BHalf: return x * std::log(x + 1.0);
        case GrowthRegime::BLow: return x;
    }
    return 1.0;
}

std::string series_csv(const GrowthSeries& a, const GrowthSeries& b, GrowthRegime b_regime) {
    std::string out = "n,A_n,B_n,ratio\n";
    const std::size_t len = std::min(a.values.size(), b.values.size());
    for (std::size_t n = 0; n < len; ++n) {
        out += std::to_string(n);
        out += ',' + format_double(a.values[n]);
        out += ',' + format_double(b.values[n]);
        out += ',';
        if (n > 0) out += format_double(b.values[n] / growth_normalizer(b_regime, b.r, n));
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("out", "cannot write " + path.string());
    f << body;
    if (!f) throw ConfigError("out", "failed writing " + path.string());
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace urnlab
