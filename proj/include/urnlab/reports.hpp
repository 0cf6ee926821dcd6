#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "urnlab/analysis.hpp"
#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

using Json = nlohmann::ordered_json;

// Shortest text that reads back to the same double.
std::string format_double(double x);

// 64-bit hash as 16 lowercase hex digits.
std::string hex_hash(std::uint64_t h);

// {"color": weight, ...} in color order.
Json measure_json(const SparseMeasure& m);

// First line of every CSV artifact: "# seed=<S> config=<hash>".
std::string csv_preamble(std::uint64_t seed, const std::string& config_hash);

// step,drawn_color
std::string urn_trace_csv(const UrnTrace& trace);

// local_times, normalized final configuration, seed and kernel description hash.
Json urn_summary_json(const UrnTrace& trace, std::uint64_t master_seed);

// n,A_n,B_n,ratio where ratio is B_n over the normalizer of `b_regime`.
std::string series_csv(const GrowthSeries& a, const GrowthSeries& b, GrowthRegime b_regime);

double growth_normalizer(GrowthRegime regime, double r, std::size_t n);

// Writes `body` and throws ConfigError("out", ...) when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& body);

// Pretty JSON text with a trailing newline.
std::string json_text(const Json& j);

}  // namespace urnlab
