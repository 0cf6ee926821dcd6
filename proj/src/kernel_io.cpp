#include "urnlab/kernel_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "urnlab/errors.hpp"
#include "urnlab/exact.hpp"

namespace urnlab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::size_t parse_index(const std::string& tok, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != tok.size() || tok.front() == '-') {
        throw ParseError(std::string("bad ") + what + " '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

Kernel parse_kernel(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<std::vector<std::string>> lines;
    while (std::getline(in, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks.front().front() == '#') continue;
        lines.push_back(std::move(toks));
    }
    if (lines.empty() || lines.front().size() < 2 || lines.front()[0] != "kernel") {
        throw ParseError("kernel description must start with 'kernel explicit|generator'");
    }
    const auto& header = lines.front();
    if (header[1] == "generator") {
        if (header.size() < 3) throw ParseError("generator name missing");
        std::map<std::string, std::string> params;
        for (std::size_t i = 3; i < header.size(); ++i) {
            auto eq = header[i].find('=');
            if (eq == std::string::npos) throw ParseError("generator parameter '" + header[i] + "' lacks '='");
            params[header[i].substr(0, eq)] = header[i].substr(eq + 1);
        }
        return Kernel::generator(header[2], params);
    }
    if (header[1] != "explicit" || header.size() != 3) throw ParseError("expected 'kernel explicit <num_colors>'");

    const std::size_t n = parse_index(header[2], "color count");
    std::vector<std::vector<std::pair<Color, std::string>>> raw(n);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& toks = lines[i];
        if (toks.size() != 3) throw ParseError("expected 'u v prob', got " + std::to_string(toks.size()) + " fields");
        const auto u = parse_index(toks[0], "row");
        const auto v = parse_index(toks[1], "column");
        if (u >= n) throw UnknownColor(u);
        if (v >= n) throw UnknownColor(v);
        raw[u].emplace_back(v, toks[2]);
    }

    std::vector<SparseMeasure> rows;
    rows.reserve(n);
    for (std::size_t u = 0; u < n; ++u) {
        bool exact = true;
        std::vector<std::pair<Color, Rational>> exact_entries;
        std::vector<SparseMeasure::Entry> entries;
        for (const auto& [v, w] : raw[u]) {
            const double x = parse_real(w);
            if (x < 0.0) throw NegativeEntry(u, v);
            entries.emplace_back(v, x);
            if (auto q = parse_exact(w)) {
                exact_entries.emplace_back(v, *q);
            } else {
                exact = false;
            }
        }
        if (exact) {
            Rational sum = 0;
            for (const auto& e : exact_entries) sum += e.second;
            exact = sum == 1;
        }
        rows.push_back(exact ? exact_measure(std::move(exact_entries)) : SparseMeasure::from_entries(std::move(entries)));
    }
    return Kernel::from_rows(std::move(rows));
}

Kernel load_kernel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("kernel", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_kernel(buf.str());
}

}  // namespace urnlab
