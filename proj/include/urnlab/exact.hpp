#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "urnlab/measure.hpp"

namespace urnlab {

using Rational = boost::multiprecision::cpp_rational;

struct ExactEntries {
    std::vector<std::pair<Color, Rational>> entries;  // sorted by color, positive
};

// Parses a decimal ("0.125", "-3", "2.5e-2") or ratio ("2/3") literal exactly.
// Returns nullopt for anything else (e.g. "inf", "0x1p-3").
std::optional<Rational> parse_exact(std::string_view text);

// Parses a number as a double, accepting the ratio form too.
double parse_real(std::string_view text);

// Builds a measure from exact weights, keeping the rational shadow.
SparseMeasure exact_measure(std::vector<std::pair<Color, Rational>> entries);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace urnlab
