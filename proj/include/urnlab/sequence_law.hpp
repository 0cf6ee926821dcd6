#pragma once

#include <map>
#include <optional>
#include <vector>

#include "urnlab/exact.hpp"
#include "urnlab/measure.hpp"

namespace urnlab {

using ColorSequence = std::vector<Color>;

// Exact joint law of a color sequence (c_0, ..., c_horizon). Floating atoms are
// always present; rational atoms are present when the law was enumerated in
// exact arithmetic.
struct SequenceLaw {
    int horizon = 0;
    std::map<ColorSequence, double> atoms;
    std::optional<std::map<ColorSequence, Rational>> exact_atoms;

    bool is_exact() const noexcept { return exact_atoms.has_value(); }
    double total() const;
    // P(c_k = v) for every v.
    SparseMeasure marginal(int k) const;
};

// Half the l1 distance between the laws over the union of their atoms.
// Computed in rational arithmetic when both laws are exact. Throws
// HorizonMismatch.
double coupling_tv(const SequenceLaw& a, const SequenceLaw& b);
std::optional<Rational> coupling_tv_exact(const SequenceLaw& a, const SequenceLaw& b);

inline constexpr int kDefaultEnumerationCap = 6;

}  // namespace urnlab
