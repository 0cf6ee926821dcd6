#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"

namespace testing {

inline urnlab::Kernel two_state() { return urnlab::Kernel::from_dense({{0.9, 0.1}, {0.2, 0.8}}); }
inline urnlab::Kernel mixing() { return urnlab::Kernel::from_dense({{0.5, 0.5}, {0.5, 0.5}}); }
inline urnlab::Kernel flip() { return urnlab::Kernel::from_dense({{0.0, 1.0}, {1.0, 0.0}}); }

inline urnlab::Kernel identity(std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return urnlab::Kernel::from_dense(rows);
}

inline urnlab::SparseMeasure m(const char* text) { return urnlab::SparseMeasure::parse(text); }

// |hits/n - p| within k binomial standard errors.
inline bool within_binomial(std::size_t hits, std::size_t n, double p, double k = 3.0) {
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return std::abs(static_cast<double>(hits) / static_cast<double>(n) - p) <= k * se;
}

}  // namespace testing
