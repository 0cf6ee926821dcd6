#pragma once

// Scalar-generic views of measures and kernel rows for the exact enumerators.
// T is double or Rational.

#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "urnlab/errors.hpp"
#include "urnlab/exact.hpp"
#include "urnlab/kernel.hpp"

namespace urnlab::detail {

template <class T>
using TypedMeasure = std::vector<std::pair<Color, T>>;

template <class T>
TypedMeasure<T> typed(const SparseMeasure& m) {
    if constexpr (std::is_same_v<T, double>) {
        return TypedMeasure<double>(m.begin(), m.end());
    } else {
        return m.exact()->entries;
    }
}

template <class T>
T total_of(const TypedMeasure<T>& m) {
    T s = 0;
    for (const auto& e : m) s += e.second;
    return s;
}

template <class T>
class TypedRows {
public:
    explicit TypedRows(const Kernel& kernel) : kernel_(kernel) {}

    const TypedMeasure<T>& get(Color z) {
        auto it = cache_.find(z);
        if (it != cache_.end()) return it->second;
        const SparseMeasure* row = kernel_.stored_row(z);
        if (row == nullptr) throw InfiniteSupportReachable();
        return cache_.emplace(z, typed<T>(*row)).first->second;
    }

private:
    const Kernel& kernel_;
    std::map<Color, TypedMeasure<T>> cache_;
};

// cfg += row, keeping colors sorted.
template <class T>
void add_into(TypedMeasure<T>& cfg, const TypedMeasure<T>& row) {
    TypedMeasure<T> merged;
    merged.reserve(cfg.size() + row.size());
    auto a = cfg.begin();
    auto b = row.begin();
    while (a != cfg.end() || b != row.end()) {
        if (b == row.end() || (a != cfg.end() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == cfg.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            merged.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    cfg = std::move(merged);
}

}  // namespace urnlab::detail
