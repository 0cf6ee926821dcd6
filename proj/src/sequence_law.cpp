#include "urnlab/sequence_law.hpp"

#include <cmath>
#include <set>

#include "urnlab/errors.hpp"

namespace urnlab {

double SequenceLaw::total() const {
    double s = 0.0;
    for (const auto& [seq, p] : atoms) s += p;
    return s;
}

SparseMeasure SequenceLaw::marginal(int k) const {
    if (k < 0 || k > horizon) throw ConfigError("k", "outside the law's horizon");
    std::vector<SparseMeasure::Entry> entries;
    for (const auto& [seq, p] : atoms) entries.emplace_back(seq[static_cast<std::size_t>(k)], p);
    return SparseMeasure::from_entries(std::move(entries));
}

namespace {

template <class T>
T half_l1(const std::map<ColorSequence, T>& a, const std::map<ColorSequence, T>& b) {
    using std::abs;
    T sum = 0;
    auto x = a.begin();
    auto y = b.begin();
    while (x != a.end() || y != b.end()) {
        if (y == b.end() || (x != a.end() && x->first < y->first)) {
            sum += abs(x->second);
            ++x;
        } else if (x == a.end() || y->first < x->first) {
            sum += abs(y->second);
            ++y;
        } else {
            sum += abs(x->second - y->second);
            ++x;
            ++y;
        }
    }
    return sum / 2;
}

}  // namespace

std::optional<Rational> coupling_tv_exact(const SequenceLaw& a, const SequenceLaw& b) {
    if (a.horizon != b.horizon) throw HorizonMismatch(a.horizon, b.horizon);
    if (!a.is_exact() || !b.is_exact()) return std::nullopt;
    return half_l1(*a.exact_atoms, *b.exact_atoms);
}

double coupling_tv(const SequenceLaw& a, const SequenceLaw& b) {
    if (auto exact = coupling_tv_exact(a, b)) return to_double(*exact);
    return half_l1(a.atoms, b.atoms);
}

}  // namespace urnlab
