#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urnlab {

// Colors are identified with {0, 1, 2, ...}.
using Color = std::uint64_t;

struct ExactEntries;

// Finite nonnegative measure over colors. Entries are kept sorted by color and
// only strictly positive weights are stored. A measure built from exact
// (decimal or ratio) input also carries an exact rational shadow of its
// entries; any arithmetic on the measure drops the shadow.
class SparseMeasure {
public:
    using Entry = std::pair<Color, double>;

    SparseMeasure() = default;

    // Sorts, merges duplicate colors and drops zeros. Throws NegativeEntry on a
    // negative weight (reported as row 0).
    static SparseMeasure from_entries(std::vector<Entry> entries);
    static SparseMeasure from_dense(std::span<const double> weights);
    static SparseMeasure point(Color c, double mass = 1.0);
    // Attaches an exact shadow; `shadow` must describe the same entries.
    static SparseMeasure with_exact(std::vector<Entry> entries, std::shared_ptr<const ExactEntries> shadow);

    // Parses "c:w,c:w,...". Weights may be decimals ("0.25", "1e-3") or ratios
    // ("2/3"); when every weight parses exactly the measure keeps its exact shadow.
    static SparseMeasure parse(std::string_view text);

    double total_mass() const noexcept { return total_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const Entry> entries() const noexcept { return entries_; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    // Weight at c, zero if absent.
    double at(Color c) const noexcept;
    Color max_color() const noexcept { return entries_.empty() ? 0 : entries_.back().first; }

    bool is_exact() const noexcept { return exact_ != nullptr; }
    const ExactEntries* exact() const noexcept { return exact_.get(); }

    SparseMeasure scaled(double factor) const;
    SparseMeasure normalized() const;

    // this += factor * other. Merge keeps the sorted order; the running total is
    // updated by factor * other.total_mass().
    void add(const SparseMeasure& other, double factor = 1.0);

    // Color whose cumulative-weight span contains `u * total_mass()`, scanning in
    // color order. `u` must lie in [0, 1).
    Color sample(double u) const;

    // Keeps the smallest entries whose combined mass is at most `budget` out and
    // returns the discarded mass.
    double prune(double budget);

    std::string to_string() const;

    friend bool operator==(const SparseMeasure& a, const SparseMeasure& b) noexcept {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry> entries_;
    double total_ = 0.0;
    std::shared_ptr<const ExactEntries> exact_;
};

// Sum of |a_c - b_c| over the union of supports.
double l1_distance(const SparseMeasure& a, const SparseMeasure& b);

// Sup-norm of a - b over the union of supports.
double sup_distance(const SparseMeasure& a, const SparseMeasure& b);

}  // namespace urnlab
