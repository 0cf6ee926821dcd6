#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "urnlab/rng.hpp"

namespace urnlab {

// Vertex id: kRoot for the root o, j >= 0 for w_j.
using Vertex = std::int64_t;
inline constexpr Vertex kRoot = -1;

// Weighted random recursive tree. The root has weight t, every w_j weight 1.
// Append-only: w_j's parent is the root or some w_i with i < j.
class RecursiveTree {
public:
    explicit RecursiveTree(double root_weight);

    // Validates the recursive property. Throws ConfigError.
    static RecursiveTree from_parents(double root_weight, std::vector<Vertex> parents);

    // Appends w_{size()} below `parent`. Throws UnknownVertex.
    void attach(Vertex parent);

    double root_weight() const noexcept { return root_weight_; }
    // Number of non-root vertices (n + 1 for T_n).
    std::size_t size() const noexcept { return parents_.size(); }
    std::span<const Vertex> parents() const noexcept { return parents_; }

    bool contains(Vertex v) const noexcept { return v == kRoot || (v >= 0 && static_cast<std::size_t>(v) < size()); }
    Vertex parent(Vertex v) const;
    std::size_t depth(Vertex v) const;
    // Least common ancestor: lift the deeper vertex, then lift both together.
    Vertex lca(Vertex u, Vertex w) const;
    // d(u) + d(w) - 2 d(lca(u, w)).
    std::size_t distance(Vertex u, Vertex w) const;

    // One line "j parent" per vertex, -1 for the root.
    std::string serialize() const;
    static RecursiveTree parse(double root_weight, std::string_view text);

private:
    void check(Vertex v) const;

    double root_weight_;
    std::vector<Vertex> parents_;
    std::vector<std::uint32_t> depths_;
};

// Parent of the next vertex of a tree with `existing` non-root vertices: one
// uniform variate over total weight existing + t, root span [0, t) first, then
// w_0, w_1, ... in index order.
Vertex draw_parent(double t, std::size_t existing, Rng& rng);

// T_n: vertices w_0 .. w_n. Throws ConfigError for t <= 0.
RecursiveTree grow_rrt(double t, std::size_t n, Rng& rng);

inline constexpr int kDefaultTreeEnumerationCap = 7;

// Calls visit(parents, probability) for every parent assignment of T_n, with
// probability prod_k weight(parent_k) / (k + t). T may be double or Rational.
template <class T, class Visit>
void for_each_rrt(const T& t, int n, Visit&& visit) {
    std::vector<Vertex> parents{kRoot};
    auto rec = [&](auto&& self, int k, const T& prob) -> void {
        if (k > n) {
            visit(static_cast<const std::vector<Vertex>&>(parents), prob);
            return;
        }
        const T total = T(k) + t;
        parents.push_back(kRoot);
        self(self, k + 1, prob * t / total);
        for (Vertex i = 0; i < k; ++i) {
            parents.back() = i;
            self(self, k + 1, prob / total);
        }
        parents.pop_back();
    };
    rec(rec, 1, T(1));
}

struct WeightedTree {
    RecursiveTree tree;
    double probability;
};

// All trees T_n with their probabilities. Throws HorizonTooLarge.
std::vector<WeightedTree> enumerate_rrt(double t, int n, int cap = kDefaultTreeEnumerationCap);

}  // namespace urnlab
