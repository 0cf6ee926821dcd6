#include "urnlab/rrt.hpp"

#include <algorithm>
#include <sstream>

#include "urnlab/errors.hpp"

namespace urnlab {

RecursiveTree::RecursiveTree(double root_weight) : root_weight_(root_weight) {
    if (!(root_weight > 0.0)) throw ConfigError("t", "root weight must be positive");
}

RecursiveTree RecursiveTree::from_parents(double root_weight, std::vector<Vertex> parents) {
    RecursiveTree tree(root_weight);
    for (std::size_t j = 0; j < parents.size(); ++j) {
        const Vertex p = parents[j];
        if (p != kRoot && (p < 0 || static_cast<std::size_t>(p) >= j)) {
            throw ConfigError("parents", "w_" + std::to_string(j) + " has parent " + std::to_string(p) +
                                             ", which is not an earlier vertex");
        }
        tree.attach(p);
    }
    return tree;
}

void RecursiveTree::attach(Vertex parent) {
    check(parent);
    parents_.push_back(parent);
    depths_.push_back(parent == kRoot ? 1u : depths_[static_cast<std::size_t>(parent)] + 1u);
}

void RecursiveTree::check(Vertex v) const {
    if (!contains(v)) throw UnknownVertex(v);
}

Vertex RecursiveTree::parent(Vertex v) const {
    check(v);
    if (v == kRoot) throw UnknownVertex(v);
    return parents_[static_cast<std::size_t>(v)];
}

std::size_t RecursiveTree::depth(Vertex v) const {
    check(v);
    return v == kRoot ? 0 : depths_[static_cast<std::size_t>(v)];
}

Vertex RecursiveTree::lca(Vertex u, Vertex w) const {
    std::size_t du = depth(u);
    std::size_t dw = depth(w);
    while (du > dw) {
        u = parents_[static_cast<std::size_t>(u)];
        --du;
    }
    while (dw > du) {
        w = parents_[static_cast<std::size_t>(w)];
        --dw;
    }
    while (u != w) {
        u = parents_[static_cast<std::size_t>(u)];
        w = parents_[static_cast<std::size_t>(w)];
    }
    return u;
}

std::size_t RecursiveTree::distance(Vertex u, Vertex w) const {
    return depth(u) + depth(w) - 2 * depth(lca(u, w));
}

std::string RecursiveTree::serialize() const {
    std::ostringstream out;
    for (std::size_t j = 0; j < parents_.size(); ++j) out << j << ' ' << parents_[j] << '\n';
    return out.str();
}

RecursiveTree RecursiveTree::parse(double root_weight, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<Vertex> parents;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        long long j = 0;
        long long p = 0;
        if (!(fields >> j >> p)) throw ParseError("expected 'j parent', got '" + line + "'");
        if (j != static_cast<long long>(parents.size())) throw ParseError("vertex indices must be consecutive from 0");
        parents.push_back(p);
    }
    return from_parents(root_weight, std::move(parents));
}

Vertex draw_parent(double t, std::size_t existing, Rng& rng) {
    const double x = rng.uniform() * (static_cast<double>(existing) + t);
    if (x < t || existing == 0) return kRoot;
    const auto i = static_cast<std::size_t>(x - t);
    return static_cast<Vertex>(std::min(i, existing - 1));
}

RecursiveTree grow_rrt(double t, std::size_t n, Rng& rng) {
    RecursiveTree tree(t);
    for (std::size_t k = 0; k <= n; ++k) tree.attach(draw_parent(t, k, rng));
    return tree;
}

std::vector<WeightedTree> enumerate_rrt(double t, int n, int cap) {
    if (n < 0) throw ConfigError("n", "must be nonnegative");
    if (n > cap) throw HorizonTooLarge(n, cap);
    if (!(t > 0.0)) throw ConfigError("t", "root weight must be positive");
    std::vector<WeightedTree> out;
    for_each_rrt(t, n, [&](const std::vector<Vertex>& parents, double prob) {
        out.push_back({RecursiveTree::from_parents(t, parents), prob});
    });
    return out;
}

}  // namespace urnlab
