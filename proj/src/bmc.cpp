#include "urnlab/bmc.hpp"

#include <sstream>

#include "typed_rows.hpp"
#include "urnlab/errors.hpp"

namespace urnlab {

std::string BMCTrace::to_csv(const RecursiveTree& tree) const {
    std::ostringstream out;
    out << "vertex_index,parent_index,depth,color\n";
    for (std::size_t j = 0; j < colors.size(); ++j) {
        const auto v = static_cast<Vertex>(j);
        out << j << ',' << tree.parent(v) << ',' << tree.depth(v) << ',' << colors[j] << '\n';
    }
    return out.str();
}

BMCTrace bmc_run(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0, Rng& rng) {
    if (!(u0.total_mass() > 0.0)) throw ZeroMass();
    BMCTrace trace;
    trace.colors.reserve(tree.size());
    const auto parents = tree.parents();
    for (std::size_t j = 0; j < parents.size(); ++j) {
        const double u = rng.uniform();
        if (parents[j] == kRoot) {
            trace.colors.push_back(u0.sample(u));
            continue;
        }
        const Color parent_color = trace.colors[static_cast<std::size_t>(parents[j])];
        if (const auto* row = kernel.stored_row(parent_color)) {
            trace.colors.push_back(row->sample(u));
        } else {
            trace.colors.push_back(kernel.row(parent_color, kSimulationRowTolerance).measure.sample(u));
        }
    }
    return trace;
}

SparseMeasure bmc_vertex_marginal(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0, Vertex u,
                                  double mass_tol) {
    if (u == kRoot) throw UnknownVertex(u);
    const std::size_t d = tree.depth(u);
    return propagate(u0.normalized(), kernel, d - 1, mass_tol).measure;
}

namespace {

template <class T>
std::map<ColorSequence, T> enumerate_bmc(const SparseMeasure& u0, const Kernel& kernel, int horizon) {
    const auto start = detail::typed<T>(u0);
    const T t = detail::total_of(start);
    detail::TypedRows<T> rows(kernel);
    std::map<ColorSequence, T> atoms;
    ColorSequence colors;

    for_each_rrt(t, horizon, [&](const std::vector<Vertex>& parents, const T& tree_prob) {
        auto color_next = [&](auto&& self, std::size_t j, const T& prob) -> void {
            if (j == parents.size()) {
                atoms[colors] += prob;
                return;
            }
            if (parents[j] == kRoot) {
                for (const auto& [z, w] : start) {
                    colors.push_back(z);
                    self(self, j + 1, prob * w / t);
                    colors.pop_back();
                }
            } else {
                for (const auto& [z, w] : rows.get(colors[static_cast<std::size_t>(parents[j])])) {
                    colors.push_back(z);
                    self(self, j + 1, prob * w);
                    colors.pop_back();
                }
            }
        };
        color_next(color_next, 0, tree_prob);
    });
    return atoms;
}

}  // namespace

SequenceLaw bmc_exact_law(const SparseMeasure& u0, const Kernel& kernel, int horizon, int cap) {
    if (horizon < 0) throw ConfigError("horizon", "must be nonnegative");
    if (horizon > cap) throw HorizonTooLarge(horizon, cap);
    if (!kernel.has_finite_rows()) throw InfiniteSupportReachable();
    if (!(u0.total_mass() > 0.0)) throw ZeroMass();

    SequenceLaw law;
    law.horizon = horizon;
    if (u0.is_exact() && kernel.is_exact()) {
        auto exact = enumerate_bmc<Rational>(u0, kernel, horizon);
        for (const auto& [seq, q] : exact) law.atoms[seq] = to_double(q);
        law.exact_atoms = std::move(exact);
    } else {
        law.atoms = enumerate_bmc<double>(u0, kernel, horizon);
    }
    return law;
}

}  // namespace urnlab
