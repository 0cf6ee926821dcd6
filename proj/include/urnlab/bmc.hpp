#pragma once

#include <string>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/rrt.hpp"
#include "urnlab/sequence_law.hpp"

namespace urnlab {

// Colors W_0 .. W_n of the non-root vertices. The root's placeholder state is
// never stored: it is not a color.
struct BMCTrace {
    std::vector<Color> colors;

    // vertex_index,parent_index,depth,color
    std::string to_csv(const RecursiveTree& tree) const;
};

// Colors vertices in index order: children of the root draw from u0 / t,
// every other vertex from the kernel row of its parent's color.
BMCTrace bmc_run(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0, Rng& rng);

// Law of W_u given the tree: (u0 / t) R^{d(u) - 1}. Children of the root draw
// from u0 / t directly, and each further generation applies one kernel step.
SparseMeasure bmc_vertex_marginal(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0, Vertex u,
                                  double mass_tol = 1e-12);

// Law of (W_0, ..., W_horizon) averaged over the weighted recursive tree with
// root weight t = u0.total_mass(). Rational when u0 and the kernel are exact.
SequenceLaw bmc_exact_law(const SparseMeasure& u0, const Kernel& kernel, int horizon,
                          int cap = kDefaultEnumerationCap);

}  // namespace urnlab
