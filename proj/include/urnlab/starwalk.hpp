#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/rng.hpp"

namespace urnlab {

// Vertex-reinforced walk on the star graph v_0, v_1, ... with a loop at v_0.
//
// From v_0 the walker picks v_j with probability proportional to the current
// weights (j = 0 means taking the loop). From v_j, j >= 1, it returns to v_0.
// Every arrival at v_0 along an edge (v_j, v_0), loop included, adds the row
// alpha_j to the weights; these are the update times.
struct StarWalkState {
    SparseMeasure weights;       // Delta_{n, .}
    Color position = 0;
    std::size_t step = 0;        // n
    std::size_t updates = 0;     // updates completed so far
    std::size_t last_update = 0; // time of the latest update (sigma_updates)
    Kernel alpha;                // row j = alpha_j
    SparseMeasure delta0;
    double delta = 0.0;          // total initial weight
    double discarded = 0.0;      // truncated tail mass of generator rows
};

// Throws ZeroMass and NonStochasticRow.
StarWalkState star_walk_init(SparseMeasure delta0, Kernel alpha);

struct StarStep {
    Color position;
    bool updated = false;
    Color reinforced = 0;  // j of the alpha_j added when updated
};

// One move of the walker. Consumes one uniform variate per departure from v_0
// and none on a return to v_0.
StarStep star_walk_step(StarWalkState& state, Rng& rng);

struct WeightSnapshot {
    std::size_t n = 0;
    SparseMeasure weights;
};

struct WalkTrace {
    std::vector<Color> positions;          // X_{n0+1} .. X_{n0+n_steps}
    std::vector<std::size_t> update_times; // sigma_1, sigma_2, ... (absolute times)
    std::vector<std::uint8_t> y_increments;// Y_k = sigma_k - sigma_{k-1}, sigma_0 = 0
    std::vector<Color> reinforced;         // j of the k-th update (the coupled urn's Z_{k-1})
    std::vector<WeightSnapshot> snapshots;

    // sigma_k; sigma_0 = 0.
    std::size_t sigma(std::size_t k) const;
    // Number of Y_i = 1 among Y_1..Y_k.
    std::size_t sigma_tilde(std::size_t k) const;
    // m(n) = sup{k : sigma_k <= n}.
    std::size_t m(std::size_t n) const;
};

// Advances the walk by n_steps. Update times are recorded from the start of the
// walk so a trace of a fresh state covers sigma_1 onward. When snapshot_every > 0
// the weights are recorded at every time divisible by it and at the end.
WalkTrace star_walk_run(StarWalkState& state, std::size_t n_steps, Rng& rng, std::size_t snapshot_every = 0);

// Runs until `n_updates` updates have happened.
WalkTrace star_walk_run_updates(StarWalkState& state, std::size_t n_updates, Rng& rng);

struct StarLimits {
    double sigma_limit = 0.0;     // 2 - pi_0
    SparseMeasure weight_limits;  // pi_j / (2 - pi_0)
};

StarLimits star_limits(const SparseMeasure& pi);

}  // namespace urnlab
