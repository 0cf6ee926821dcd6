#include "urnlab/starwalk.hpp"

#include <algorithm>

#include "urnlab/errors.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

StarWalkState star_walk_init(SparseMeasure delta0, Kernel alpha) {
    if (!(delta0.total_mass() > 0.0)) throw ZeroMass();
    // Rows of explicit kernels were validated on construction; probe the rows
    // the walk can reach first.
    for (const auto& [j, w] : delta0) {
        auto row = alpha.row(j, kSimulationRowTolerance);
        validate_row(j, row.measure, row.discarded);
    }
    StarWalkState s;
    s.weights = delta0;
    s.delta = delta0.total_mass();
    s.delta0 = std::move(delta0);
    s.alpha = std::move(alpha);
    return s;
}

StarStep star_walk_step(StarWalkState& state, Rng& rng) {
    ++state.step;
    Color reinforced = 0;
    if (state.position == 0) {
        const Color j = state.weights.sample(rng.uniform());
        if (j != 0) {
            state.position = j;
            return {j, false, 0};
        }
        reinforced = 0;  // the loop (v_0, v_0)
    } else {
        reinforced = state.position;
        state.position = 0;
    }
    state.discarded += add_replacement_row(state.weights, state.alpha, reinforced);
    ++state.updates;
    state.last_update = state.step;
    return {0, true, reinforced};
}

namespace {

void record(WalkTrace& trace, const StarWalkState& state, const StarStep& s, std::size_t previous_update) {
    trace.positions.push_back(s.position);
    if (s.updated) {
        trace.update_times.push_back(state.step);
        trace.y_increments.push_back(static_cast<std::uint8_t>(state.step - previous_update));
        trace.reinforced.push_back(s.reinforced);
    }
}

}  // namespace

WalkTrace star_walk_run(StarWalkState& state, std::size_t n_steps, Rng& rng, std::size_t snapshot_every) {
    WalkTrace trace;
    trace.positions.reserve(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const std::size_t previous_update = state.last_update;
        const auto s = star_walk_step(state, rng);
        record(trace, state, s, previous_update);
        if (snapshot_every > 0 && (state.step % snapshot_every == 0 || i + 1 == n_steps)) {
            trace.snapshots.push_back({state.step, state.weights});
        }
    }
    return trace;
}

WalkTrace star_walk_run_updates(StarWalkState& state, std::size_t n_updates, Rng& rng) {
    WalkTrace trace;
    const std::size_t target = state.updates + n_updates;
    while (state.updates < target) {
        const std::size_t previous_update = state.last_update;
        const auto s = star_walk_step(state, rng);
        record(trace, state, s, previous_update);
    }
    return trace;
}

std::size_t WalkTrace::sigma(std::size_t k) const {
    if (k == 0) return 0;
    if (k > update_times.size()) throw ConfigError("k", "beyond the recorded updates");
    return update_times[k - 1];
}

std::size_t WalkTrace::sigma_tilde(std::size_t k) const {
    if (k > y_increments.size()) throw ConfigError("k", "beyond the recorded updates");
    return static_cast<std::size_t>(std::count(y_increments.begin(), y_increments.begin() + static_cast<std::ptrdiff_t>(k),
                                               std::uint8_t{1}));
}

std::size_t WalkTrace::m(std::size_t n) const {
    return static_cast<std::size_t>(std::upper_bound(update_times.begin(), update_times.end(), n) -
                                    update_times.begin());
}

StarLimits star_limits(const SparseMeasure& pi) {
    const double denom = 2.0 - pi.at(0);
    return {denom, pi.scaled(1.0 / denom)};
}

}  // namespace urnlab
