#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/sequence_law.hpp"

namespace urnlab {

// Balanced urn after `steps` draws. The configuration holds total mass
// steps + t0 (up to truncated generator tails, tracked in `discarded`).
struct UrnState {
    SparseMeasure config;
    double t0 = 0.0;
    std::size_t steps = 0;
    Kernel kernel;
    double discarded = 0.0;
};

struct UrnTrace {
    std::vector<Color> draws;                       // Z_0 .. Z_{n-1}
    std::map<Color, std::size_t> local_times;       // color -> number of draws
    UrnState final_state;
    std::uint64_t seed = 0;
};

// Throws ZeroMass when u0 has no mass.
UrnState urn_init(SparseMeasure u0, Kernel kernel);

// Draws Z_n with probability U_{n,z} / (n + t0). Does not modify the state.
Color urn_draw(const UrnState& state, Rng& rng);

// Adds the replacement row of `color` to `config`; returns the truncated tail
// mass (zero for kernels with finite rows). Shared by every process that
// reinforces with kernel rows so that coupled runs agree bit for bit.
double add_replacement_row(SparseMeasure& config, const Kernel& kernel, Color color);

// Draws Z_n, adds R_{Z_n}, increments n. Returns Z_n.
Color urn_step(UrnState& state, Rng& rng);

UrnTrace urn_run(UrnState state, std::size_t n_steps, Rng& rng);

// U_n / (n + t0).
SparseMeasure normalized_config(const UrnState& state);

// Exhaustive law of (Z_0, ..., Z_horizon). Rational when u0 and the kernel are
// exact. Throws HorizonTooLarge, InfiniteSupportReachable, ZeroMass.
SequenceLaw urn_exact_law(const SparseMeasure& u0, const Kernel& kernel, int horizon,
                          int cap = kDefaultEnumerationCap);

}  // namespace urnlab
