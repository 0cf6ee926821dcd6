#include "urnlab/urn.hpp"

#include "typed_rows.hpp"
#include "urnlab/errors.hpp"

namespace urnlab {

UrnState urn_init(SparseMeasure u0, Kernel kernel) {
    if (!(u0.total_mass() > 0.0)) throw ZeroMass();
    const double t0 = u0.total_mass();
    return UrnState{std::move(u0), t0, 0, std::move(kernel), 0.0};
}

Color urn_draw(const UrnState& state, Rng& rng) {
    return state.config.sample(rng.uniform());
}

double add_replacement_row(SparseMeasure& config, const Kernel& kernel, Color color) {
    if (const auto* row = kernel.stored_row(color)) {
        config.add(*row);
        return 0.0;
    }
    auto row = kernel.row(color, kSimulationRowTolerance);
    config.add(row.measure);
    return row.discarded;
}

Color urn_step(UrnState& state, Rng& rng) {
    const Color z = urn_draw(state, rng);
    state.discarded += add_replacement_row(state.config, state.kernel, z);
    ++state.steps;
    return z;
}

UrnTrace urn_run(UrnState state, std::size_t n_steps, Rng& rng) {
    UrnTrace trace;
    trace.seed = rng.seed();
    trace.draws.reserve(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Color z = urn_step(state, rng);
        trace.draws.push_back(z);
        ++trace.local_times[z];
    }
    trace.final_state = std::move(state);
    return trace;
}

SparseMeasure normalized_config(const UrnState& state) {
    return state.config.scaled(1.0 / (static_cast<double>(state.steps) + state.t0));
}

namespace {

template <class T>
struct UrnEnumerator {
    detail::TypedRows<T> rows;
    T t;
    int horizon;
    std::map<ColorSequence, T> atoms;
    ColorSequence seq;

    void walk(const detail::TypedMeasure<T>& config, int k, const T& prob) {
        const T total = T(k) + t;
        for (const auto& [z, w] : config) {
            const T p = prob * w / total;
            seq.push_back(z);
            if (k == horizon) {
                atoms[seq] += p;
            } else {
                auto next = config;
                detail::add_into(next, rows.get(z));
                walk(next, k + 1, p);
            }
            seq.pop_back();
        }
    }
};

template <class T>
std::map<ColorSequence, T> enumerate_urn(const SparseMeasure& u0, const Kernel& kernel, int horizon) {
    auto start = detail::typed<T>(u0);
    UrnEnumerator<T> e{detail::TypedRows<T>(kernel), detail::total_of(start), horizon, {}, {}};
    e.walk(start, 0, T(1));
    return std::move(e.atoms);
}

}  // namespace

SequenceLaw urn_exact_law(const SparseMeasure& u0, const Kernel& kernel, int horizon, int cap) {
    if (horizon < 0) throw ConfigError("horizon", "must be nonnegative");
    if (horizon > cap) throw HorizonTooLarge(horizon, cap);
    if (!kernel.has_finite_rows()) throw InfiniteSupportReachable();
    if (!(u0.total_mass() > 0.0)) throw ZeroMass();

    SequenceLaw law;
    law.horizon = horizon;
    if (u0.is_exact() && kernel.is_exact()) {
        auto exact = enumerate_urn<Rational>(u0, kernel, horizon);
        for (const auto& [seq, q] : exact) law.atoms[seq] = to_double(q);
        law.exact_atoms = std::move(exact);
    } else {
        law.atoms = enumerate_urn<double>(u0, kernel, horizon);
    }
    return law;
}

}  // namespace urnlab
