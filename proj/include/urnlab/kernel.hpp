#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "urnlab/measure.hpp"

namespace urnlab {

inline constexpr double kRowSumTolerance = 1e-12;

// Tail mass tolerated when a simulation draws a row of a generator kernel.
inline constexpr double kSimulationRowTolerance = 1e-15;

// Support cap for truncated computations: URNLAB_MAX_SUPPORT if set, else 2^20.
std::size_t default_support_cap();

// A kernel row, possibly with a truncated tail. `discarded` is the mass that
// the truncation removed, so measure.total_mass() + discarded == 1.
struct TruncatedRow {
    SparseMeasure measure;
    double discarded = 0.0;
};

// From u: with probability epsilon jump to a Geometric(nu_geometric_p) color on
// {0, 1, ...}, otherwise move to u + 1.
struct ResetChainParams {
    double epsilon = 0.0;
    double nu_geometric_p = 0.0;
};

// Star graph with a loop at the root: row 0 is the probability vector p and
// every other row is the point mass at 0.
struct StarWalkParams {
    SparseMeasure p;
};

// Stochastic transition kernel over countable colors. Either an explicit finite
// row table or a named generator that produces the row of any color on demand.
// Immutable; copies share the row table.
class Kernel {
public:
    enum class Kind { explicit_finite, generator };

    // Explicit kernel with no colors; every row lookup throws UnknownColor.
    Kernel();

    // Validates every row. Throws NegativeEntry / NonStochasticRow.
    static Kernel from_rows(std::vector<SparseMeasure> rows);
    static Kernel from_dense(const std::vector<std::vector<double>>& rows);
    static Kernel reset_chain(ResetChainParams params);
    static Kernel star_walk(SparseMeasure p);

    // Builds a generator by name ("reset-chain", "star-walk") from key=value
    // parameters. Throws ConfigError on an unknown name or missing parameter.
    static Kernel generator(const std::string& name, const std::map<std::string, std::string>& params);

    Kind kind() const noexcept;
    std::string name() const;

    // Number of colors of an explicit kernel; nullopt for generators.
    std::optional<std::size_t> num_colors() const noexcept;

    // True when every row has finite support (exact enumeration is possible).
    bool has_finite_rows() const noexcept;

    // True when every row carries an exact rational shadow.
    bool is_exact() const noexcept;

    // Row of `u` with at most `mass_tol` tail mass discarded. Throws
    // UnknownColor for colors outside an explicit kernel and TruncationOverflow
    // when the truncated row would exceed the support cap.
    TruncatedRow row(Color u, double mass_tol = kSimulationRowTolerance) const;

    // The stored row for kernels with finite rows; nullptr otherwise.
    const SparseMeasure* stored_row(Color u) const;

    // Canonical text form in the kernel file format.
    std::string description() const;
    std::uint64_t description_hash() const;

    const ResetChainParams* reset_chain_params() const noexcept { return std::get_if<ResetChainParams>(rep_.get()); }
    const StarWalkParams* star_walk_params() const noexcept { return std::get_if<StarWalkParams>(rep_.get()); }

private:
    using ExplicitRows = std::vector<SparseMeasure>;
    using Rep = std::variant<ExplicitRows, ResetChainParams, StarWalkParams>;

    explicit Kernel(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

    std::shared_ptr<const Rep> rep_;
};

// Checks |sum - 1| <= kRowSumTolerance and nonnegativity for `row` of color u.
void validate_row(Color u, const SparseMeasure& row, double discarded = 0.0);

// mu * R^n with truncation. At most `mass_tol` of the mass is discarded in total
// (half to row tails, half to pruning of negligible entries).
struct Propagated {
    SparseMeasure measure;
    double discarded = 0.0;
};
Propagated propagate(const SparseMeasure& mu, const Kernel& kernel, std::size_t n, double mass_tol,
                     std::size_t support_cap = default_support_cap());

// R^n(u, .). n = 0 gives the point mass at u.
SparseMeasure n_step_row(const Kernel& kernel, Color u, std::size_t n, double mass_tol = 1e-12);

// Stationary distribution by power iteration from the uniform distribution on
// the initial support. Stops when ||mu R - mu||_1 <= tol; throws NoConvergence
// after `max_iterations`.
SparseMeasure stationary_distribution(const Kernel& kernel, double tol, std::size_t support_cap = default_support_cap(),
                                      std::size_t max_iterations = 1'000'000);

// 1e-10 for explicit kernels, 1e-8 for generators.
double default_stationary_tolerance(const Kernel& kernel);

// ||mu R - mu||_1 with rows truncated at 1e-15.
double stationary_residual(const Kernel& kernel, const SparseMeasure& mu);

}  // namespace urnlab
