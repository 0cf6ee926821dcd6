#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"

namespace urnlab {

// Fitted pair (C, rho) with |R^n(u, v) - pi_v| <= C rho^n on the probed states
// and colors for every n in [n_first, n_last]. The certificate only speaks for
// its probes; it says nothing about states outside them.
struct ErgodicityCertificate {
    double C = 0.0;
    double rho = 0.0;
    std::size_t n_first = 1;
    std::size_t n_last = 0;
    std::vector<double> sup_errors;  // sup_errors[i] is e_{n_first + i}
    bool fallback_rho = false;       // no point above the fitting floor; rho is the fallback
    SparseMeasure pi;

    double bound(std::size_t n) const;
    // e_n <= C rho^n for every recorded n.
    bool dominates_evidence() const;
};

struct CertificateOptions {
    double stationary_tol = 0.0;  // 0: 1e-13 for explicit kernels, 1e-10 for generators
    double mass_tol = 1e-13;
    double floor = 1e-14;         // e_n at or below this (or the numeric noise level) is not fitted
    double fallback_rho = 0.5;
};

// e_n = max over probes of |R^n(u, v) - pi_v| for n = 1..n_max, then a least
// squares fit of log e_n against n gives rho and C = max_n e_n / rho^n.
// Throws NoDecay when e_{n_max} > e_1 / 2.
ErgodicityCertificate fit_ergodicity_certificate(const Kernel& kernel, std::span<const Color> probe_states,
                                                 std::span<const Color> probe_colors, std::size_t n_max,
                                                 const CertificateOptions& options = {});

struct DoeblinMinorization {
    std::size_t n0 = 1;
    double epsilon = 0.0;
    SparseMeasure nu;  // probability measure
};

// Color-wise infimum over the probes of R^{n0}(u, .). Returns nullopt when the
// infimum has no mass: the condition could not be verified at this n0 / probe
// set, which does not prove it fails. On success R^{n0}(u, v) >= epsilon * nu_v
// holds exactly in floating point for every probe u.
std::optional<DoeblinMinorization> check_doeblin(const Kernel& kernel, std::size_t n0,
                                                 std::span<const Color> probe_states, double mass_tol = 1e-13);

}  // namespace urnlab
