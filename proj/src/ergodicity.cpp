#include "urnlab/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urnlab/errors.hpp"

namespace urnlab {

double ErgodicityCertificate::bound(std::size_t n) const {
    return C * std::pow(rho, static_cast<double>(n));
}

bool ErgodicityCertificate::dominates_evidence() const {
    for (std::size_t i = 0; i < sup_errors.size(); ++i) {
        if (sup_errors[i] > bound(n_first + i)) return false;
    }
    return true;
}

ErgodicityCertificate fit_ergodicity_certificate(const Kernel& kernel, std::span<const Color> probe_states,
                                                 std::span<const Color> probe_colors, std::size_t n_max,
                                                 const CertificateOptions& options) {
    if (n_max < 4) throw ConfigError("n_max", "must be at least 4");
    if (probe_states.empty() || probe_colors.empty()) throw ConfigError("probes", "probe sets must be nonempty");

    const bool is_explicit = kernel.kind() == Kernel::Kind::explicit_finite;
    const double stationary_tol =
        options.stationary_tol > 0.0 ? options.stationary_tol : (is_explicit ? 1e-13 : 1e-10);

    ErgodicityCertificate cert;
    cert.pi = stationary_distribution(kernel, stationary_tol);
    cert.n_first = 1;
    cert.n_last = n_max;
    cert.sup_errors.assign(n_max, 0.0);

    // Each R^n row is exact up to mass_tol and pi up to ~stationary_tol; smaller
    // deviations are numerical noise.
    const double fit_floor = std::max(options.floor, 10.0 * (stationary_tol + options.mass_tol));

    for (Color u : probe_states) {
        auto mu = SparseMeasure::point(u);
        double discarded = 0.0;
        const double per_step = options.mass_tol / static_cast<double>(n_max);
        for (std::size_t n = 1; n <= n_max; ++n) {
            auto next = propagate(mu, kernel, 1, per_step);
            discarded += next.discarded;
            mu = std::move(next.measure);
            for (Color v : probe_colors) {
                const double e = std::abs(mu.at(v) - cert.pi.at(v));
                cert.sup_errors[n - 1] = std::max(cert.sup_errors[n - 1], e);
            }
        }
    }

    const double first = cert.sup_errors.front();
    const double last = cert.sup_errors.back();
    if (last > fit_floor && last > first / 2.0) throw NoDecay(first, last);

    // Least squares of log e_n on n over the points above the floor.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double e = cert.sup_errors[n - 1];
        if (e <= fit_floor) continue;
        const double x = static_cast<double>(n);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double c = static_cast<double>(count);
        const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
        cert.rho = std::exp(slope);
        if (!(cert.rho < 1.0)) throw NoDecay(first, last);
    } else {
        cert.rho = options.fallback_rho;
        cert.fallback_rho = true;
    }

    double c_max = options.floor;
    for (std::size_t n = 1; n <= n_max; ++n) {
        c_max = std::max(c_max, cert.sup_errors[n - 1] / std::pow(cert.rho, static_cast<double>(n)));
    }
    cert.C = c_max;
    // Nudge C upward until the stored evidence is dominated in floating point.
    while (!cert.dominates_evidence()) {
        cert.C = std::nextafter(cert.C, std::numeric_limits<double>::infinity());
    }
    return cert;
}

std::optional<DoeblinMinorization> check_doeblin(const Kernel& kernel, std::size_t n0,
                                                 std::span<const Color> probe_states, double mass_tol) {
    if (n0 < 1) throw ConfigError("n0", "must be at least 1");
    if (probe_states.empty()) throw ConfigError("probes", "probe set must be nonempty");

    std::vector<SparseMeasure> rows;
    rows.reserve(probe_states.size());
    for (Color u : probe_states) rows.push_back(n_step_row(kernel, u, n0, mass_tol));

    std::vector<SparseMeasure::Entry> inf;
    for (const auto& [v, w] : rows.front()) {
        double m = w;
        for (std::size_t i = 1; i < rows.size() && m > 0.0; ++i) m = std::min(m, rows[i].at(v));
        if (m > 0.0) inf.emplace_back(v, m);
    }
    auto infimum = SparseMeasure::from_entries(std::move(inf));
    const double epsilon = infimum.total_mass();
    if (!(epsilon > 0.0)) return std::nullopt;

    std::vector<SparseMeasure::Entry> nu;
    for (const auto& [v, m] : infimum) {
        double x = m / epsilon;
        while (epsilon * x > m) x = std::nextafter(x, 0.0);
        nu.emplace_back(v, x);
    }
    // Rounding the entries down keeps eps * nu below the rows; the sum can still
    // land an ulp above one, so trim the largest entry.
    auto largest = std::max_element(nu.begin(), nu.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    for (;;) {
        double total = 0.0;
        for (const auto& e : nu) total += e.second;
        if (total <= 1.0) break;
        largest->second = std::nextafter(largest->second, 0.0);
    }
    return DoeblinMinorization{n0, epsilon, SparseMeasure::from_entries(std::move(nu))};
}

}  // namespace urnlab
