#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urnlab/ergodicity.hpp"
#include "urnlab/kernel.hpp"
#include "urnlab/measure.hpp"
#include "urnlab/rrt.hpp"
#include "urnlab/sequence_law.hpp"

namespace urnlab {

// ---------------------------------------------------------------------------
// Depth sums over the weighted recursive tree T_n (vertices w_0..w_n):
//   A_n(r) = E sum_u r^{d(u)},   B_n(r) = E sum_{u,w} r^{d(u,w)}  (ordered pairs).
// ---------------------------------------------------------------------------

struct GrowthSeries {
    double r = 0.0;
    double t = 0.0;
    std::vector<double> values;  // values[n], n = 0..n_max
};

// A_0 = r, A_n = (1 + r/(n+t)) A_{n-1} + t r/(n+t).
GrowthSeries a_series_recursive(double r, double t, std::size_t n_max);

// A_n = r t sum_{k=0}^n Gamma(n+1+t+r)/Gamma(n+1+t) * Gamma(k+t)/Gamma(k+1+t+r),
// evaluated in log-Gamma form.
double a_series_closed_form(double r, double t, std::size_t n);

// Same Gamma-ratio formula for every n <= n_max, sharing the prefix sums over k.
GrowthSeries a_series_closed_form_all(double r, double t, std::size_t n_max);

// B_n = (1 + 2r/(n+t)) B_{n-1} + (2 r t/(n+t)) A_{n-1} + 1 with A_{-1} = B_{-1} = 0.
GrowthSeries b_series_recursive(double r, double t, std::size_t n_max);

struct SeriesEstimate {
    double a_hat = 0.0;
    double a_se = 0.0;
    double b_hat = 0.0;
    double b_se = 0.0;
    std::size_t replicas = 0;
};

// Sample means of sum_u r^{d(u)} and sum_{u,w} r^{d(u,w)} over independently
// grown trees (distances from LCA queries), with standard errors.
SeriesEstimate mc_series_estimate(double r, double t, std::size_t n, std::size_t replicas, std::uint64_t seed);

enum class GrowthRegime { A, BHigh, BHalf, BLow };

std::string to_string(GrowthRegime regime);

// values[n] / normalizer(n) over n in [10, n_max]; normalizer is n^r (A),
// n^{2r} (B, r > 1/2), n log(n+1) (B, r = 1/2), n (B, r < 1/2).
struct GrowthReport {
    GrowthRegime regime = GrowthRegime::A;
    std::size_t n_lo = 10;
    std::size_t n_hi = 0;
    double sup_ratio = 0.0;
    double median_ratio = 0.0;
    double top_decade_max = 0.0;  // max ratio over n in [n_hi/10, n_hi]
    std::vector<double> ratios;   // ratios[i] at n = n_lo + i

    // Top-decade maximum within twice the median.
    bool bounded() const { return top_decade_max <= 2.0 * median_ratio; }
};

// Throws RegimeMismatch when r does not belong to the regime and ConfigError
// when the series is shorter than 1000.
GrowthReport growth_bound_check(const GrowthSeries& series, GrowthRegime regime);

// ---------------------------------------------------------------------------
// Covariance of colors on a fixed tree.
// ---------------------------------------------------------------------------

struct CovarianceReport {
    Vertex u = 0;
    Vertex w = 0;
    Color v = 0;
    double mc_estimate = 0.0;
    double standard_error = 0.0;
    double bound = 0.0;  // 2 C rho^{max(d(u,L), d(w,L))}
    std::size_t samples = 0;

    bool within_bound() const { return mc_estimate <= bound + 3.0 * standard_error; }
};

// Monte Carlo Cov(1{W_u = v}, 1{W_w = v}) given the tree, over `samples`
// branching chain runs on streams derived from `seed`. Throws MissingCertificate
// when `certificate` is null.
CovarianceReport conditional_covariance_mc(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0,
                                           Vertex u, Vertex w, Color v, std::size_t samples, std::uint64_t seed,
                                           const ErgodicityCertificate* certificate);

// Every unordered pair u < w of non-root vertices and every color in `colors`,
// estimated from one shared set of samples.
std::vector<CovarianceReport> conditional_covariance_all_pairs(const RecursiveTree& tree, const Kernel& kernel,
                                                               const SparseMeasure& u0, std::span<const Color> colors,
                                                               std::size_t samples, std::uint64_t seed,
                                                               const ErgodicityCertificate* certificate);

// Exact covariance on the tree from the law at the common ancestor L:
// P(W_u = v, W_w = v) = sum_s P(W_L = s) R^{d(u,L)}(s, v) R^{d(w,L)}(s, v).
double exact_conditional_covariance(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0,
                                    Vertex u, Vertex w, Color v);

// ---------------------------------------------------------------------------
// Variance of local times N_{n,v} = #{k <= n : Z_k = v}.
// ---------------------------------------------------------------------------

struct VariancePoint {
    std::size_t n = 0;
    double j_hat = 0.0;  // sample variance of N_{n,v}
    double b_n = 0.0;    // B_n(sqrt(rho))
    double ratio = 0.0;  // j_hat / b_n
    double bound = 0.0;  // calibration * b_n
};

struct VarianceCheck {
    Color v = 0;
    std::size_t replicas = 0;
    double rho = 0.0;
    double calibration = 0.0;  // max of J_hat(k) / B_k(sqrt(rho)) over the calibration window
    std::vector<VariancePoint> points;
};

// Runs `replicas` urns to the largest checkpoint and reports J_hat(n) against
// B_n(sqrt(rho)) at each checkpoint. The constant is calibrated on
// k = 1..calibration_window and reported, not asserted. Throws
// MissingCertificate when `certificate` is null.
VarianceCheck local_time_variance_check(const Kernel& kernel, const SparseMeasure& u0, Color v,
                                        std::span<const std::size_t> checkpoints, std::size_t replicas,
                                        std::uint64_t seed, const ErgodicityCertificate* certificate,
                                        std::size_t calibration_window = 10);

}  // namespace urnlab
