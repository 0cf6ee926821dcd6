#include "urnlab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "urnlab/bmc.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/replicas.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

namespace {

void check_rt(double r, double t) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("r", "must lie in (0, 1)");
    if (!(t > 0.0)) throw ConfigError("t", "must be positive");
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    double variance = 0.0;  // unbiased sample variance
};

MeanSe mean_se(std::span<const double> xs) {
    MeanSe out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    out.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.variance = ss / (n - 1.0);
        out.se = std::sqrt(out.variance / n);
    }
    return out;
}

}  // namespace

GrowthSeries a_series_recursive(double r, double t, std::size_t n_max) {
    check_rt(r, t);
    GrowthSeries s{r, t, std::vector<double>(n_max + 1)};
    s.values[0] = r;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double nt = static_cast<double>(n) + t;
        s.values[n] = (1.0 + r / nt) * s.values[n - 1] + t * r / nt;
    }
    return s;
}

double a_series_closed_form(double r, double t, std::size_t n) {
    check_rt(r, t);
    const double N = static_cast<double>(n);
    const double head = std::lgamma(N + 1.0 + t + r) - std::lgamma(N + 1.0 + t);
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double K = static_cast<double>(k);
        sum += std::exp(head + std::lgamma(K + t) - std::lgamma(K + 1.0 + t + r));
    }
    return r * t * sum;
}

GrowthSeries a_series_closed_form_all(double r, double t, std::size_t n_max) {
    check_rt(r, t);
    GrowthSeries s{r, t, std::vector<double>(n_max + 1)};
    double prefix = 0.0;  // sum_{k<=n} Gamma(k+t)/Gamma(k+1+t+r)
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double N = static_cast<double>(n);
        prefix += std::exp(std::lgamma(N + t) - std::lgamma(N + 1.0 + t + r));
        s.values[n] = r * t * std::exp(std::lgamma(N + 1.0 + t + r) - std::lgamma(N + 1.0 + t)) * prefix;
    }
    return s;
}

GrowthSeries b_series_recursive(double r, double t, std::size_t n_max) {
    check_rt(r, t);
    const auto a = a_series_recursive(r, t, n_max);
    GrowthSeries s{r, t, std::vector<double>(n_max + 1)};
    double prev_b = 0.0;
    double prev_a = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double nt = static_cast<double>(n) + t;
        s.values[n] = (1.0 + 2.0 * r / nt) * prev_b + (2.0 * r * t / nt) * prev_a + 1.0;
        prev_b = s.values[n];
        prev_a = a.values[n];
    }
    return s;
}

SeriesEstimate mc_series_estimate(double r, double t, std::size_t n, std::size_t replicas, std::uint64_t seed) {
    check_rt(r, t);
    if (replicas < 100) throw ConfigError("replicas", "need at least 100");
    std::vector<double> powers(2 * n + 3);
    powers[0] = 1.0;
    for (std::size_t i = 1; i < powers.size(); ++i) powers[i] = powers[i - 1] * r;

    struct Sums {
        double a = 0.0;
        double b = 0.0;
    };
    auto sums = run_replicas<Sums>(replicas, seed, [&](std::size_t, Rng& rng) {
        const auto tree = grow_rrt(t, n, rng);
        Sums s;
        const auto m = static_cast<Vertex>(tree.size());
        for (Vertex u = 0; u < m; ++u) {
            s.a += powers[tree.depth(u)];
            s.b += 1.0;
            for (Vertex w = u + 1; w < m; ++w) s.b += 2.0 * powers[tree.distance(u, w)];
        }
        return s;
    });

    std::vector<double> as, bs;
    as.reserve(replicas);
    bs.reserve(replicas);
    for (const auto& s : sums) {
        as.push_back(s.a);
        bs.push_back(s.b);
    }
    const auto ma = mean_se(as);
    const auto mb = mean_se(bs);
    return {ma.mean, ma.se, mb.mean, mb.se, replicas};
}

std::string to_string(GrowthRegime regime) {
    switch (regime) {
        case GrowthRegime::A: return "A";
        case GrowthRegime::BHigh: return "B-high";
        case GrowthRegime::BHalf: return "B-half";
        case GrowthRegime::BLow: return "B-low";
    }
    return "?";
}

GrowthReport growth_bound_check(const GrowthSeries& series, GrowthRegime regime) {
    const double r = series.r;
    switch (regime) {
        case GrowthRegime::A: break;
        case GrowthRegime::BHigh:
            if (!(r > 0.5)) throw RegimeMismatch("B-high needs r > 1/2");
            break;
        case GrowthRegime::BHalf:
            if (std::abs(r - 0.5) > 1e-12) throw RegimeMismatch("B-half needs r = 1/2");
            break;
        case GrowthRegime::BLow:
            if (!(r < 0.5)) throw RegimeMismatch("B-low needs r < 1/2");
            break;
    }
    if (series.values.size() < 1001) throw ConfigError("series", "needs n_max >= 1000");

    GrowthReport report;
    report.regime = regime;
    report.n_hi = series.values.size() - 1;
    for (std::size_t n = report.n_lo; n <= report.n_hi; ++n) {
        const double N = static_cast<double>(n);
        double norm = 1.0;
        switch (regime) {
            case GrowthRegime::A: norm = std::pow(N, r); break;
            case GrowthRegime::BHigh: norm = std::pow(N, 2.0 * r); break;
            case GrowthRegime::BHalf: norm = N * std::log(N + 1.0); break;
            case GrowthRegime::BLow: norm = N; break;
        }
        const double ratio = series.values[n] / norm;
        report.ratios.push_back(ratio);
        report.sup_ratio = std::max(report.sup_ratio, ratio);
        if (n * 10 >= report.n_hi) report.top_decade_max = std::max(report.top_decade_max, ratio);
    }
    auto sorted = report.ratios;
    const auto mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    report.median_ratio = sorted[mid];
    return report;
}

namespace {

double lca_bound(const RecursiveTree& tree, const ErgodicityCertificate& cert, Vertex u, Vertex w) {
    const Vertex l = tree.lca(u, w);
    const std::size_t du = tree.depth(u) - tree.depth(l);
    const std::size_t dw = tree.depth(w) - tree.depth(l);
    return 2.0 * cert.bound(std::max(du, dw));
}

// samples x vertices color matrix, row-major.
std::vector<Color> sample_colorings(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0,
                                    std::size_t samples, std::uint64_t seed) {
    const std::size_t m = tree.size();
    auto runs = run_replicas<std::vector<Color>>(
        samples, seed, [&](std::size_t, Rng& rng) { return bmc_run(tree, kernel, u0, rng).colors; });
    std::vector<Color> matrix(samples * m);
    for (std::size_t i = 0; i < samples; ++i) std::copy(runs[i].begin(), runs[i].end(), matrix.begin() + i * m);
    return matrix;
}

CovarianceReport covariance_from_samples(const std::vector<Color>& matrix, std::size_t m, std::size_t samples,
                                         Vertex u, Vertex w, Color v, double bound) {
    const auto ui = static_cast<std::size_t>(u);
    const auto wi = static_cast<std::size_t>(w);
    double su = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        su += matrix[i * m + ui] == v ? 1.0 : 0.0;
        sw += matrix[i * m + wi] == v ? 1.0 : 0.0;
    }
    const double N = static_cast<double>(samples);
    const double mu = su / N;
    const double mw = sw / N;
    std::vector<double> products(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = (matrix[i * m + ui] == v ? 1.0 : 0.0) - mu;
        const double y = (matrix[i * m + wi] == v ? 1.0 : 0.0) - mw;
        products[i] = x * y;
    }
    const auto stats = mean_se(products);
    CovarianceReport rep;
    rep.u = u;
    rep.w = w;
    rep.v = v;
    rep.mc_estimate = stats.mean * N / (N - 1.0);
    rep.standard_error = stats.se;
    rep.bound = bound;
    rep.samples = samples;
    return rep;
}

}  // namespace

CovarianceReport conditional_covariance_mc(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0,
                                           Vertex u, Vertex w, Color v, std::size_t samples, std::uint64_t seed,
                                           const ErgodicityCertificate* certificate) {
    if (certificate == nullptr) throw MissingCertificate();
    if (u == kRoot || !tree.contains(u)) throw UnknownVertex(u);
    if (w == kRoot || !tree.contains(w)) throw UnknownVertex(w);
    if (samples < 2) throw ConfigError("samples", "need at least 2");
    const auto matrix = sample_colorings(tree, kernel, u0, samples, seed);
    return covariance_from_samples(matrix, tree.size(), samples, u, w, v, lca_bound(tree, *certificate, u, w));
}

std::vector<CovarianceReport> conditional_covariance_all_pairs(const RecursiveTree& tree, const Kernel& kernel,
                                                               const SparseMeasure& u0, std::span<const Color> colors,
                                                               std::size_t samples, std::uint64_t seed,
                                                               const ErgodicityCertificate* certificate) {
    if (certificate == nullptr) throw MissingCertificate();
    if (samples < 2) throw ConfigError("samples", "need at least 2");
    const auto matrix = sample_colorings(tree, kernel, u0, samples, seed);
    const std::size_t m = tree.size();
    std::vector<CovarianceReport> out;
    for (Vertex u = 0; u < static_cast<Vertex>(m); ++u) {
        for (Vertex w = u + 1; w < static_cast<Vertex>(m); ++w) {
            const double bound = lca_bound(tree, *certificate, u, w);
            for (Color v : colors) out.push_back(covariance_from_samples(matrix, m, samples, u, w, v, bound));
        }
    }
    return out;
}

double exact_conditional_covariance(const RecursiveTree& tree, const Kernel& kernel, const SparseMeasure& u0,
                                    Vertex u, Vertex w, Color v) {
    if (u == kRoot) throw UnknownVertex(u);
    if (w == kRoot) throw UnknownVertex(w);
    const Vertex l = tree.lca(u, w);
    // Distinct children of the root color their subtrees independently.
    if (l == kRoot) return 0.0;
    const auto at_l = bmc_vertex_marginal(tree, kernel, u0, l);
    const std::size_t du = tree.depth(u) - tree.depth(l);
    const std::size_t dw = tree.depth(w) - tree.depth(l);
    double joint = 0.0, pu = 0.0, pw = 0.0;
    for (const auto& [s, ps] : at_l) {
        const double ru = n_step_row(kernel, s, du).at(v);
        const double rw = n_step_row(kernel, s, dw).at(v);
        joint += ps * ru * rw;
        pu += ps * ru;
        pw += ps * rw;
    }
    return joint - pu * pw;
}

VarianceCheck local_time_variance_check(const Kernel& kernel, const SparseMeasure& u0, Color v,
                                        std::span<const std::size_t> checkpoints, std::size_t replicas,
                                        std::uint64_t seed, const ErgodicityCertificate* certificate,
                                        std::size_t calibration_window) {
    if (certificate == nullptr) throw MissingCertificate();
    if (replicas < 2) throw ConfigError("replicas", "need at least 2");
    if (calibration_window < 1) throw ConfigError("calibration_window", "must be at least 1");

    // Recorded times: 1..window, then the checkpoints.
    std::vector<std::size_t> times;
    for (std::size_t k = 1; k <= calibration_window; ++k) times.push_back(k);
    times.insert(times.end(), checkpoints.begin(), checkpoints.end());
    const std::size_t n_max = *std::max_element(times.begin(), times.end());

    auto counts = run_replicas<std::vector<double>>(replicas, seed, [&](std::size_t, Rng& rng) {
        auto state = urn_init(u0, kernel);
        std::vector<std::size_t> n_at(n_max + 1);
        std::size_t count = 0;
        for (std::size_t k = 0; k <= n_max; ++k) {
            if (urn_step(state, rng) == v) ++count;
            n_at[k] = count;
        }
        std::vector<double> out;
        out.reserve(times.size());
        for (auto k : times) out.push_back(static_cast<double>(n_at[k]));
        return out;
    });

    const double r = std::sqrt(certificate->rho);
    const auto b = b_series_recursive(r, u0.total_mass(), n_max);

    auto j_hat_at = [&](std::size_t idx) {
        std::vector<double> xs;
        xs.reserve(replicas);
        for (const auto& c : counts) xs.push_back(c[idx]);
        return mean_se(xs).variance;
    };

    VarianceCheck out;
    out.v = v;
    out.replicas = replicas;
    out.rho = certificate->rho;
    for (std::size_t i = 0; i < calibration_window; ++i) {
        out.calibration = std::max(out.calibration, j_hat_at(i) / b.values[times[i]]);
    }
    for (std::size_t i = calibration_window; i < times.size(); ++i) {
        VariancePoint p;
        p.n = times[i];
        p.j_hat = j_hat_at(i);
        p.b_n = b.values[p.n];
        p.ratio = p.j_hat / p.b_n;
        p.bound = out.calibration * p.b_n;
        out.points.push_back(p);
    }
    return out;
}

}  // namespace urnlab
