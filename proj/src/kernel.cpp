#include "urnlab/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "urnlab/errors.hpp"
#include "urnlab/exact.hpp"
#include "urnlab/hash.hpp"

namespace urnlab {

namespace {

std::string shortest(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string format_weight(const SparseMeasure& row, std::size_t index) {
    if (const auto* ex = row.exact()) {
        const auto& q = ex->entries[index].second;
        if (denominator(q) == 1) return numerator(q).str();
        return numerator(q).str() + "/" + denominator(q).str();
    }
    return shortest(row.entries()[index].second);
}

const SparseMeasure& point_at_zero() {
    static const SparseMeasure delta0 = exact_measure({{0, Rational(1)}});
    return delta0;
}

// Smallest K with epsilon * (1-p)^(K+1) <= tol.
std::size_t geometric_cutoff(double epsilon, double p, double tol) {
    if (p >= 1.0 || epsilon <= tol) return 0;
    const double k = std::log(tol / epsilon) / std::log1p(-p) - 1.0;
    auto K = static_cast<std::size_t>(std::max(0.0, std::ceil(k)));
    while (K > 0 && epsilon * std::pow(1.0 - p, static_cast<double>(K)) <= tol) --K;
    while (epsilon * std::pow(1.0 - p, static_cast<double>(K + 1)) > tol) ++K;
    return K;
}

}  // namespace

std::size_t default_support_cap() {
    if (const char* env = std::getenv("URNLAB_MAX_SUPPORT")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{1} << 20;
}

void validate_row(Color u, const SparseMeasure& row, double discarded) {
    for (const auto& [v, w] : row) {
        if (w < 0.0) throw NegativeEntry(u, v);
    }
    double sum = 0.0;
    for (const auto& [v, w] : row) sum += w;
    if (std::abs(sum + discarded - 1.0) > kRowSumTolerance) throw NonStochasticRow(u, sum + discarded);
}

Kernel Kernel::from_rows(std::vector<SparseMeasure> rows) {
    for (std::size_t u = 0; u < rows.size(); ++u) validate_row(u, rows[u]);
    for (std::size_t u = 0; u < rows.size(); ++u) {
        if (!rows[u].empty() && rows[u].max_color() >= rows.size()) throw UnknownColor(rows[u].max_color());
    }
    return Kernel(std::make_shared<const Rep>(std::move(rows)));
}

Kernel Kernel::from_dense(const std::vector<std::vector<double>>& rows) {
    std::vector<SparseMeasure> sparse;
    sparse.reserve(rows.size());
    for (std::size_t u = 0; u < rows.size(); ++u) {
        for (std::size_t v = 0; v < rows[u].size(); ++v) {
            if (rows[u][v] < 0.0) throw NegativeEntry(u, v);
        }
        sparse.push_back(SparseMeasure::from_dense(rows[u]));
    }
    return from_rows(std::move(sparse));
}

Kernel Kernel::reset_chain(ResetChainParams params) {
    if (!(params.epsilon > 0.0 && params.epsilon <= 1.0)) {
        throw ConfigError("epsilon", "must lie in (0, 1]");
    }
    if (!(params.nu_geometric_p > 0.0 && params.nu_geometric_p <= 1.0)) {
        throw ConfigError("nu_geometric_p", "must lie in (0, 1]");
    }
    Kernel k(std::make_shared<const Rep>(params));
    for (Color u = 0; u < 8; ++u) {
        auto r = k.row(u, 1e-15);
        validate_row(u, r.measure, r.discarded);
    }
    return k;
}

Kernel Kernel::star_walk(SparseMeasure p) {
    validate_row(0, p);
    return Kernel(std::make_shared<const Rep>(StarWalkParams{std::move(p)}));
}

Kernel Kernel::generator(const std::string& name, const std::map<std::string, std::string>& params) {
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = params.find(key);
        if (it == params.end()) throw ConfigError(key, "missing parameter for generator '" + name + "'");
        return it->second;
    };
    if (name == "reset-chain") {
        return reset_chain({parse_real(get("epsilon")), parse_real(get("nu_geometric_p"))});
    }
    if (name == "star-walk") {
        // p=0.5,0.3,0.2 lists p_0, p_1, ...
        std::string text;
        std::istringstream in(get("p"));
        std::string item;
        Color j = 0;
        while (std::getline(in, item, ',')) {
            if (!text.empty()) text += ',';
            text += std::to_string(j++) + ":" + item;
        }
        return star_walk(SparseMeasure::parse(text));
    }
    throw ConfigError("generator", "unknown generator '" + name + "'");
}

Kernel::Kind Kernel::kind() const noexcept {
    return std::holds_alternative<ExplicitRows>(*rep_) ? Kind::explicit_finite : Kind::generator;
}

std::string Kernel::name() const {
    if (std::holds_alternative<ExplicitRows>(*rep_)) return "explicit";
    if (std::holds_alternative<ResetChainParams>(*rep_)) return "reset-chain";
    return "star-walk";
}

std::optional<std::size_t> Kernel::num_colors() const noexcept {
    if (const auto* rows = std::get_if<ExplicitRows>(rep_.get())) return rows->size();
    return std::nullopt;
}

bool Kernel::has_finite_rows() const noexcept {
    return !std::holds_alternative<ResetChainParams>(*rep_);
}

bool Kernel::is_exact() const noexcept {
    if (const auto* rows = std::get_if<ExplicitRows>(rep_.get())) {
        return std::all_of(rows->begin(), rows->end(), [](const SparseMeasure& r) { return r.is_exact(); });
    }
    if (const auto* star = std::get_if<StarWalkParams>(rep_.get())) return star->p.is_exact();
    return false;
}

const SparseMeasure* Kernel::stored_row(Color u) const {
    if (const auto* rows = std::get_if<ExplicitRows>(rep_.get())) {
        if (u >= rows->size()) throw UnknownColor(u);
        return &(*rows)[u];
    }
    if (const auto* star = std::get_if<StarWalkParams>(rep_.get())) {
        return u == 0 ? &star->p : &point_at_zero();
    }
    return nullptr;
}

TruncatedRow Kernel::row(Color u, double mass_tol) const {
    if (const auto* stored = stored_row(u)) return {*stored, 0.0};
    const auto& rc = std::get<ResetChainParams>(*rep_);
    const std::size_t K = geometric_cutoff(rc.epsilon, rc.nu_geometric_p, mass_tol);
    const std::size_t cap = default_support_cap();
    if (K + 2 > cap) throw TruncationOverflow(K + 2, cap);
    std::vector<SparseMeasure::Entry> entries;
    entries.reserve(K + 2);
    double tail = rc.epsilon;
    for (std::size_t k = 0; k <= K; ++k) {
        const double mass = tail * rc.nu_geometric_p;
        entries.emplace_back(k, mass);
        tail -= mass;
    }
    entries.emplace_back(u + 1, 1.0 - rc.epsilon);
    auto measure = SparseMeasure::from_entries(std::move(entries));
    const double discarded = rc.epsilon * std::pow(1.0 - rc.nu_geometric_p, static_cast<double>(K + 1));
    return {std::move(measure), discarded};
}

std::string Kernel::description() const {
    std::ostringstream out;
    if (const auto* rows = std::get_if<ExplicitRows>(rep_.get())) {
        out << "kernel explicit " << rows->size() << '\n';
        for (std::size_t u = 0; u < rows->size(); ++u) {
            const auto& row = (*rows)[u];
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << u << ' ' << row.entries()[i].first << ' ' << format_weight(row, i) << '\n';
            }
        }
    } else if (const auto* rc = std::get_if<ResetChainParams>(rep_.get())) {
        out << "kernel generator reset-chain epsilon=" << shortest(rc->epsilon)
            << " nu_geometric_p=" << shortest(rc->nu_geometric_p) << '\n';
    } else {
        const auto& p = std::get<StarWalkParams>(*rep_).p;
        out << "kernel generator star-walk p=";
        Color next = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (; next < p.entries()[i].first; ++next) out << "0,";
            out << format_weight(p, i);
            if (i + 1 < p.size()) out << ',';
            ++next;
        }
        out << '\n';
    }
    return out.str();
}

Kernel::Kernel() {
    static const auto empty = std::make_shared<const Rep>(ExplicitRows{});
    rep_ = empty;
}

std::uint64_t Kernel::description_hash() const { return fnv1a_64(description()); }

Propagated propagate(const SparseMeasure& mu, const Kernel& kernel, std::size_t n, double mass_tol,
                     std::size_t support_cap) {
    Propagated out{mu, 0.0};
    if (n == 0) return out;
    const double step_budget = mass_tol / static_cast<double>(2 * n);
    for (std::size_t step = 0; step < n; ++step) {
        std::vector<SparseMeasure::Entry> acc;
        for (const auto& [c, w] : out.measure) {
            if (const auto* row = kernel.stored_row(c)) {
                for (const auto& [v, r] : *row) acc.emplace_back(v, w * r);
            } else {
                auto tr = kernel.row(c, step_budget);
                out.discarded += w * tr.discarded;
                for (const auto& [v, r] : tr.measure) acc.emplace_back(v, w * r);
            }
        }
        auto next = SparseMeasure::from_entries(std::move(acc));
        out.discarded += next.prune(step_budget);
        if (next.size() > support_cap) throw TruncationOverflow(next.size(), support_cap);
        out.measure = std::move(next);
    }
    return out;
}

SparseMeasure n_step_row(const Kernel& kernel, Color u, std::size_t n, double mass_tol) {
    return propagate(SparseMeasure::point(u), kernel, n, mass_tol).measure;
}

double default_stationary_tolerance(const Kernel& kernel) {
    return kernel.kind() == Kernel::Kind::explicit_finite ? 1e-10 : 1e-8;
}

double stationary_residual(const Kernel& kernel, const SparseMeasure& mu) {
    auto next = propagate(mu, kernel, 1, 2e-15);
    return l1_distance(next.measure, mu) + next.discarded;
}

SparseMeasure stationary_distribution(const Kernel& kernel, double tol, std::size_t support_cap,
                                      std::size_t max_iterations) {
    std::vector<SparseMeasure::Entry> start;
    if (auto n = kernel.num_colors()) {
        for (Color c = 0; c < *n; ++c) start.emplace_back(c, 1.0);
    } else {
        start.emplace_back(0, 1.0);
        for (const auto& [v, w] : kernel.row(0, tol / 100.0).measure) start.emplace_back(v, 1.0);
    }
    auto mu = SparseMeasure::from_entries(std::move(start));
    mu = mu.normalized();

    // One step discards at most tol/50 (rows and pruning share the budget).
    double residual = 0.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        auto next = propagate(mu, kernel, 1, tol / 50.0, support_cap);
        residual = l1_distance(next.measure, mu) + next.discarded;
        if (residual <= tol) return mu;
        mu = next.measure.normalized();
    }
    throw NoConvergence(max_iterations, residual);
}

}  // namespace urnlab
