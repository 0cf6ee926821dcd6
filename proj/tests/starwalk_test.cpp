#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/replicas.hpp"
#include "urnlab/starwalk.hpp"
#include "urnlab/urn.hpp"

using namespace urnlab;
using testing::m;

namespace {

Kernel example_rows() { return Kernel::star_walk(m("0:0.5,1:0.3,2:0.2")); }

}  // namespace

TEST_SUITE("starwalk") {

TEST_CASE("init") {
    auto s = star_walk_init(m("0:1"), example_rows());
    CHECK(s.position == 0);
    CHECK(s.delta == 1.0);
    CHECK(s.step == 0);
    CHECK_THROWS_AS(star_walk_init(m(""), example_rows()), ZeroMass);
    CHECK_THROWS_AS(star_walk_init(m("0:1"), Kernel::from_dense({{0.5, 0.5}, {0.9, 0.0}})), NonStochasticRow);
}

TEST_CASE("from a leaf the walker returns and reinforces that leaf's row") {
    auto s = star_walk_init(m("0:1,1:1"), example_rows());
    s.position = 1;
    Rng a(3), b(3);
    auto step = star_walk_step(s, a);
    CHECK(step.position == 0);
    CHECK(step.updated);
    CHECK(step.reinforced == 1);
    CHECK(s.weights == m("0:2,1:1"));
    CHECK(s.updates == 1);
    CHECK(a.uniform() == b.uniform());  // no variate consumed
}

TEST_CASE("the loop at the root is taken in proportion to its weight") {
    const std::size_t n = 100000;
    auto loops = run_replicas<int>(n, 4, [](std::size_t, Rng& rng) {
        auto s = star_walk_init(m("0:2,1:1,2:1"), example_rows());
        return star_walk_step(s, rng).position == 0 ? 1 : 0;
    });
    std::size_t hits = 0;
    for (int l : loops) hits += static_cast<std::size_t>(l);
    CHECK(testing::within_binomial(hits, n, 0.5));
}

TEST_CASE("first step follows the initial weights") {
    const std::size_t n = 100000;
    auto firsts = run_replicas<Color>(n, 5, [](std::size_t, Rng& rng) {
        auto s = star_walk_init(m("0:1,1:2,2:1"), example_rows());
        return star_walk_step(s, rng).position;
    });
    for (auto [j, p] : {std::pair{Color{0}, 0.25}, std::pair{Color{1}, 0.5}, std::pair{Color{2}, 0.25}})
        CHECK(testing::within_binomial(static_cast<std::size_t>(std::count(firsts.begin(), firsts.end(), j)), n, p));
}

TEST_CASE("unit mass per update and trace identities") {
    auto s = star_walk_init(m("0:0.5,2:0.5"), example_rows());
    Rng rng(6);
    double mass = s.weights.total_mass();
    std::size_t updates = 0;
    for (int i = 0; i < 5000; ++i) {
        auto step = star_walk_step(s, rng);
        if (step.updated) {
            ++updates;
            CHECK(std::abs(s.weights.total_mass() - mass - 1.0) <= 1e-12);
            mass = s.weights.total_mass();
        } else {
            CHECK(s.weights.total_mass() == mass);
        }
    }
    CHECK(s.updates == updates);

    auto fresh = star_walk_init(m("0:1"), example_rows());
    auto trace = star_walk_run(fresh, 20000, rng);
    CHECK(trace.positions.size() == 20000);
    const std::size_t k_max = trace.update_times.size();
    CHECK(k_max == fresh.updates);
    for (auto y : trace.y_increments) CHECK((y == 1 || y == 2));
    for (std::size_t k = 0; k <= k_max; ++k) {
        const std::size_t tilde = trace.sigma_tilde(k);
        CHECK(trace.sigma(k) == tilde + 2 * (k - tilde));
        CHECK(trace.m(trace.sigma(k)) == k);
    }
    CHECK_THROWS_AS(trace.sigma(k_max + 1), ConfigError);
}

TEST_CASE("snapshots") {
    auto s = star_walk_init(m("0:1"), example_rows());
    Rng rng(7);
    auto trace = star_walk_run(s, 1005, rng, 100);
    REQUIRE(trace.snapshots.size() == 11);
    CHECK(trace.snapshots[0].n == 100);
    CHECK(trace.snapshots.back().n == 1005);
    CHECK(trace.snapshots.back().weights == s.weights);
}

TEST_CASE("weights at update times are the urn configurations") {
    const auto alpha = example_rows();
    Rng walk_rng(2024), urn_rng(2024);
    auto w = star_walk_init(m("0:1"), alpha);
    auto u = urn_init(m("0:1"), alpha);
    std::size_t zeros = 0;
    for (std::size_t k = 1; k <= 10000; ++k) {
        auto one = star_walk_run_updates(w, 1, walk_rng);
        const Color z = urn_step(u, urn_rng);
        zeros += z == 0;
        REQUIRE(one.reinforced.back() == z);
        REQUIRE(w.weights == u.config);
        REQUIRE(w.updates == k);
        // sigma-tilde counts loops, the urn's local time at color 0.
        REQUIRE((one.y_increments.back() == 1) == (z == 0));
    }
    CHECK(zeros > 0);
}

TEST_CASE("coupled loop count equals the urn's local time at the root color") {
    const auto alpha = Kernel::star_walk(m("0:0.3,1:0.3,3:0.4"));
    Rng walk_rng(5), urn_rng(5);
    auto w = star_walk_init(m("0:0.5,3:1"), alpha);
    auto trace = star_walk_run_updates(w, 3000, walk_rng);
    auto urn = urn_run(urn_init(m("0:0.5,3:1"), alpha), 3000, urn_rng);
    for (std::size_t k : {1u, 10u, 500u, 3000u}) {
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < k; ++i) zeros += urn.draws[i] == 0;
        CHECK(trace.sigma_tilde(k) == zeros);
    }
    CHECK(trace.reinforced == urn.draws);
}

TEST_CASE("limits") {
    auto lim = star_limits(m("0:0.6666666666666666,1:0.2,2:0.13333333333333333"));
    CHECK(lim.sigma_limit == doctest::Approx(4.0 / 3.0));
    CHECK(lim.weight_limits.at(0) == doctest::Approx(0.5));
    CHECK(lim.weight_limits.at(1) == doctest::Approx(0.15));
    CHECK(lim.weight_limits.at(2) == doctest::Approx(0.1));
    CHECK(star_limits(m("0:1")).sigma_limit == 1.0);
    for (const char* pi : {"0:0.5,1:0.5", "0:0.2,1:0.3,5:0.5"}) {
        auto mu = m(pi);
        CHECK(star_limits(mu).weight_limits.total_mass() == doctest::Approx(1.0 / (2.0 - mu.at(0))));
    }
}

TEST_CASE("long run approaches the limits") {
    const auto alpha = example_rows();
    const auto pi = stationary_distribution(alpha, 1e-12);
    CHECK(pi.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    const auto lim = star_limits(pi);
    auto s = star_walk_init(m("0:1"), alpha);
    Rng rng(10);
    const std::size_t n = 100000;
    auto trace = star_walk_run(s, n, rng);
    for (Color j : {0u, 1u, 2u})
        CHECK(std::abs(s.weights.at(j) / (n + s.delta) - lim.weight_limits.at(j)) < 0.02);
    const auto rest = star_walk_run_updates(s, n, rng);
    std::vector<std::size_t> times = trace.update_times;
    times.insert(times.end(), rest.update_times.begin(), rest.update_times.end());
    CHECK(std::abs(static_cast<double>(times[n - 1]) / (n + 1.0) - lim.sigma_limit) < 0.02);
}

}
