#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/kernel_io.hpp"
#include "urnlab/replicas.hpp"
#include "urnlab/urn.hpp"

using namespace urnlab;
using testing::m;

namespace {

Kernel exact_flip() { return parse_kernel("kernel explicit 2\n0 1 1\n1 0 1\n"); }
Kernel exact_identity() { return parse_kernel("kernel explicit 2\n0 0 1\n1 1 1\n"); }

}  // namespace

TEST_SUITE("urn") {

TEST_CASE("init") {
    auto s = urn_init(m("0:1"), testing::two_state());
    CHECK(s.t0 == 1.0);
    CHECK(s.steps == 0);
    CHECK(urn_init(m("0:0.5,1:0.5"), testing::two_state()).t0 == 1.0);
    CHECK_THROWS_AS(urn_init(m(""), testing::two_state()), ZeroMass);
}

TEST_CASE("draws from a point mass") {
    auto s = urn_init(m("0:1"), testing::two_state());
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) CHECK(urn_draw(s, rng) == 0);
}

TEST_CASE("draw frequencies follow the configuration") {
    const std::size_t n = 100000;
    for (auto [config, p] : {std::pair{"0:1,1:1", 0.5}, std::pair{"0:2,1:1", 2.0 / 3.0}}) {
        auto s = urn_init(m(config), testing::two_state());
        Rng rng(17);
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < n; ++i) zeros += urn_draw(s, rng) == 0;
        CHECK(testing::within_binomial(zeros, n, p));
    }
}

TEST_CASE("first step of the flip and identity kernels") {
    Rng rng(1);
    auto s = urn_init(m("0:1"), testing::flip());
    CHECK(urn_step(s, rng) == 0);
    CHECK(s.config == m("0:1,1:1"));
    CHECK(s.steps == 1);

    auto p = urn_init(m("0:1"), testing::identity(2));
    CHECK(urn_step(p, rng) == 0);
    CHECK(p.config == m("0:2"));
}

TEST_CASE("every step adds unit mass") {
    for (auto kernel : {testing::two_state(), testing::flip(), Kernel::reset_chain({0.3, 0.5}),
                        Kernel::star_walk(m("0:0.5,1:0.3,2:0.2"))}) {
        auto s = urn_init(m("0:0.25,1:0.5"), kernel);
        Rng rng(99);
        for (int k = 1; k <= 2000; ++k) {
            const double before = s.config.total_mass() + s.discarded;
            urn_step(s, rng);
            CHECK(std::abs(s.config.total_mass() + s.discarded - before - 1.0) <= 1e-9);
        }
        CHECK(std::abs(s.config.total_mass() + s.discarded - (2000 + s.t0)) <= 1e-9);
    }
}

TEST_CASE("runs") {
    Rng rng(3);
    auto init = urn_init(m("0:1"), testing::two_state());
    auto empty = urn_run(init, 0, rng);
    CHECK(empty.draws.empty());
    CHECK(empty.local_times.empty());
    CHECK(empty.final_state.config == init.config);
    CHECK(empty.final_state.steps == 0);

    CHECK(urn_run(urn_init(m("0:1"), testing::flip()), 1, rng).draws == std::vector<Color>{0});

    auto trace = urn_run(init, 5000, rng);
    std::size_t total = 0;
    for (const auto& [v, n] : trace.local_times) {
        total += n;
        CHECK(n == static_cast<std::size_t>(std::count(trace.draws.begin(), trace.draws.end(), v)));
    }
    CHECK(total == 5000);
    CHECK(trace.final_state.steps == 5000);
}

TEST_CASE("runs are a function of the seed") {
    auto init = urn_init(m("0:1"), Kernel::reset_chain({0.3, 0.5}));
    Rng a(42), b(42), c(43);
    auto ta = urn_run(init, 3000, a);
    auto tb = urn_run(init, 3000, b);
    auto tc = urn_run(init, 3000, c);
    CHECK(ta.draws == tb.draws);
    CHECK(ta.final_state.config == tb.final_state.config);
    CHECK(ta.seed == 42);
    CHECK(ta.draws != tc.draws);
}

TEST_CASE("identity kernel reinforces the initial color forever") {
    for (Color c : {0u, 3u}) {
        Rng rng(c);
        auto trace = urn_run(urn_init(SparseMeasure::point(c), testing::identity(4)), 1000, rng);
        for (Color z : trace.draws) CHECK(z == c);
    }
}

TEST_CASE("normalized configuration") {
    CHECK(normalized_config(urn_init(m("0:1"), testing::two_state())) == m("0:1"));
    CHECK(normalized_config(urn_init(m("0:1,1:1"), testing::two_state())) == m("0:0.5,1:0.5"));
    Rng rng(8);
    auto trace = urn_run(urn_init(m("0:1"), testing::two_state()), 100, rng);
    CHECK(normalized_config(trace.final_state).total_mass() == doctest::Approx(1.0));
}

TEST_CASE("exact law of the flip kernel") {
    auto law = urn_exact_law(m("0:1"), exact_flip(), 1);
    REQUIRE(law.is_exact());
    REQUIRE(law.exact_atoms->size() == 2);
    CHECK(law.exact_atoms->at({0, 0}) == Rational(1, 2));
    CHECK(law.exact_atoms->at({0, 1}) == Rational(1, 2));

    auto approx = urn_exact_law(m("0:1"), testing::flip(), 1);
    CHECK_FALSE(approx.is_exact());
    CHECK(approx.atoms.at({0, 0}) == 0.5);
}

TEST_CASE("exact law of the identity kernel is absorbing") {
    auto law = urn_exact_law(m("0:1"), exact_identity(), 1);
    REQUIRE(law.exact_atoms->size() == 1);
    CHECK(law.exact_atoms->at({0, 0}) == 1);
}

TEST_CASE("exact law hand enumeration, horizon 2") {
    // U_0 = {0:1}, flip: Z_0 = 0, U_1 = {0:1,1:1}.
    // Z_1 = 0 (1/2): U_2 = {0:1,1:2}, Z_2 = 0 w.p. 1/3.
    // Z_1 = 1 (1/2): U_2 = {0:2,1:1}, Z_2 = 0 w.p. 2/3.
    auto law = urn_exact_law(m("0:1"), exact_flip(), 2);
    const auto& a = *law.exact_atoms;
    CHECK(a.at({0, 0, 0}) == Rational(1, 6));
    CHECK(a.at({0, 0, 1}) == Rational(1, 3));
    CHECK(a.at({0, 1, 0}) == Rational(1, 3));
    CHECK(a.at({0, 1, 1}) == Rational(1, 6));
}

TEST_CASE("exact laws are normalized") {
    for (int h = 0; h <= 4; ++h) {
        auto law = urn_exact_law(m("0:0.3,1:0.5,2:0.2"),
                                 parse_kernel("kernel explicit 3\n0 1 0.5\n0 2 0.5\n1 0 0.25\n1 1 0.75\n2 2 1\n"), h);
        Rational sum = 0;
        for (const auto& [s, q] : *law.exact_atoms) {
            CHECK(q >= 0);
            CHECK(s.size() == static_cast<std::size_t>(h + 1));
            sum += q;
        }
        CHECK(sum == 1);

        auto dbl = urn_exact_law(m("0:0.3,1:0.7"), testing::two_state(), std::min(h, 3));
        CHECK(std::abs(dbl.total() - 1.0) <= 1e-12);
    }
}

TEST_CASE("exact law refuses what it cannot enumerate") {
    CHECK_THROWS_AS(urn_exact_law(m("0:1"), Kernel::reset_chain({0.3, 0.5}), 2), InfiniteSupportReachable);
    CHECK_THROWS_AS(urn_exact_law(m("0:1"), testing::flip(), kDefaultEnumerationCap + 1), HorizonTooLarge);
    CHECK_THROWS_AS(urn_exact_law(m(""), testing::flip(), 1), ZeroMass);
    // Star-walk rows are stored, so enumeration is allowed.
    CHECK(urn_exact_law(m("0:1"), Kernel::star_walk(m("0:0.5,1:0.5")), 2).total() == doctest::Approx(1.0));
}

TEST_CASE("empirical marginals match the exact law") {
    const auto kernel = Kernel::from_dense({{0.2, 0.5, 0.3}, {0.6, 0.1, 0.3}, {0.0, 0.5, 0.5}});
    const auto u0 = m("0:0.5,2:1.5");
    const int horizon = 3;
    const std::size_t replicas = 100000;
    auto law = urn_exact_law(u0, kernel, horizon);
    auto draws = run_replicas<std::vector<Color>>(replicas, 2024, [&](std::size_t, Rng& rng) {
        return urn_run(urn_init(u0, kernel), horizon + 1, rng).draws;
    });
    for (int k = 0; k <= horizon; ++k) {
        auto marginal = law.marginal(k);
        for (Color v = 0; v < 3; ++v) {
            std::size_t hits = 0;
            for (const auto& d : draws) hits += d[k] == v;
            CHECK(testing::within_binomial(hits, replicas, marginal.at(v)));
        }
    }
}

}
