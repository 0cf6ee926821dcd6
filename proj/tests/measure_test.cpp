#include <doctest.h>

#include "support.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/exact.hpp"
#include "urnlab/measure.hpp"

using namespace urnlab;
using testing::m;

TEST_SUITE("measure") {

TEST_CASE("parse keeps colors sorted and merges repeats") {
    auto mu = m("3:0.25, 1:0.5,3:0.25");
    REQUIRE(mu.size() == 2);
    CHECK(mu.entries()[0].first == 1);
    CHECK(mu.at(3) == 0.5);
    CHECK(mu.at(7) == 0.0);
    CHECK(mu.total_mass() == 1.0);
    CHECK(mu.max_color() == 3);
}

TEST_CASE("decimal and ratio weights carry an exact shadow") {
    auto mu = m("0:1/3,1:2/3");
    REQUIRE(mu.is_exact());
    Rational sum = 0;
    for (const auto& [c, q] : mu.exact()->entries) sum += q;
    CHECK(sum == 1);
    CHECK(mu.at(0) == doctest::Approx(1.0 / 3.0));

    auto d = m("0:0.1,1:0.9");
    REQUIRE(d.is_exact());
    CHECK(d.exact()->entries[0].second == Rational(1, 10));

    auto e = m("0:2.5e-1,1:75e-2");
    REQUIRE(e.is_exact());
    CHECK(e.exact()->entries[1].second == Rational(3, 4));
}

TEST_CASE("hex-float weights fall back to doubles") {
    auto mu = m("0:0x1p-2,1:3/4");
    CHECK_FALSE(mu.is_exact());
    CHECK(mu.at(0) == 0.25);
}

TEST_CASE("malformed literals are rejected") {
    CHECK_THROWS_AS(m("0-1"), ParseError);
    CHECK_THROWS_AS(m("x:1"), ParseError);
    CHECK_THROWS_AS(m("-1:1"), ParseError);
    CHECK_THROWS_AS(m("0:-0.5"), NegativeEntry);
    CHECK_THROWS_AS(m("0:inf"), ParseError);
    CHECK_THROWS_AS(m("0:1,1:"), ParseError);
}

TEST_CASE("empty literal is the zero measure") {
    auto mu = m("");
    CHECK(mu.empty());
    CHECK(mu.total_mass() == 0.0);
    CHECK_THROWS_AS(mu.normalized(), ZeroMass);
}

TEST_CASE("parse_exact") {
    CHECK(*parse_exact("0.125") == Rational(1, 8));
    CHECK(*parse_exact(" 3/12 ") == Rational(1, 4));
    CHECK(*parse_exact("1e2") == 100);
    CHECK(*parse_exact("-0.5") == Rational(-1, 2));
    CHECK_FALSE(parse_exact("1/0").has_value());
    CHECK_FALSE(parse_exact("abc").has_value());
    CHECK_FALSE(parse_exact("1.5x").has_value());
}

TEST_CASE("add merges supports and drops the shadow") {
    auto a = m("0:1");
    a.add(m("1:0.5,2:0.5"));
    CHECK(a.size() == 3);
    CHECK(a.total_mass() == 2.0);
    CHECK_FALSE(a.is_exact());

    a.add(m("0:1,2:1"), 2.0);
    CHECK(a.at(0) == 3.0);
    CHECK(a.at(2) == 2.5);
    CHECK(a.total_mass() == 6.0);
}

TEST_CASE("sample maps the unit interval onto cumulative weights") {
    auto mu = m("0:2,5:1,9:1");
    CHECK(mu.sample(0.0) == 0);
    CHECK(mu.sample(0.4999) == 0);
    CHECK(mu.sample(0.5) == 5);
    CHECK(mu.sample(0.7499) == 5);
    CHECK(mu.sample(0.75) == 9);
    CHECK(mu.sample(std::nextafter(1.0, 0.0)) == 9);
}

TEST_CASE("prune removes the smallest entries within budget") {
    auto mu = m("0:0.9,1:0.06,2:0.03,3:0.01");
    const double dropped = mu.prune(0.05);
    CHECK(dropped == doctest::Approx(0.04));
    CHECK(mu.size() == 2);
    CHECK(mu.at(1) == 0.06);
    CHECK(mu.total_mass() == doctest::Approx(0.96));
}

TEST_CASE("scaled and normalized") {
    auto mu = m("0:2,1:6").normalized();
    CHECK(mu.at(0) == 0.25);
    CHECK(mu.at(1) == 0.75);
    CHECK(mu.scaled(0.0).empty());
}

TEST_CASE("distances") {
    auto a = m("0:0.5,1:0.5");
    auto b = m("1:0.25,2:0.75");
    CHECK(l1_distance(a, b) == doctest::Approx(0.5 + 0.25 + 0.75));
    CHECK(sup_distance(a, b) == doctest::Approx(0.75));
    CHECK(l1_distance(a, a) == 0.0);
}

TEST_CASE("equality ignores the exact shadow") {
    auto a = m("0:0.5,1:0.5");
    auto b = SparseMeasure::from_entries({{1, 0.5}, {0, 0.5}});
    CHECK(a.is_exact());
    CHECK_FALSE(b.is_exact());
    CHECK(a == b);
}

}
