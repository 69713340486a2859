#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/polygon.hpp"
#include "isoc/rng.hpp"

using namespace isoc;

namespace {

SlopeVector random_slopes(Rng& rng, size_t d) {
    std::vector<Rational> v;
    for (size_t i = 0; i < d; ++i) {
        long den = rng.range(1, 4);
        long num = rng.range(-6, 6);
        v.emplace_back(Rational(num, den));
    }
    return SlopeVector(std::move(v));
}

// Same total, still decreasing, but not necessarily comparable.
SlopeVector random_same_total(Rng& rng, const SlopeVector& base) {
    std::vector<Rational> v = base.entries();
    for (int moves = rng.range(0, 4); moves > 0; --moves) {
        size_t i = rng.below(v.size());
        size_t j = rng.below(v.size());
        if (i == j) continue;
        Rational step(1, rng.range(1, 3));
        v[i] += step;
        v[j] -= step;
    }
    return SlopeVector(std::move(v));
}

}  // namespace

TEST_CASE("polygon_of stated examples") {
    auto pg0 = NewtonPolygon::of(SlopeVector({Rational(0), Rational(0)}));
    REQUIRE(pg0.vertices().size() == 2);
    CHECK(pg0.vertices()[0] == std::make_pair(Rational(0), Rational(0)));
    CHECK(pg0.vertices()[1] == std::make_pair(Rational(2), Rational(0)));

    auto pg1 = NewtonPolygon::of(SlopeVector({Rational(1), Rational(0)}));
    REQUIRE(pg1.vertices().size() == 3);
    CHECK(pg1.vertices()[1] == std::make_pair(Rational(1), Rational(0)));
    CHECK(pg1.vertices()[2] == std::make_pair(Rational(2), Rational(1)));

    auto pg2 = NewtonPolygon::of(SlopeVector({Rational(1, 2), Rational(1, 2)}));
    REQUIRE(pg2.vertices().size() == 2);
    CHECK(pg2.vertices()[1] == std::make_pair(Rational(2), Rational(1)));
}

TEST_CASE("polygon endpoints are (0,0) and (d, |lambda|)") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        SlopeVector s = random_slopes(rng, 1 + rng.below(8));
        auto pg = NewtonPolygon::of(s);
        CHECK(pg.vertices().front() == std::make_pair(Rational(0), Rational(0)));
        CHECK(pg.endpoint().first == Rational(static_cast<long>(s.size())));
        CHECK(pg.endpoint().second == s.total());
    }
}

TEST_CASE("dominance stated examples") {
    SlopeVector half({Rational(1, 2), Rational(1, 2)});
    SlopeVector ten({Rational(1), Rational(0)});
    CHECK(dominance_leq(half, ten));
    CHECK(dominance_leq(ten, ten));
    CHECK_FALSE(dominance_leq(SlopeVector({Rational(2), Rational(0)}),
                              SlopeVector({Rational(1), Rational(1)})));
    CHECK_THROWS_AS(dominance_leq(half, SlopeVector({Rational(1)})), length_mismatch);
}

TEST_CASE("totals") {
    CHECK(SlopeVector({Rational(1), Rational(0)}).total() == Rational(1));
    CHECK(SlopeVector({Rational(3), Rational(-3)}).total() == Rational(0));
    CHECK(SlopeVector({Rational(1, 2), Rational(1, 2)}).total() == Rational(1));
}

TEST_CASE("dominance iff polygon above with same endpoints (seeded pairs)") {
    Rng rng(2024);
    int agree_true = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        size_t d = 1 + rng.below(8);
        SlopeVector a = random_slopes(rng, d);
        SlopeVector b = rng.coin() ? random_same_total(rng, a) : random_slopes(rng, d);
        bool dom = dominance_leq(a, b);
        bool geo = polygon_above_same_endpoints(a, b);
        CHECK(dom == geo);
        if (dom) ++agree_true;
    }
    CHECK(agree_true > 100);  // the sample hits the relation often enough to be meaningful
}

TEST_CASE("dominance is a partial order on seeded triples") {
    Rng rng(515);
    for (int trial = 0; trial < 2000; ++trial) {
        size_t d = 1 + rng.below(6);
        SlopeVector a = random_slopes(rng, d);
        SlopeVector b = random_same_total(rng, a);
        SlopeVector c = random_same_total(rng, b);
        CHECK(dominance_leq(a, a));
        if (dominance_leq(a, b) && dominance_leq(b, a)) CHECK(a == b);
        if (dominance_leq(a, b) && dominance_leq(b, c)) CHECK(dominance_leq(a, c));
    }
}

TEST_CASE("slope vector text form round trip") {
    SlopeVector s = SlopeVector::parse("[1/2, -3, 2]");
    CHECK(s.str() == "[2, 1/2, -3]");
    CHECK(SlopeVector::parse(s.str()) == s);
}
