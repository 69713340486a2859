#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/existence.hpp"
#include "isoc/generate.hpp"

using namespace isoc;

TEST_CASE("d = 1: the unique filtration of the right type is admissible") {
    auto ctx = Context::make(2, 1, 24);
    Isocrystal tate = Isocrystal::standard_form(ctx, {{1, 1, 1}});
    GenericityBudget budget;
    auto res = construct_admissible_filtration(tate, {1}, budget);
    CHECK(res.verdict.kind == Verdict::Kind::Admissible);
    CHECK(res.verdict.complete);
    CHECK(res.filtration.type() == std::vector<long>{1});
}

TEST_CASE("E_0 + E_1 with mu = (1, 0): complete certificate within retries") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 1}, {1, 1, 1}});
    GenericityBudget budget;
    budget.seed = 11;
    auto res = construct_admissible_filtration(x, {1, 0}, budget);
    CHECK(res.verdict.kind == Verdict::Kind::Admissible);
    CHECK(res.verdict.complete);
    CHECK(res.retries_used <= 3);
    // every family member shows the transverse pattern
    for (const auto& row : res.transversality) CHECK(row.equal);
    // re-verify with an independent checker call
    Verdict again = check_weak_admissibility(x, res.filtration);
    CHECK(again.kind == Verdict::Kind::Admissible);
}

TEST_CASE("E_{1/2} with mu = (1, 0): simple object, any draw works") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    GenericityBudget budget;
    budget.seed = 3;
    auto res = construct_admissible_filtration(half, {1, 0}, budget);
    CHECK(res.verdict.kind == Verdict::Kind::Admissible);
    CHECK(res.verdict.complete);
}

TEST_CASE("dominance failure is reported before any drawing") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    CHECK_THROWS_AS(construct_admissible_filtration(half, {0, 0}, GenericityBudget{}),
                    dominance_fails);
    CHECK_THROWS_AS(construct_admissible_filtration(half, {0, 1}, GenericityBudget{}),
                    input_error);  // not decreasing
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 1}, {1, 1, 1}});
    CHECK_THROWS_AS(construct_admissible_filtration(x, {0, 1}, GenericityBudget{}), input_error);
    CHECK_THROWS_AS(construct_admissible_filtration(x, {1, 1}, GenericityBudget{}),
                    dominance_fails);  // totals differ
    CHECK_THROWS_AS(construct_admissible_filtration(x, {0, 0}, GenericityBudget{}),
                    dominance_fails);
}

TEST_CASE("negative control: restricted rational model exhausts retries") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}}).with_restriction(1);
    GenericityBudget budget;
    budget.retries = 4;
    budget.seed = 9;
    CHECK_THROWS_AS(construct_admissible_filtration(x, {1, -1}, budget), retries_exhausted);
}

TEST_CASE("multiplicity-free stream: constructor succeeds with complete certificates") {
    Rng rng(505);
    for (unsigned i = 0; i < 10; ++i) {
        unsigned d = 2 + static_cast<unsigned>(rng.below(4));
        Isocrystal x = generate_multfree(2, d, 64, 1000 + i);
        SlopeVector nu = x.newton_vector();
        std::vector<long> mu = random_type_above(nu, rng);
        GenericityBudget budget;
        budget.seed = 77 + i;
        auto res = construct_admissible_filtration(x, mu, budget);
        CHECK(res.verdict.kind == Verdict::Kind::Admissible);
        CHECK(res.verdict.complete);
        CHECK(res.retries_used <= 3);
        CHECK(res.filtration.type() == mu);
    }
}

TEST_CASE("generated types relate to nu as requested") {
    Rng rng(42);
    for (unsigned i = 0; i < 40; ++i) {
        unsigned d = 2 + static_cast<unsigned>(rng.below(4));
        Isocrystal x = generate_standard(2, d, 64, 2000 + i);
        SlopeVector nu = x.newton_vector();
        std::vector<long> mu = random_type_above(nu, rng);
        CHECK(dominance_leq(nu, SlopeVector::integral(mu)));
        auto bad = random_type_not_above(nu, rng);
        if (bad) CHECK_FALSE(dominance_leq(nu, SlopeVector::integral(*bad)));
    }
}
