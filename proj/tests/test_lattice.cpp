#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/lattice.hpp"

using namespace isoc;

namespace {

Filtration line_filtration(ContextPtr ctx, std::vector<long> mu, const Scalar& c) {
    Matrix flag(*ctx, 2, 2);
    flag.at(0, 0) = Scalar::one(*ctx);
    flag.at(1, 0) = c;
    flag.at(1, 1) = Scalar::one(*ctx);
    return Filtration(std::move(ctx), std::move(mu), std::move(flag));
}

Lattice random_lattice(const Context& ctx, unsigned d, Rng& rng) {
    for (;;) {
        Matrix b(ctx, d, d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j) {
                long v = rng.range(0, 2);
                b.at(i, j) = Scalar::from_integer(ctx, mpz_class(rng.range(-9, 9))).shifted(v);
            }
        try {
            return Lattice(b);
        } catch (const error&) {
        }
    }
}

}  // namespace

TEST_CASE("lattice type of diagonal frobenius and the half block") {
    auto ctx = Context::make(2, 2, 32);
    Matrix a(*ctx, 3, 3);
    a.at(0, 0) = Scalar::pi_power(*ctx, 2);
    a.at(1, 1) = Scalar::pi_power(*ctx, 0);
    a.at(2, 2) = Scalar::pi_power(*ctx, -1);
    Isocrystal x = Isocrystal::from_matrix(ctx, a, 1);
    Lattice std3 = Lattice::standard(*ctx, 3);
    CHECK(lattice_type(x, std3) == std::vector<long>{2, 0, -1});

    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    Lattice std2 = Lattice::standard(*ctx, 2);
    CHECK(lattice_type(half, std2) == std::vector<long>{1, 0});
    // pi-rescaling does not change the type
    CHECK(lattice_type(half, std2.pi_scaled(1)) == std::vector<long>{1, 0});
    CHECK(lattice_type(half, std2.pi_scaled(-3)) == std::vector<long>{1, 0});
}

TEST_CASE("hermite form and lattice equality") {
    auto ctx = Context::make(2, 1, 32);
    Rng rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        Lattice m = random_lattice(*ctx, 3, rng);
        // right-multiplying by a unimodular matrix fixes the lattice
        Matrix g = Matrix::identity(*ctx, 3);
        for (int s = 0; s < 6; ++s) {
            unsigned i = static_cast<unsigned>(rng.below(3));
            unsigned j = static_cast<unsigned>(rng.below(3));
            if (i == j) continue;
            Scalar c = Scalar::from_integer(*ctx, mpz_class(rng.range(-4, 4)));
            for (unsigned k = 0; k < 3; ++k) g.at(k, i) = g.at(k, i) + g.at(k, j) * c;
        }
        Lattice m2(m.basis() * g);
        CHECK(lattice_equal(m, m2));
        CHECK(lattice_key(m) == lattice_key(m2));
        CHECK_FALSE(lattice_equal(m, m.pi_scaled(1)));
        CHECK(lattice_contains(m, m.pi_scaled(2)));
    }
}

TEST_CASE("sum and intersection of lattices") {
    auto ctx = Context::make(2, 1, 32);
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        Lattice a = random_lattice(*ctx, 3, rng);
        Lattice b = random_lattice(*ctx, 3, rng);
        Lattice s = lattice_sum(a, b);
        Lattice i = lattice_intersection(a, b);
        CHECK(lattice_contains(s, a));
        CHECK(lattice_contains(s, b));
        CHECK(lattice_contains(a, i));
        CHECK(lattice_contains(b, i));
        // covolume additivity: covol(a) + covol(b) = covol(sum) + covol(intersection)
        CHECK(a.covolume() + b.covolume() == s.covolume() + i.covolume());
    }
}

TEST_CASE("mazur inequality on seeded random lattices") {
    auto ctx = Context::make(2, 6, 32);
    Rng rng(2026);
    std::vector<std::vector<StandardSummand>> shapes = {
        {{1, 2, 1}}, {{0, 1, 1}, {1, 1, 1}}, {{1, 3, 1}}, {{-1, 2, 1}, {1, 1, 1}}, {{0, 1, 2}}};
    for (const auto& sm : shapes) {
        Isocrystal x = Isocrystal::standard_form(ctx, sm);
        for (int trial = 0; trial < 10; ++trial) {
            Lattice m = random_lattice(*ctx, x.dim(), rng);
            CHECK(check_mazur(x, m));
        }
    }
}

TEST_CASE("strong divisibility: stated examples") {
    auto ctx = Context::make(2, 1, 32);
    // phi = sigma, mu = 0: T(M) = phi(M) = M
    Isocrystal triv = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Lattice m = Lattice::standard(*ctx, 2);
    Filtration f0(ctx, {0, 0}, Matrix::identity(*ctx, 2));
    CHECK(strongly_divisible(triv, f0, m));

    // (L, pi sigma) with mu = (1): every lattice adapted; mu = (0): none
    Isocrystal tate = Isocrystal::standard_form(ctx, {{1, 1, 1}});
    Lattice o1 = Lattice::standard(*ctx, 1);
    Filtration f1(ctx, {1}, Matrix::identity(*ctx, 1));
    CHECK(strongly_divisible(tate, f1, o1));
    Filtration fz(ctx, {0}, Matrix::identity(*ctx, 1));
    CHECK_FALSE(strongly_divisible(tate, fz, o1));
}

TEST_CASE("laffaille iteration: fixpoint in one step when already adapted") {
    auto ctx = Context::make(2, 1, 32);
    Isocrystal triv = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Filtration f0(ctx, {0, 0}, Matrix::identity(*ctx, 2));
    auto res = laffaille_iterate(triv, f0, Lattice::standard(*ctx, 2));
    REQUIRE(std::holds_alternative<Lattice>(res));
    CHECK(lattice_equal(std::get<Lattice>(res), Lattice::standard(*ctx, 2)));
}

TEST_CASE("laffaille iteration converges on the non-rational line instance") {
    auto ctx = Context::make(2, 2, 48);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Scalar t = Scalar::from_int_poly(*ctx, {0, 1});
    Filtration f = line_filtration(ctx, {1, -1}, t);
    auto res = laffaille_iterate(x, f, Lattice::standard(*ctx, 2));
    REQUIRE(std::holds_alternative<Lattice>(res));
    const Lattice& m = std::get<Lattice>(res);
    CHECK(strongly_divisible(x, f, m));
    CHECK(lattice_type(x, m) == std::vector<long>{1, -1});
}

TEST_CASE("laffaille iteration diverges on the rational-line counterexample") {
    auto ctx = Context::make(2, 2, 48);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}}).with_restriction(1);
    Filtration f = line_filtration(ctx, {1, -1}, Scalar::from_integer(*ctx, 1));
    auto res = laffaille_iterate(x, f, Lattice::standard(*ctx, 2));
    REQUIRE(std::holds_alternative<Divergence>(res));
    const auto& div = std::get<Divergence>(res);
    CHECK(div.diameter > 0);  // the lattice escapes along the witness line
}

TEST_CASE("adapted bounds: already adapted gives (M, M)") {
    auto ctx = Context::make(2, 1, 32);
    Isocrystal triv = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Filtration f0(ctx, {0, 0}, Matrix::identity(*ctx, 2));
    Lattice m = Lattice::standard(*ctx, 2);
    auto ab = adapted_bounds(triv, f0, m);
    CHECK(lattice_equal(ab.max_inside, m));
    CHECK(lattice_equal(ab.min_outside, m));
    CHECK(ab.certified_max);
    CHECK(ab.certified_min);
}

TEST_CASE("adapted bounds nest and are strongly divisible") {
    auto ctx = Context::make(2, 2, 48);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Scalar t = Scalar::from_int_poly(*ctx, {0, 1});
    Filtration f = line_filtration(ctx, {1, -1}, t);
    Rng rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        Lattice m = random_lattice(*ctx, 2, rng);
        auto ab = adapted_bounds(x, f, m);
        CHECK(lattice_contains(m, ab.max_inside));
        CHECK(lattice_contains(ab.min_outside, m));
        CHECK(strongly_divisible(x, f, ab.max_inside));
        CHECK(strongly_divisible(x, f, ab.min_outside));
        CHECK(ab.certified_max);
        CHECK(ab.certified_min);
    }
}

TEST_CASE("duality: (M^*)^max = (M^min)^*") {
    auto ctx = Context::make(2, 2, 48);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Scalar t = Scalar::from_int_poly(*ctx, {0, 1});
    Filtration f = line_filtration(ctx, {1, -1}, t);
    Isocrystal xd = x.dual();
    Filtration fd = dual_filtration(f);
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Lattice m = random_lattice(*ctx, 2, rng);
        auto ab = adapted_bounds(x, f, m);
        auto abd = adapted_bounds(xd, fd, m.dual());
        CHECK(lattice_equal(abd.max_inside, ab.min_outside.dual()));
        CHECK(lattice_equal(abd.min_outside, ab.max_inside.dual()));
    }
}

TEST_CASE("adapted basis certifies mu(M) = mu(F)") {
    auto ctx = Context::make(2, 1, 32);
    // mu = 0, phi = sigma: u = e = standard basis
    Isocrystal triv = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Filtration f0(ctx, {0, 0}, Matrix::identity(*ctx, 2));
    auto ab = adapted_basis(triv, f0, Lattice::standard(*ctx, 2));
    CHECK(ab.jumps == std::vector<long>{0, 0});

    // (L, pi sigma), mu = (1): u_1 = 1, e_1 = pi^{-1} phi(1) = 1
    Isocrystal tate = Isocrystal::standard_form(ctx, {{1, 1, 1}});
    Filtration f1(ctx, {1}, Matrix::identity(*ctx, 1));
    auto ab1 = adapted_basis(tate, f1, Lattice::standard(*ctx, 1));
    CHECK(ab1.jumps == std::vector<long>{1});
    CHECK(Scalar::indistinguishable(ab1.e.at(0, 0), Scalar::one(*ctx), 28));
}

TEST_CASE("adapted basis on a laffaille fixpoint") {
    auto ctx = Context::make(2, 2, 48);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Scalar t = Scalar::from_int_poly(*ctx, {0, 1});
    Filtration f = line_filtration(ctx, {1, -1}, t);
    auto res = laffaille_iterate(x, f, Lattice::standard(*ctx, 2));
    REQUIRE(std::holds_alternative<Lattice>(res));
    const Lattice& m = std::get<Lattice>(res);
    auto ab = adapted_basis(x, f, m);
    CHECK(ab.jumps == f.type());
    // pi^{mu_r} e_r is phi(u_r), a basis of phi(M)
    Matrix phiu = x.apply_phi(ab.u);
    for (unsigned j = 0; j < 2; ++j)
        for (unsigned i = 0; i < 2; ++i) {
            Scalar want = ab.e.at(i, j).shifted(ab.jumps[j]);
            CHECK(Scalar::indistinguishable(phiu.at(i, j), want, want.lower_bound() + 30));
        }
}

TEST_CASE("construct_lattice_of_type") {
    auto ctx = Context::make(2, 2, 48);
    // diagonal case mu = nu
    Matrix a(*ctx, 2, 2);
    a.at(0, 0) = Scalar::pi_power(*ctx, 1);
    a.at(1, 1) = Scalar::pi_power(*ctx, 0);
    Isocrystal diag = Isocrystal::from_matrix(ctx, a, 1);
    auto r1 = construct_lattice_of_type(diag, {1, 0}, 5);
    CHECK(lattice_type(diag, r1.lattice) == std::vector<long>{1, 0});
    CHECK(strongly_divisible(diag, r1.filtration, r1.lattice));

    // E_{1/2} with mu = (1, 0)
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    auto r2 = construct_lattice_of_type(half, {1, 0}, 5);
    CHECK(lattice_type(half, r2.lattice) == std::vector<long>{1, 0});

    // E_{1/2} with mu = (0, 0): totals differ
    CHECK_THROWS_AS(construct_lattice_of_type(half, {0, 0}, 5), dominance_fails);
}
