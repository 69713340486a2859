#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/isocrystal.hpp"

using namespace isoc;

namespace {

Matrix random_unimodular(const Context& ctx, unsigned n, Rng& rng, int shears = 6) {
    Matrix g = Matrix::identity(ctx, n);
    for (int s = 0; s < shears; ++s) {
        unsigned i = static_cast<unsigned>(rng.below(n));
        unsigned j = static_cast<unsigned>(rng.below(n));
        if (i == j) continue;
        Scalar c = Scalar::from_integer(ctx, mpz_class(rng.range(-4, 4)));
        for (unsigned k = 0; k < n; ++k) g.at(i, k) = g.at(i, k) + c * g.at(j, k);
    }
    return g;
}

// sigma-semilinear unimodular draw at full level: unit diagonal plus shears
// with ring-element coefficients
Matrix random_unimodular_level(const Context& ctx, unsigned n, Rng& rng) {
    Matrix g = Matrix::identity(ctx, n);
    for (int s = 0; s < 5; ++s) {
        unsigned i = static_cast<unsigned>(rng.below(n));
        unsigned j = static_cast<unsigned>(rng.below(n));
        if (i == j) continue;
        std::vector<mpz_class> coeffs(ctx.degree());
        for (auto& c : coeffs) c = rng.range(-3, 3);
        Scalar c = Scalar::from_int_poly(ctx, coeffs);
        for (unsigned k = 0; k < n; ++k) g.at(i, k) = g.at(i, k) + c * g.at(j, k);
    }
    return g;
}

}  // namespace

TEST_CASE("standard forms have the declared newton vectors") {
    auto ctx = Context::make(2, 2, 32);
    // (L^d, sigma)
    Isocrystal unit = Isocrystal::standard_form(ctx, {{0, 1, 3}});
    CHECK(unit.newton_vector() == SlopeVector::integral({0, 0, 0}));
    // (L, pi sigma)
    Isocrystal tate = Isocrystal::standard_form(ctx, {{1, 1, 1}});
    CHECK(tate.newton_vector() == SlopeVector::integral({1}));
    CHECK(tate.t_newton() == 1);
    // E_{1/2}: block [[0, pi], [1, 0]]
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    CHECK(half.newton_vector() == SlopeVector({Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("diagonal frobenius gives sorted integral slopes") {
    auto ctx = Context::make(3, 1, 32);
    Matrix a(*ctx, 3, 3);
    a.at(0, 0) = Scalar::pi_power(*ctx, -1);
    a.at(1, 1) = Scalar::pi_power(*ctx, 2);
    a.at(2, 2) = Scalar::pi_power(*ctx, 0);
    Isocrystal x = Isocrystal::from_matrix(ctx, a, 1);
    CHECK(x.newton_vector() == SlopeVector::integral({2, 0, -1}));
    CHECK(x.t_newton() == 1);
}

TEST_CASE("E_{1/2}: phi^2 acts as pi") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    Matrix id = Matrix::identity(*ctx, 2);
    Matrix sq = half.apply_phi_power(id, 2);
    // hand oracle: A sigma(A) = diag(pi, pi) for the companion block
    for (unsigned i = 0; i < 2; ++i)
        for (unsigned j = 0; j < 2; ++j) {
            Scalar want = i == j ? Scalar::pi_power(*ctx, 1) : Scalar::zero(*ctx);
            CHECK(Scalar::indistinguishable(sq.at(i, j), want, 28));
        }
}

TEST_CASE("newton vector is invariant under sigma-conjugation") {
    auto ctx = Context::make(2, 2, 40);
    Rng rng(99);
    Isocrystal x = Isocrystal::standard_form(ctx, {{1, 2, 1}, {0, 1, 1}, {-1, 1, 1}});
    SlopeVector nu = x.newton_vector();
    for (int trial = 0; trial < 25; ++trial) {
        Matrix g = trial % 2 ? random_unimodular(*ctx, x.dim(), rng)
                             : random_unimodular_level(*ctx, x.dim(), rng);
        CHECK(x.base_changed(g).newton_vector() == nu);
    }
}

TEST_CASE("|nu| equals v(det A) for random standard forms") {
    auto ctx = Context::make(2, 6, 32);
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<StandardSummand> sm;
        unsigned d = 0;
        while (d < 4) {
            long a = rng.range(-2, 2);
            unsigned b = 1 + static_cast<unsigned>(rng.below(3));
            if (std::gcd(std::labs(a), static_cast<long>(b)) != 1) continue;
            sm.push_back({a, b, 1});
            d += b;
        }
        Isocrystal x = Isocrystal::standard_form(ctx, sm);
        Rational tot = x.newton_vector().total();
        CHECK(tot.get_den() == 1);
        CHECK(tot.get_num() == x.t_newton());
    }
}

TEST_CASE("slope decomposition: stated examples") {
    auto ctx = Context::make(2, 2, 32);

    // diag(1, pi) sigma: V_0 = first axis, V_1 = second axis
    Matrix a(*ctx, 2, 2);
    a.at(0, 0) = Scalar::one(*ctx);
    a.at(1, 1) = Scalar::pi_power(*ctx, 1);
    Isocrystal x = Isocrystal::from_matrix(ctx, a, 1);
    auto dec = x.slope_decomposition();
    REQUIRE(dec.pieces.size() == 2);
    CHECK(dec.pieces[0].slope == Rational(1));
    CHECK(dec.pieces[1].slope == Rational(0));
    CHECK(dec.pieces[0].basis.cols() == 1);
    CHECK(dec.pieces[0].basis.at(1, 0).is_known());
    CHECK((dec.pieces[0].basis.at(0, 0).is_zero() || dec.pieces[0].basis.at(0, 0).is_bounded()));

    // E_{1/2}: single slope 1/2 with s = 2 and a 2-dimensional piece
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    auto dhalf = half.slope_decomposition();
    CHECK(dhalf.s == 2);
    REQUIRE(dhalf.pieces.size() == 1);
    CHECK(dhalf.pieces[0].basis.cols() == 2);

    // (L^2, sigma): V_0 is the full plane
    Isocrystal triv = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    auto dtriv = triv.slope_decomposition();
    REQUIRE(dtriv.pieces.size() == 1);
    CHECK(dtriv.pieces[0].basis.cols() == 2);
}

TEST_CASE("slope decomposition via the general eigen-solve path") {
    auto ctx = Context::make(2, 2, 32);
    // matrix input without provenance: the kernel solve must find eigenvectors
    Matrix a(*ctx, 2, 2);
    a.at(0, 1) = Scalar::pi_power(*ctx, 1);
    a.at(1, 0) = Scalar::one(*ctx);
    Isocrystal x = Isocrystal::from_matrix(ctx, a, 1);
    auto dec = x.slope_decomposition();
    REQUIRE(dec.pieces.size() == 1);
    CHECK(dec.pieces[0].slope == Rational(1, 2));
    CHECK(dec.pieces[0].basis.cols() == 2);
    // certificate is part of slope_decomposition(); additionally check one
    // vector explicitly
    Matrix v = dec.pieces[0].basis.col(0);
    Matrix lhs = x.apply_phi_power(v, 2);
    Matrix rhs = v.pi_scaled(1);
    for (unsigned i = 0; i < 2; ++i)
        CHECK(Scalar::indistinguishable(lhs.at(i, 0), rhs.at(i, 0),
                                        rhs.at(i, 0).lower_bound() + 20));
}

TEST_CASE("subobject family: simple object has only the trivial members") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal half = Isocrystal::standard_form(ctx, {{1, 2, 1}});
    auto dec = half.slope_decomposition();
    auto fam = subobject_family(half, FamilyOptions{}, dec);
    REQUIRE(fam.size() == 2);
    CHECK(fam[0].dim() == 0);
    CHECK(fam[1].dim() == 2);
}

TEST_CASE("subobject family: multiplicity-free Boolean lattice") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 1}, {1, 1, 1}});
    CHECK(multiplicity_free(x.newton_vector()));
    auto dec = x.slope_decomposition();
    auto fam = subobject_family(x, FamilyOptions{}, dec);
    CHECK(fam.size() == 4);  // 0, E_0, E_1, D
    for (const auto& s : fam) {
        // every member is phi-stable by construction; re-verify the certificate
        Matrix w = x.apply_phi(s.basis);
        auto y = express_in_basis(s.basis, w);
        CHECK(y.has_value());
    }
}

TEST_CASE("cyclic span of a rational vector in (L^2, sigma)") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    // v = (1, t) with sigma(t) = t: rational scalar, e.g. t = 7
    std::vector<Scalar> v{Scalar::one(*ctx), Scalar::from_integer(*ctx, 7)};
    Matrix span = cyclic_span(x, v);
    CHECK(span.cols() == 1);  // phi-stable line
    auto fr = induced_frobenius(x, span);
    CHECK(fr.has_value());
}

TEST_CASE("non-rational line is not phi-stable in (L^2, sigma)") {
    auto ctx = Context::make(2, 2, 32);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    // v = (1, t) with t the power-basis generator: sigma(t) != t
    std::vector<mpz_class> tgen{0, 1};
    std::vector<Scalar> v{Scalar::one(*ctx), Scalar::from_int_poly(*ctx, tgen)};
    Matrix span = cyclic_span(x, v);
    CHECK(span.cols() == 2);  // the span closes only at the whole plane
}

TEST_CASE("fixed field basis dimensions") {
    auto ctx = Context::make(2, 4, 32);
    CHECK(fixed_field_basis(*ctx, 1).size() == 1);
    CHECK(fixed_field_basis(*ctx, 2).size() == 2);
    CHECK(fixed_field_basis(*ctx, 4).size() == 4);
}

TEST_CASE("dual and tensor slopes") {
    auto ctx = Context::make(2, 2, 40);
    Isocrystal x = Isocrystal::standard_form(ctx, {{1, 1, 1}, {0, 1, 1}});
    SlopeVector nu_dual = x.dual().newton_vector();
    CHECK(nu_dual == SlopeVector::integral({0, -1}));
    Isocrystal t = Isocrystal::tensor(x, x);
    // slopes of the tensor square: pairwise sums {2, 1, 1, 0}
    CHECK(t.newton_vector() == SlopeVector::integral({2, 1, 1, 0}));
}

TEST_CASE("quotient by a subobject splits the slopes") {
    auto ctx = Context::make(2, 2, 40);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 1}, {1, 1, 1}});
    auto dec = x.slope_decomposition();
    auto fam = subobject_family(x, FamilyOptions{}, dec);
    for (const auto& s : fam) {
        if (s.dim() != 1) continue;
        QuotientData q = quotient_by(x, s);
        CHECK(q.quotient.dim() == 1);
        Rational sub_slope = s.newton_vector(ctx->degree())[0];
        Rational quot_slope = q.quotient.newton_vector()[0];
        CHECK(sub_slope + quot_slope == Rational(1));
    }
}
