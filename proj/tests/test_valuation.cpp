#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/context.hpp"
#include "isoc/rng.hpp"
#include "isoc/scalar.hpp"

using namespace isoc;

namespace {

Scalar random_known(const Context& ctx, Rng& rng, long vmin = -4, long vmax = 4) {
    Poly u = ctx.zero_poly();
    bool unit = false;
    for (unsigned i = 0; i < ctx.degree(); ++i) {
        u[i] = static_cast<long>(rng.below(1000));
        if (u[i] % ctx.prime() != 0) unit = true;
    }
    if (!unit) u[0] = 1;
    return Scalar::make_unit(ctx, u, rng.range(vmin, vmax), ctx.precision());
}

// Independent oracle: multiplicative (Teichmueller) lift of a residue-field
// element x, i.e. the root of X^{p^r - 1} = 1 congruent to x mod p, computed
// by Newton iteration on f(X) = X^{p^r - 1} - 1.
Poly teichmueller_lift(const Context& ctx, const Poly& x0, unsigned n) {
    mpz_class q;
    mpz_pow_ui(q.get_mpz_t(), ctx.prime().get_mpz_t(), ctx.degree());
    mpz_class e = q - 1;
    Poly x = ctx.reduce(x0, 1);
    unsigned cur = 1;
    while (cur < n) {
        cur = std::min(2 * cur, n);
        x = ctx.reduce(x, cur);
        Poly fx = ctx.pow(x, e, cur);
        fx[0] -= 1;
        mpz_mod(fx[0].get_mpz_t(), fx[0].get_mpz_t(), ctx.pk(cur).get_mpz_t());
        // f'(X) = (q-1) X^{q-2}
        Poly dfx = ctx.pow(x, e - 1, cur);
        mpz_class c = e % ctx.pk(cur);
        Poly scale = ctx.zero_poly();
        scale[0] = c;
        dfx = ctx.mul(dfx, scale, cur);
        Poly corr = ctx.mul(fx, ctx.inv(dfx, cur), cur);
        x = ctx.sub(x, corr, cur);
    }
    return ctx.reduce(x, n);
}

}  // namespace

TEST_CASE("pi powers and normalization") {
    auto ctx = Context::make(2, 1, 16);
    Scalar pi = Scalar::pi_power(*ctx, 1);
    CHECK(pi.valuation() == 1);
    CHECK(pi.inverse().valuation() == -1);
    Scalar four = Scalar::from_integer(*ctx, 4);
    CHECK(four.valuation() == 2);
    Scalar m12 = Scalar::from_integer(*ctx, -12);
    CHECK(m12.valuation() == 2);
}

TEST_CASE("syntactic self-cancellation gives ExactZero") {
    auto ctx = Context::make(3, 2, 12);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        Scalar x = random_known(*ctx, rng);
        CHECK((x - x).is_zero());
    }
}

TEST_CASE("precision horizon: (1 + pi^5 u) - 1 is BoundedBelow(5)") {
    auto ctx = Context::make(2, 1, 5);
    Scalar one = Scalar::one(*ctx);
    // 1 + pi^5: at N = 5 the unit digits beyond pi^5 do not exist
    Scalar x = Scalar::from_integer(*ctx, 1 + 32);
    Scalar d = x - one;
    CHECK(d.is_bounded());
    CHECK(d.lower_bound() == 5);
}

TEST_CASE("sigma fixes pi and prime-subfield constants") {
    auto ctx = Context::make(5, 3, 20);
    Scalar pi = Scalar::pi_power(*ctx, 1);
    CHECK(pi.frobenius().same_representation(pi));
    Scalar c = Scalar::from_integer(*ctx, 1234);
    CHECK(c.frobenius().same_representation(c));
}

TEST_CASE("sigma agrees with the multiplicative lift: sigma(t) = t^p") {
    // r=2, N=20, against the Newton-iteration oracle for the Teichmueller lift
    for (long p : {2L, 3L, 7L}) {
        auto ctx = Context::make(p, 2, 20);
        Poly gen = ctx->zero_poly();
        gen[1] = 1;  // residue generator t
        Poly tlift = teichmueller_lift(*ctx, gen, 20);
        Scalar t = Scalar::make_unit(*ctx, tlift, 0, 20);
        Scalar tp = Scalar::one(*ctx);
        for (long i = 0; i < p; ++i) tp = tp * t;
        Scalar st = t.frobenius();
        CHECK(Scalar::indistinguishable(st, tp, 20));
    }
}

TEST_CASE("valuation algebra on seeded random scalars") {
    auto ctx = Context::make(3, 2, 24);
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        Scalar a = random_known(*ctx, rng);
        Scalar b = random_known(*ctx, rng);
        CHECK((a * b).valuation() == a.valuation() + b.valuation());
        Scalar s = a + b;
        long m = std::min(a.valuation(), b.valuation());
        CHECK(s.lower_bound() >= m);
        if (a.valuation() != b.valuation()) {
            CHECK(s.is_known());
            CHECK(s.valuation() == m);
        }
        Scalar q = a / b;
        CHECK(q.valuation() == a.valuation() - b.valuation());
    }
}

TEST_CASE("sigma is a ring automorphism of order r") {
    auto ctx = Context::make(2, 4, 24);
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        Scalar a = random_known(*ctx, rng);
        Scalar b = random_known(*ctx, rng);
        Scalar lhs = (a + b).frobenius();
        Scalar rhs = a.frobenius() + b.frobenius();
        CHECK(Scalar::indistinguishable(lhs, rhs, lhs.valuation() + 20));
        Scalar lm = (a * b).frobenius();
        Scalar rm = a.frobenius() * b.frobenius();
        CHECK(Scalar::indistinguishable(lm, rm, lm.valuation() + 20));
        Scalar c = a;
        for (unsigned k = 0; k < ctx->degree(); ++k) c = c.frobenius();
        CHECK(Scalar::indistinguishable(c, a, a.valuation() + 24));
    }
}

TEST_CASE("division by uncertain scalars is refused") {
    auto ctx = Context::make(2, 1, 8);
    Scalar a = Scalar::one(*ctx);
    CHECK_THROWS_AS(a / Scalar::zero(*ctx), division_by_uncertain);
    CHECK_THROWS_AS(a / Scalar::bounded_below(*ctx, 3), division_by_uncertain);
}
