#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isoc/matrix.hpp"
#include "isoc/rng.hpp"

using namespace isoc;

namespace {

Matrix random_unimodular(const Context& ctx, unsigned n, Rng& rng, int shears = 8) {
    Matrix g = Matrix::identity(ctx, n);
    for (int s = 0; s < shears; ++s) {
        unsigned i = static_cast<unsigned>(rng.below(n));
        unsigned j = static_cast<unsigned>(rng.below(n));
        if (i == j) continue;
        Scalar c = Scalar::from_integer(ctx, mpz_class(rng.range(-5, 5)));
        for (unsigned k = 0; k < n; ++k) g.at(i, k) = g.at(i, k) + c * g.at(j, k);
    }
    // random permutation-ish swap
    for (unsigned i = 0; i + 1 < n; ++i) {
        if (rng.coin()) {
            for (unsigned k = 0; k < n; ++k) std::swap(g.at(i, k), g.at(i + 1, k));
        }
    }
    return g;
}

Matrix random_invertible(const Context& ctx, unsigned n, Rng& rng) {
    for (;;) {
        Matrix m(ctx, n, n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                m.at(i, j) = Scalar::from_integer(ctx, mpz_class(rng.range(-20, 20)));
        try {
            if (rank(m) == n) return m;
        } catch (const insufficient_precision&) {
        }
    }
}

}  // namespace

TEST_CASE("kernel basics") {
    auto ctx = Context::make(2, 1, 24);
    CHECK(kernel_basis(Matrix::identity(*ctx, 3)).empty());

    Matrix z(*ctx, 2, 2);
    CHECK(kernel_basis(z).size() == 2);

    Matrix m(*ctx, 2, 2);
    m.at(0, 0) = m.at(0, 1) = m.at(1, 0) = m.at(1, 1) = Scalar::one(*ctx);
    auto kb = kernel_basis(m);
    REQUIRE(kb.size() == 1);
    // spanned by (1, -1)
    Scalar ratio = kb[0][0] / kb[0][1];
    CHECK(Scalar::indistinguishable(ratio, -Scalar::one(*ctx), 20));
}

TEST_CASE("kernel vectors annihilate the matrix at the documented floor") {
    auto ctx = Context::make(3, 2, 24);
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned n = 3 + static_cast<unsigned>(rng.below(2));
        Matrix m(*ctx, n - 1, n);  // wide: kernel nonempty
        for (unsigned i = 0; i + 1 < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                m.at(i, j) = Scalar::from_integer(*ctx, mpz_class(rng.range(-9, 9))).shifted(rng.range(0, 2));
        auto kb = kernel_basis(m);
        CHECK(!kb.empty());
        for (const auto& v : kb) {
            for (unsigned i = 0; i + 1 < n; ++i) {
                Scalar acc = Scalar::zero(*ctx);
                for (unsigned j = 0; j < n; ++j) acc = acc + m.at(i, j) * v[j];
                CHECK((acc.is_zero() || acc.lower_bound() >= 24 - 3 * 4));
            }
        }
    }
}

TEST_CASE("smith valuations: stated examples") {
    auto ctx = Context::make(2, 1, 24);
    Matrix d(*ctx, 2, 2);
    d.at(0, 0) = Scalar::pi_power(*ctx, 2);
    d.at(1, 1) = Scalar::one(*ctx);
    CHECK(smith_valuations(d) == std::vector<long>{2, 0});

    Rng rng(11);
    Matrix u = random_unimodular(*ctx, 3, rng);
    CHECK(smith_valuations(u) == std::vector<long>{0, 0, 0});

    // hand oracle: [[0, pi], [1, 0]] has elementary divisors pi, 1
    Matrix c(*ctx, 2, 2);
    c.at(0, 1) = Scalar::pi_power(*ctx, 1);
    c.at(1, 0) = Scalar::one(*ctx);
    CHECK(smith_valuations(c) == std::vector<long>{1, 0});
}

TEST_CASE("smith valuations are unimodular invariants") {
    auto ctx = Context::make(2, 2, 32);
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned n = 2 + static_cast<unsigned>(rng.below(3));
        Matrix m = random_invertible(*ctx, n, rng);
        auto want = smith_valuations(m);
        Matrix u = random_unimodular(*ctx, n, rng);
        Matrix v = random_unimodular(*ctx, n, rng);
        CHECK(smith_valuations(u * m * v) == want);
    }
}

TEST_CASE("inverse and solve round trip") {
    auto ctx = Context::make(5, 1, 20);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = random_invertible(*ctx, 3, rng);
        Matrix inv = inverse(m);
        Matrix prod = m * inv;
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = 0; j < 3; ++j) {
                Scalar want = i == j ? Scalar::one(*ctx) : Scalar::zero(*ctx);
                CHECK(Scalar::indistinguishable(prod.at(i, j), want, 14));
            }
    }
}

TEST_CASE("charpoly of a companion block and its root valuations") {
    auto ctx = Context::make(2, 2, 24);
    // [[0, pi], [1, 0]] has characteristic polynomial X^2 - pi
    Matrix c(*ctx, 2, 2);
    c.at(0, 1) = Scalar::pi_power(*ctx, 1);
    c.at(1, 0) = Scalar::one(*ctx);
    auto cp = charpoly(c);
    REQUIRE(cp.size() == 3);
    CHECK(Scalar::indistinguishable(cp[0], -Scalar::pi_power(*ctx, 1), 20));
    CHECK((cp[1].is_zero() || cp[1].lower_bound() >= 20));
    auto roots = newton_root_valuations(cp);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].first.first == 1);   // valuation 1/2
    CHECK(roots[0].first.second == 2);
    CHECK(roots[0].second == 2);
}

TEST_CASE("determinant valuation matches smith total") {
    auto ctx = Context::make(3, 1, 28);
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix m = random_invertible(*ctx, 3, rng);
        auto sv = smith_valuations(m);
        long total = 0;
        for (long v : sv) total += v;
        CHECK(det_valuation(m) == total);
    }
}

TEST_CASE("saturation via the left Smith transform") {
    auto ctx = Context::make(2, 1, 24);
    // columns (1,1) and (1,-1): saturation of the span is all of O^2 at p=2
    Matrix c(*ctx, 2, 2);
    c.at(0, 0) = Scalar::one(*ctx);
    c.at(1, 0) = Scalar::one(*ctx);
    c.at(0, 1) = Scalar::one(*ctx);
    c.at(1, 1) = Scalar::from_integer(*ctx, -1);
    auto [u, vals] = smith_left_transform(c);
    REQUIRE(vals.size() == 2);
    Matrix sat = u.cols_range(0, 2);
    CHECK(det_valuation(sat) == 0);  // spans O^2
}
