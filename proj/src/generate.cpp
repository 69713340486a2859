#include "isoc/generate.hpp"

#include <algorithm>
#include <numeric>

#include "isoc/existence.hpp"

namespace isoc {

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

std::vector<StandardSummand> draw_summands(unsigned d, Rng& rng, bool multfree) {
    for (;;) {
        std::vector<StandardSummand> sm;
        unsigned left = d;
        std::vector<Rational> used;
        bool ok = true;
        while (left > 0) {
            unsigned b = 1 + static_cast<unsigned>(rng.below(std::min(left, 4u)));
            long a = rng.range(-3, 3);
            if (std::gcd(std::labs(a), static_cast<long>(b)) != 1) continue;
            Rational slope(a, static_cast<long>(b));
            slope.canonicalize();
            if (multfree) {
                bool dup = false;
                for (const auto& s : used)
                    if (s == slope) dup = true;
                if (dup) {
                    // a repeated slope would break multiplicity-freeness
                    if (left == d) continue;  // retry this part
                    ok = false;
                    break;
                }
            }
            used.push_back(slope);
            sm.push_back({a, b, 1});
            left -= b;
        }
        if (ok && !sm.empty()) return sm;
    }
}

unsigned splitting_level(const std::vector<StandardSummand>& sm) {
    long s = 1;
    for (const auto& x : sm) s = lcm_long(s, static_cast<long>(x.b));
    return static_cast<unsigned>(s);
}

}  // namespace

Matrix generate_unimodular(const Context& ctx, unsigned d, Rng& rng, unsigned level) {
    Matrix g = Matrix::identity(ctx, d);
    const unsigned deg = level == 1 ? 1 : ctx.degree();
    for (int s = 0; s < 2 * static_cast<int>(d); ++s) {
        unsigned i = static_cast<unsigned>(rng.below(d));
        unsigned j = static_cast<unsigned>(rng.below(d));
        if (i == j) continue;
        std::vector<mpz_class> coeffs(deg, mpz_class(0));
        for (auto& c : coeffs) c = rng.range(-4, 4);
        Scalar c = Scalar::from_int_poly(ctx, coeffs);
        if (c.is_zero()) continue;
        for (unsigned k = 0; k < d; ++k) g.at(k, i) = g.at(k, i) + g.at(k, j) * c;
    }
    if (rng.coin() && d >= 2) {
        unsigned i = static_cast<unsigned>(rng.below(d - 1));
        for (unsigned k = 0; k < d; ++k) std::swap(g.at(k, i), g.at(k, i + 1));
    }
    return g;
}

Isocrystal generate_multfree(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 1);
    auto sm = draw_summands(d, rng, true);
    unsigned r = splitting_level(sm);
    auto ctx = Context::make(p, r, prec);
    Isocrystal x = Isocrystal::standard_form(ctx, sm);
    if (rng.coin()) x = x.base_changed(generate_unimodular(*ctx, d, rng, r));
    return x;
}

Isocrystal generate_standard(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 2);
    auto sm = draw_summands(d, rng, false);
    unsigned r = splitting_level(sm);
    auto ctx = Context::make(p, r, prec);
    Isocrystal x = Isocrystal::standard_form(ctx, sm);
    if (rng.coin()) x = x.base_changed(generate_unimodular(*ctx, d, rng, r));
    return x;
}

std::vector<long> minimal_integral_above(const SlopeVector& nu) {
    const size_t d = nu.size();
    // points (j, ceil(P_j)) with fixed endpoints (0,0), (d, |nu|)
    std::vector<std::pair<long, long>> pts;
    pts.emplace_back(0, 0);
    Rational run(0);
    for (size_t j = 0; j + 1 < d; ++j) {
        run += nu[j];
        mpz_class num = run.get_num(), den = run.get_den();
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        pts.emplace_back(static_cast<long>(j + 1), q.get_si());
    }
    run += nu[d - 1];
    pts.emplace_back(static_cast<long>(d), run.get_num().get_si());
    // upper concave hull
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            __int128 cross = static_cast<__int128>(b.first - a.first) * (p.second - a.second) -
                             static_cast<__int128>(b.second - a.second) * (p.first - a.first);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    std::vector<long> mu(d, 0);
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        long x1 = hull[k].first, y1 = hull[k].second;
        long x2 = hull[k + 1].first, y2 = hull[k + 1].second;
        for (long j = x1; j < x2; ++j) {
            // integral segment heights; dx divides dy on the hull of integer pts?
            // not necessarily: distribute as evenly as possible, larger first
            long dy = y2 - y1, dx = x2 - x1;
            long base = dy >= 0 ? dy / dx : -((-dy + dx - 1) / dx);
            long rem = dy - base * dx;
            mu[static_cast<size_t>(j)] = base + ((j - x1) < rem ? 1 : 0);
        }
    }
    // the even distribution above can break monotonicity within a segment;
    // sort the segment contributions decreasingly (same partial sums or higher)
    std::sort(mu.begin(), mu.end(), std::greater<long>());
    return mu;
}

std::vector<long> random_type_above(const SlopeVector& nu, Rng& rng, unsigned raises) {
    std::vector<long> mu = minimal_integral_above(nu);
    const size_t d = mu.size();
    for (unsigned t = 0; t < raises; ++t) {
        if (d < 2) break;
        size_t i = rng.below(d);
        size_t j = rng.below(d);
        if (i >= j) continue;
        std::vector<long> cand = mu;
        cand[i] += 1;
        cand[j] -= 1;
        bool dec = true;
        for (size_t k = 0; k + 1 < d; ++k)
            if (cand[k] < cand[k + 1]) dec = false;
        if (dec) mu = std::move(cand);
    }
    return mu;
}

std::optional<std::vector<long>> random_type_not_above(const SlopeVector& nu, Rng& rng) {
    const size_t d = nu.size();
    if (d < 2) return std::nullopt;
    if (rng.below(4) == 0) {
        // wrong total
        std::vector<long> mu = minimal_integral_above(nu);
        mu[0] += 1 + static_cast<long>(rng.below(2));
        return mu;
    }
    std::vector<long> mu = minimal_integral_above(nu);
    SlopeVector nu_copy = nu;
    for (unsigned t = 0; t < 40; ++t) {
        size_t i = rng.below(d);
        size_t j = rng.below(d);
        if (i >= j) continue;
        std::vector<long> cand = mu;
        cand[i] -= 1;
        cand[j] += 1;
        bool dec = true;
        for (size_t k = 0; k + 1 < d; ++k)
            if (cand[k] < cand[k + 1]) dec = false;
        if (!dec) continue;
        mu = std::move(cand);
        if (!dominance_leq(nu_copy, SlopeVector::integral(mu))) return mu;
    }
    if (!dominance_leq(nu_copy, SlopeVector::integral(mu))) return mu;
    return std::nullopt;
}

Lattice generate_lattice(const Context& ctx, unsigned d, Rng& rng) {
    for (;;) {
        Matrix b(ctx, d, d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j) {
                long shift = rng.below(6) == 0 ? rng.range(1, 2) : 0;
                b.at(i, j) =
                    Scalar::from_integer(ctx, mpz_class(rng.range(-9, 9))).shifted(shift);
            }
        try {
            return Lattice(b);
        } catch (const error&) {
        }
    }
}

Filtration generate_filtration(const Isocrystal& x, const std::vector<long>& mu, Rng& rng) {
    const unsigned level = x.restriction() ? *x.restriction() : x.ctx().degree();
    Matrix flag = random_flag(x.ctx(), x.dim(), rng, level);
    return Filtration(x.ctx_ptr(), mu, std::move(flag));
}

PhiNModule generate_phi_n(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 3);
    auto ctx = Context::make(p, 2, prec);
    // integer slopes a_1 >= ... >= a_d drawn in a small window
    std::vector<long> slopes(d);
    for (auto& a : slopes) a = rng.range(-1, 2);
    std::sort(slopes.begin(), slopes.end(), std::greater<long>());
    std::vector<StandardSummand> sm;
    for (long a : slopes) sm.push_back({a, 1, 1});
    Isocrystal x = Isocrystal::standard_form(ctx, sm);
    // slope-lowering monodromy: entries where a_i = a_j - 1
    Matrix n(*ctx, d, d);
    bool nonzero = false;
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            if (slopes[i] != slopes[j] - 1) continue;
            long c = rng.range(-3, 3);
            if (c == 0) continue;
            n.at(i, j) = Scalar::from_integer(*ctx, mpz_class(c));
            nonzero = true;
        }
    if (rng.below(4) == 0) {
        // include N = 0 modules in the stream
        n = Matrix(*ctx, d, d);
        nonzero = false;
    }
    (void)nonzero;
    if (rng.coin()) {
        Matrix g = generate_unimodular(*ctx, d, rng, ctx->degree());
        Matrix gi = inverse(g);
        PhiNModule m{x.base_changed(g), g * n * gi};
        return m;
    }
    return PhiNModule{x, n};
}

}  // namespace isoc
