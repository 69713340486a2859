#include "isoc/context.hpp"

#include <algorithm>

namespace isoc {

namespace {

// ---- F_p[x] helpers for the irreducibility test ----

using FpPoly = std::vector<mpz_class>;  // coefficients mod p, no trailing zeros

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, const mpz_class& p) {
    fp_trim(a);
    while (a.size() >= m.size()) {
        mpz_class c = a.back() * (m.back() == 1 ? 1 : 0);  // m monic in our use
        c = a.back();
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            a[shift + i] = (a[shift + i] - c * m[i]) % p;
            if (a[shift + i] < 0) a[shift + i] += p;
        }
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const FpPoly& m, const mpz_class& p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return fp_mod(std::move(c), m, p);
}

FpPoly fp_powmod(FpPoly base, mpz_class e, const FpPoly& m, const mpz_class& p) {
    FpPoly acc{1};
    base = fp_mod(std::move(base), m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = fp_mul(acc, base, m, p);
        base = fp_mul(base, base, m, p);
        e >>= 1;
    }
    return acc;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const mpz_class& p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // make b monic
        mpz_class lead = b.back(), inv;
        mpz_invert(inv.get_mpz_t(), lead.get_mpz_t(), p.get_mpz_t());
        for (auto& c : b) c = c * inv % p;
        a = fp_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

bool fp_irreducible(const FpPoly& m, const mpz_class& p) {
    const size_t r = m.size() - 1;
    if (r == 1) return true;
    // x^{p^r} == x mod m, and gcd(x^{p^{r/q}} - x, m) = 1 for prime q | r
    mpz_class pr;
    mpz_pow_ui(pr.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(r));
    FpPoly x{0, 1};
    FpPoly xr = fp_powmod(x, pr, m, p);
    FpPoly diff = xr;
    if (diff.size() < 2) diff.resize(2, mpz_class(0));
    diff[1] = (diff[1] - 1) % p;
    if (diff[1] < 0) diff[1] += p;
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (size_t q = 2; q <= r; ++q) {
        if (r % q != 0) continue;
        bool prime = true;
        for (size_t t = 2; t * t <= q; ++t)
            if (q % t == 0) { prime = false; break; }
        if (!prime) continue;
        mpz_class prq;
        mpz_pow_ui(prq.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(r / q));
        FpPoly sub = fp_powmod(x, prq, m, p);
        if (sub.size() < 2) sub.resize(2, mpz_class(0));
        sub[1] = (sub[1] - 1) % p;
        if (sub[1] < 0) sub[1] += p;
        FpPoly g = fp_gcd(m, sub, p);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace

Context::Context(mpz_class p, unsigned r, std::vector<mpz_class> modulus, unsigned precision)
    : p_(std::move(p)), r_(r), modulus_(std::move(modulus)), prec_(precision) {
    if (r_ == 0) throw input_error("residue degree must be >= 1");
    if (prec_ == 0) throw input_error("precision must be >= 1");
    if (p_ < 2 || mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0)
        throw input_error("p is not prime");
    if (modulus_.size() != r_ + 1 || modulus_.back() != 1)
        throw input_error("modulus must be monic of degree r");

    FpPoly mbar(modulus_.size());
    for (size_t i = 0; i < modulus_.size(); ++i) {
        mbar[i] = modulus_[i] % p_;
        if (mbar[i] < 0) mbar[i] += p_;
    }
    if (!fp_irreducible(mbar, p_)) throw input_error("modulus is reducible modulo p");

    pk_.resize(prec_ + 1);
    pk_[0] = 1;
    for (unsigned k = 1; k <= prec_; ++k) pk_[k] = pk_[k - 1] * p_;

    // x^{r+j} mod modulus, reduced mod p^N
    red_rows_.resize(r_ >= 1 ? r_ - 1 : 0);
    if (r_ >= 2) {
        Poly cur(r_);  // x^r = -(m_0 + m_1 x + ...)
        for (unsigned i = 0; i < r_; ++i) {
            mpz_class c = (-modulus_[i]) % pk_[prec_];
            if (c < 0) c += pk_[prec_];
            cur[i] = c;
        }
        red_rows_[0] = cur;
        for (unsigned j = 1; j + 1 < r_; ++j) {
            // multiply by x
            Poly nxt(r_, mpz_class(0));
            mpz_class top = cur[r_ - 1];
            for (unsigned i = r_ - 1; i >= 1; --i) nxt[i] = cur[i - 1];
            nxt[0] = 0;
            for (unsigned i = 0; i < r_; ++i) {
                nxt[i] = (nxt[i] + top * red_rows_[0][i]) % pk_[prec_];
            }
            red_rows_[j] = nxt;
            cur = std::move(nxt);
        }
    }

    build_sigma();
}

std::shared_ptr<const Context> Context::make(const mpz_class& p, unsigned r, unsigned precision) {
    if (r == 1) {
        return std::make_shared<const Context>(p, 1, std::vector<mpz_class>{0, 1}, precision);
    }
    // lexicographic search over monic polynomials with coefficients in [0, p)
    std::vector<mpz_class> coeffs(r, mpz_class(0));
    coeffs[0] = 1;
    for (;;) {
        std::vector<mpz_class> m = coeffs;
        m.push_back(1);
        FpPoly mbar = m;
        if (fp_irreducible(mbar, p)) {
            return std::make_shared<const Context>(p, r, std::move(m), precision);
        }
        unsigned i = 0;
        for (;;) {
            coeffs[i] += 1;
            if (coeffs[i] < p) break;
            coeffs[i] = 0;
            ++i;
            if (i == r) throw input_error("no irreducible modulus found");  // unreachable
        }
    }
}

std::shared_ptr<const Context> Context::make_with_modulus(mpz_class p, unsigned r,
                                                          std::vector<mpz_class> modulus,
                                                          unsigned precision) {
    return std::make_shared<const Context>(std::move(p), r, std::move(modulus), precision);
}

const mpz_class& Context::pk(unsigned k) const {
    if (k > prec_) throw insufficient_precision("p-power beyond working precision");
    return pk_[k];
}

Poly Context::one_poly() const {
    Poly a(r_, mpz_class(0));
    a[0] = 1;
    return a;
}

Poly Context::reduce(const Poly& a, unsigned n) const {
    Poly b(r_);
    const mpz_class& m = pk(n);
    for (unsigned i = 0; i < r_; ++i) {
        mpz_mod(b[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
    }
    return b;
}

Poly Context::add(const Poly& a, const Poly& b, unsigned n) const {
    Poly c(r_);
    const mpz_class& m = pk(n);
    for (unsigned i = 0; i < r_; ++i) {
        c[i] = a[i] + b[i];
        if (c[i] >= m) c[i] -= m;
    }
    return c;
}

Poly Context::sub(const Poly& a, const Poly& b, unsigned n) const {
    Poly c(r_);
    const mpz_class& m = pk(n);
    for (unsigned i = 0; i < r_; ++i) {
        c[i] = a[i] - b[i];
        if (c[i] < 0) c[i] += m;
    }
    return c;
}

Poly Context::neg(const Poly& a, unsigned n) const {
    Poly c(r_);
    const mpz_class& m = pk(n);
    for (unsigned i = 0; i < r_; ++i) {
        if (a[i] == 0) c[i] = 0;
        else c[i] = m - a[i] % m;
        if (c[i] == m) c[i] = 0;
    }
    return c;
}

Poly Context::mul_raw(const Poly& a, const Poly& b, const mpz_class& mod) const {
    if (r_ == 1) {
        Poly c(1);
        c[0] = a[0] * b[0] % mod;
        return c;
    }
    std::vector<mpz_class> full(2 * r_ - 1, mpz_class(0));
    for (unsigned i = 0; i < r_; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < r_; ++j) {
            if (b[j] == 0) continue;
            full[i + j] += a[i] * b[j];
        }
    }
    Poly c(r_);
    for (unsigned i = 0; i < r_; ++i) c[i] = full[i];
    for (unsigned k = r_; k < 2 * r_ - 1; ++k) {
        if (full[k] == 0) continue;
        const Poly& row = red_rows_[k - r_];
        for (unsigned i = 0; i < r_; ++i) c[i] += full[k] * row[i];
    }
    for (unsigned i = 0; i < r_; ++i) {
        mpz_mod(c[i].get_mpz_t(), c[i].get_mpz_t(), mod.get_mpz_t());
    }
    return c;
}

Poly Context::mul(const Poly& a, const Poly& b, unsigned n) const { return mul_raw(a, b, pk(n)); }

bool Context::is_zero(const Poly& a) const {
    for (const auto& c : a)
        if (c != 0) return false;
    return true;
}

bool Context::is_unit(const Poly& a) const {
    for (const auto& c : a)
        if (c % p_ != 0) return true;
    return false;
}

unsigned Context::p_content(const Poly& a, unsigned cap) const {
    unsigned best = cap;
    for (const auto& c : a) {
        if (c == 0) continue;
        unsigned w = 0;
        mpz_class tmp = c;
        while (w < best && mpz_divisible_p(tmp.get_mpz_t(), p_.get_mpz_t())) {
            tmp /= p_;
            ++w;
        }
        best = std::min(best, w);
        if (best == 0) return 0;
    }
    return best;
}

Poly Context::divide_p_power(const Poly& a, unsigned w, unsigned n) const {
    Poly c(r_);
    const mpz_class& pw = pk(w);
    for (unsigned i = 0; i < r_; ++i) c[i] = a[i] / pw;
    return reduce(c, n);
}

Poly Context::inv(const Poly& a, unsigned n) const {
    if (!is_unit(a)) throw division_by_uncertain();
    // residue inverse via extended Euclid in F_p[x]/(modulus)
    FpPoly u(r_);
    for (unsigned i = 0; i < r_; ++i) {
        u[i] = a[i] % p_;
        if (u[i] < 0) u[i] += p_;
    }
    fp_trim(u);
    FpPoly mbar = modulus_;
    for (auto& c : mbar) {
        c %= p_;
        if (c < 0) c += p_;
    }
    // extended Euclid: find s with s*u == 1 mod (mbar, p)
    FpPoly r0 = mbar, r1 = u, s0{}, s1{1};
    while (!r1.empty()) {
        // divide r0 by r1
        FpPoly q;
        FpPoly rem = r0;
        fp_trim(rem);
        if (rem.size() >= r1.size()) {
            q.assign(rem.size() - r1.size() + 1, mpz_class(0));
            mpz_class lead_inv;
            mpz_invert(lead_inv.get_mpz_t(), r1.back().get_mpz_t(), p_.get_mpz_t());
            while (rem.size() >= r1.size() && !rem.empty()) {
                mpz_class c = rem.back() * lead_inv % p_;
                size_t shift = rem.size() - r1.size();
                q[shift] = c;
                for (size_t i = 0; i < r1.size(); ++i) {
                    rem[shift + i] = (rem[shift + i] - c * r1[i]) % p_;
                    if (rem[shift + i] < 0) rem[shift + i] += p_;
                }
                fp_trim(rem);
            }
        }
        // s2 = s0 - q*s1
        FpPoly qs1;
        if (!q.empty() && !s1.empty()) {
            qs1.assign(q.size() + s1.size() - 1, mpz_class(0));
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j) qs1[i + j] = (qs1[i + j] + q[i] * s1[j]) % p_;
        }
        FpPoly s2(std::max(s0.size(), qs1.size()), mpz_class(0));
        for (size_t i = 0; i < s2.size(); ++i) {
            mpz_class x = (i < s0.size() ? s0[i] : mpz_class(0)) - (i < qs1.size() ? qs1[i] : mpz_class(0));
            x %= p_;
            if (x < 0) x += p_;
            s2[i] = x;
        }
        fp_trim(s2);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd (a nonzero constant); scale s0 by its inverse
    mpz_class ginv;
    mpz_invert(ginv.get_mpz_t(), r0[0].get_mpz_t(), p_.get_mpz_t());
    Poly z(r_, mpz_class(0));
    for (size_t i = 0; i < s0.size() && i < r_; ++i) z[i] = s0[i] * ginv % p_;

    // Newton lift: z <- z(2 - a z) doubles the precision each round
    unsigned cur = 1;
    while (cur < n) {
        cur = std::min(2 * cur, n);
        Poly az = mul(a, z, cur);
        Poly two_minus = neg(az, cur);
        two_minus[0] += 2;
        mpz_mod(two_minus[0].get_mpz_t(), two_minus[0].get_mpz_t(), pk(cur).get_mpz_t());
        z = mul(z, two_minus, cur);
    }
    return reduce(z, n);
}

Poly Context::pow(const Poly& a, const mpz_class& e, unsigned n) const {
    Poly acc = one_poly();
    Poly base = reduce(a, n);
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = mul(acc, base, n);
        base = mul(base, base, n);
        k >>= 1;
    }
    return acc;
}

Poly Context::frobenius(const Poly& a, unsigned n, unsigned power) const {
    power %= r_;
    if (power == 0) return reduce(a, n);
    const std::vector<Poly>& cols = sigma_pow_[power];
    Poly c(r_, mpz_class(0));
    for (unsigned j = 0; j < r_; ++j) {
        if (a[j] == 0) continue;
        const Poly& col = cols[j];
        for (unsigned i = 0; i < r_; ++i) c[i] += a[j] * col[i];
    }
    return reduce(c, n);
}

void Context::build_sigma() {
    sigma_pow_.resize(r_);
    // sigma^0 = identity
    sigma_pow_[0].resize(r_);
    for (unsigned j = 0; j < r_; ++j) {
        sigma_pow_[0][j] = zero_poly();
        sigma_pow_[0][j][j] = 1;
    }
    if (r_ == 1) return;

    // Hensel lift of t -> t^p: the unique root of the modulus congruent to
    // t^p mod p.  Newton iteration, doubling precision per round.
    Poly t = zero_poly();
    t[1] = 1;
    Poly x = pow(t, p_, 1);  // t^p mod p
    unsigned cur = 1;
    while (cur < prec_) {
        cur = std::min(2 * cur, prec_);
        x = reduce(x, cur);
        // m(x)
        Poly mx = zero_poly();
        for (unsigned i = r_ + 1; i-- > 0;) {
            mx = mul(mx, x, cur);
            mpz_class c = modulus_[i] % pk(cur);
            if (c < 0) c += pk(cur);
            mx[0] += c;
            mpz_mod(mx[0].get_mpz_t(), mx[0].get_mpz_t(), pk(cur).get_mpz_t());
        }
        // m'(x)
        Poly dmx = zero_poly();
        for (unsigned i = r_ + 1; i-- > 1;) {
            dmx = mul(dmx, x, cur);
            mpz_class c = (modulus_[i] * i) % pk(cur);
            if (c < 0) c += pk(cur);
            dmx[0] += c;
            mpz_mod(dmx[0].get_mpz_t(), dmx[0].get_mpz_t(), pk(cur).get_mpz_t());
        }
        Poly corr = mul(mx, inv(dmx, cur), cur);
        x = sub(x, corr, cur);
    }
    x = reduce(x, prec_);

    // columns sigma(t^j) = x^j
    sigma_pow_[1].resize(r_);
    Poly acc = one_poly();
    for (unsigned j = 0; j < r_; ++j) {
        sigma_pow_[1][j] = acc;
        if (j + 1 < r_) acc = mul(acc, x, prec_);
    }
    for (unsigned k = 2; k < r_; ++k) {
        sigma_pow_[k].resize(r_);
        for (unsigned j = 0; j < r_; ++j) {
            sigma_pow_[k][j] = frobenius(sigma_pow_[k - 1][j], prec_, 1);
        }
    }

    // certify sigma^r = id at precision N
    for (unsigned j = 0; j < r_; ++j) {
        Poly v = sigma_pow_[r_ - 1][j];
        v = frobenius(v, prec_, 1);
        Poly e = zero_poly();
        e[j] = 1;
        if (v != e) throw insufficient_precision("sigma^r != id at working precision");
    }
}

}  // namespace isoc
