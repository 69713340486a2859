#pragma once

#include <gmpxx.h>

#include <memory>
#include <vector>

#include "isoc/errors.hpp"

namespace isoc {

// Coefficient polynomial in the power basis 1, t, ..., t^{r-1}; coefficients
// are canonical representatives in [0, p^n) for the relevant precision n.
using Poly = std::vector<mpz_class>;

// Model of W(F_{p^r})[1/p] at relative precision N in pi-units, pi = p,
// v(pi) = 1.  The residue field is F_p[x]/(modulus mod p); sigma is the unique
// ring automorphism lifting the p-power map on residues, computed once by
// Hensel-lifting t -> sigma(t) and stored as a matrix on the power basis.
//
// Contexts are immutable after construction and safe to share between threads.
class Context {
public:
    // modulus: monic integer polynomial of degree r, coefficients low to high
    // (length r+1, leading coefficient 1), irreducible modulo p.
    Context(mpz_class p, unsigned r, std::vector<mpz_class> modulus, unsigned precision);

    // Deterministically picks the lexicographically first irreducible monic
    // modulus with coefficients in [0, p).
    static std::shared_ptr<const Context> make(const mpz_class& p, unsigned r, unsigned precision);
    static std::shared_ptr<const Context> make_with_modulus(mpz_class p, unsigned r,
                                                            std::vector<mpz_class> modulus,
                                                            unsigned precision);

    const mpz_class& prime() const { return p_; }
    unsigned degree() const { return r_; }            // residue degree r
    unsigned precision() const { return prec_; }      // relative precision N
    const std::vector<mpz_class>& modulus() const { return modulus_; }

    // p^k for 0 <= k <= N.
    const mpz_class& pk(unsigned k) const;

    // ---- ring operations on coefficient polynomials mod (p^n, modulus) ----
    Poly zero_poly() const { return Poly(r_, mpz_class(0)); }
    Poly one_poly() const;
    Poly reduce(const Poly& a, unsigned n) const;          // canonical mod p^n
    Poly add(const Poly& a, const Poly& b, unsigned n) const;
    Poly sub(const Poly& a, const Poly& b, unsigned n) const;
    Poly neg(const Poly& a, unsigned n) const;
    Poly mul(const Poly& a, const Poly& b, unsigned n) const;
    Poly inv(const Poly& a, unsigned n) const;             // a must be a unit
    Poly pow(const Poly& a, const mpz_class& e, unsigned n) const;

    // sigma^power applied coefficient-wise through the precomputed matrix.
    Poly frobenius(const Poly& a, unsigned n, unsigned power = 1) const;

    bool is_zero(const Poly& a) const;
    bool is_unit(const Poly& a) const;                     // nonzero residue
    // Largest w with p^w dividing every coefficient (at most cap).
    unsigned p_content(const Poly& a, unsigned cap) const;
    Poly divide_p_power(const Poly& a, unsigned w, unsigned n) const;

    bool operator==(const Context& o) const {
        return p_ == o.p_ && r_ == o.r_ && modulus_ == o.modulus_ && prec_ == o.prec_;
    }

private:
    mpz_class p_;
    unsigned r_;
    std::vector<mpz_class> modulus_;
    unsigned prec_;
    std::vector<mpz_class> pk_;                 // p^0 .. p^N
    std::vector<Poly> red_rows_;                // x^{r+j} mod modulus, j = 0..r-2
    std::vector<std::vector<Poly>> sigma_pow_;  // sigma^j matrix columns, j = 0..r-1

    void build_sigma();
    Poly mul_raw(const Poly& a, const Poly& b, const mpz_class& mod) const;
};

using ContextPtr = std::shared_ptr<const Context>;

}  // namespace isoc
