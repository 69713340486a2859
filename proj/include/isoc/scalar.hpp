#pragma once

#include <string>

#include "isoc/context.hpp"

namespace isoc {

// Element of the coefficient field with tracked precision.  Three states:
//
//   Zero     -- exactly 0.
//   Known    -- pi^val * unit, the unit invertible and known modulo
//               p^relprec (1 <= relprec <= N); the valuation is exact.
//   Bounded  -- true valuation >= bound, nothing else is certified.
//
// Arithmetic never reports a valuation smaller than the truth permits;
// cancellation turns Known into Bounded instead of guessing.
class Scalar {
public:
    enum class State { Zero, Known, Bounded };

    Scalar() : ctx_(nullptr), state_(State::Zero), val_(0), rel_(0) {}

    static Scalar zero(const Context& ctx);
    static Scalar one(const Context& ctx);
    static Scalar from_integer(const Context& ctx, const mpz_class& z);  // exact
    // exact integer-coefficient polynomial c0 + c1 t + ...
    static Scalar from_int_poly(const Context& ctx, const std::vector<mpz_class>& coeffs);
    static Scalar pi_power(const Context& ctx, long k);
    static Scalar make_unit(const Context& ctx, Poly u, long val, unsigned relprec);
    static Scalar bounded_below(const Context& ctx, long bound);

    const Context& ctx() const { return *ctx_; }
    State state() const { return state_; }
    bool is_zero() const { return state_ == State::Zero; }
    bool is_known() const { return state_ == State::Known; }
    bool is_bounded() const { return state_ == State::Bounded; }

    // Exact valuation; throws insufficient_precision on Bounded and
    // input_error on Zero (v(0) is +infinity).
    long valuation() const;
    // Lower bound on the valuation, defined in every state (Zero gives a
    // large sentinel).
    long lower_bound() const;
    unsigned relprec() const { return rel_; }
    const Poly& unit() const { return unit_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar inverse() const;
    Scalar frobenius(unsigned power = 1) const;
    Scalar shifted(long k) const;  // multiply by pi^k

    // representation equality (same state, valuation, precision and digits)
    bool same_representation(const Scalar& o) const;

    // True if (a - b) is Zero or bounded below by `floor`.
    static bool indistinguishable(const Scalar& a, const Scalar& b, long floor);

    // The exact value formed by the p-adic digits below pi^cut.  Requires the
    // representation to determine them (val + relprec >= cut).  Used for
    // canonical lattice forms.
    Scalar truncated(long cut) const;

    std::string str() const;  // debug / report form

    static const long kZeroSentinel = 1L << 40;

private:
    const Context* ctx_;
    State state_;
    long val_;        // Known: exact valuation; Bounded: the bound
    unsigned rel_;    // Known only
    Poly unit_;       // Known only

    void normalize_known();
};

}  // namespace isoc
