#include "isoc/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace isoc {

Scalar Scalar::zero(const Context& ctx) {
    Scalar s;
    s.ctx_ = &ctx;
    s.state_ = State::Zero;
    return s;
}

Scalar Scalar::one(const Context& ctx) { return pi_power(ctx, 0); }

Scalar Scalar::pi_power(const Context& ctx, long k) {
    Scalar s;
    s.ctx_ = &ctx;
    s.state_ = State::Known;
    s.val_ = k;
    s.rel_ = ctx.precision();
    s.unit_ = ctx.one_poly();
    return s;
}

Scalar Scalar::from_integer(const Context& ctx, const mpz_class& z) {
    std::vector<mpz_class> coeffs{z};
    return from_int_poly(ctx, coeffs);
}

Scalar Scalar::from_int_poly(const Context& ctx, const std::vector<mpz_class>& coeffs) {
    if (coeffs.size() > ctx.degree()) throw input_error("coefficient list longer than degree");
    Poly u = ctx.zero_poly();
    bool nonzero = false;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        u[i] = coeffs[i];
        if (coeffs[i] != 0) nonzero = true;
    }
    if (!nonzero) return zero(ctx);
    // exact p-content of the integer data
    unsigned w = 0;
    for (;;) {
        bool all = true;
        for (auto& c : u)
            if (c != 0 && !mpz_divisible_p(c.get_mpz_t(), ctx.prime().get_mpz_t())) {
                all = false;
                break;
            }
        if (!all) break;
        for (auto& c : u) c /= ctx.prime();
        ++w;
    }
    Scalar s;
    s.ctx_ = &ctx;
    s.state_ = State::Known;
    s.val_ = static_cast<long>(w);
    s.rel_ = ctx.precision();
    s.unit_ = ctx.reduce(u, ctx.precision());
    return s;
}

Scalar Scalar::make_unit(const Context& ctx, Poly u, long val, unsigned relprec) {
    if (relprec == 0 || relprec > ctx.precision()) throw input_error("bad relative precision");
    Scalar s;
    s.ctx_ = &ctx;
    s.state_ = State::Known;
    s.val_ = val;
    s.rel_ = relprec;
    s.unit_ = ctx.reduce(u, relprec);
    if (!ctx.is_unit(s.unit_)) throw input_error("unit part is not invertible");
    return s;
}

Scalar Scalar::bounded_below(const Context& ctx, long bound) {
    Scalar s;
    s.ctx_ = &ctx;
    s.state_ = State::Bounded;
    s.val_ = bound;
    return s;
}

long Scalar::valuation() const {
    switch (state_) {
        case State::Known: return val_;
        case State::Zero: throw input_error("valuation of exact zero requested");
        default: throw insufficient_precision("valuation only bounded below");
    }
}

long Scalar::lower_bound() const {
    switch (state_) {
        case State::Known:
        case State::Bounded: return val_;
        default: return kZeroSentinel;
    }
}

void Scalar::normalize_known() {
    unsigned w = ctx_->p_content(unit_, rel_);
    if (w == 0) return;
    if (w >= rel_) {
        state_ = State::Bounded;
        val_ = val_ + static_cast<long>(rel_);
        rel_ = 0;
        unit_.clear();
        return;
    }
    unit_ = ctx_->divide_p_power(unit_, w, rel_ - w);
    val_ += static_cast<long>(w);
    rel_ -= w;
}

Scalar Scalar::operator+(const Scalar& o) const {
    const Context& c = *ctx_;
    if (state_ == State::Zero) return o;
    if (o.state_ == State::Zero) return *this;
    if (state_ == State::Bounded && o.state_ == State::Bounded)
        return bounded_below(c, std::min(val_, o.val_));
    if (state_ == State::Bounded || o.state_ == State::Bounded) {
        const Scalar& k = state_ == State::Known ? *this : o;
        const Scalar& b = state_ == State::Bounded ? *this : o;
        if (b.val_ > k.val_) {
            long n = std::min<long>(k.rel_, b.val_ - k.val_);
            Scalar s;
            s.ctx_ = &c;
            s.state_ = State::Known;
            s.val_ = k.val_;
            s.rel_ = static_cast<unsigned>(n);
            s.unit_ = c.reduce(k.unit_, s.rel_);
            return s;  // leading digits unaffected by the bounded tail
        }
        return bounded_below(c, std::min(k.val_, b.val_));
    }
    // Known + Known
    const Scalar& lo = val_ <= o.val_ ? *this : o;
    const Scalar& hi = val_ <= o.val_ ? o : *this;
    if (lo.val_ < hi.val_) {
        long shift = hi.val_ - lo.val_;
        long n = std::min<long>(lo.rel_, shift + hi.rel_);
        Scalar s;
        s.ctx_ = &c;
        s.state_ = State::Known;
        s.val_ = lo.val_;
        s.rel_ = static_cast<unsigned>(n);
        if (shift >= n) {
            s.unit_ = c.reduce(lo.unit_, s.rel_);
        } else {
            Poly shifted = hi.unit_;
            const mpz_class& pw = c.pk(static_cast<unsigned>(shift));
            for (auto& x : shifted) x *= pw;
            s.unit_ = c.add(c.reduce(lo.unit_, s.rel_), c.reduce(shifted, s.rel_), s.rel_);
        }
        return s;  // result unit still a unit: lo dominates
    }
    // equal valuations: possible cancellation
    unsigned n = std::min(rel_, o.rel_);
    Poly u = c.add(c.reduce(unit_, n), c.reduce(o.unit_, n), n);
    if (c.is_zero(u)) return bounded_below(c, val_ + static_cast<long>(n));
    Scalar s;
    s.ctx_ = &c;
    s.state_ = State::Known;
    s.val_ = val_;
    s.rel_ = n;
    s.unit_ = std::move(u);
    s.normalize_known();
    return s;
}

Scalar Scalar::operator-() const {
    if (state_ != State::Known) return *this;
    Scalar s = *this;
    s.unit_ = ctx_->neg(unit_, rel_);
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    // Self-cancellation x - x is syntactic: the same term on both sides is
    // exactly zero no matter how few digits are tracked.  Values that merely
    // share a representation stay BoundedBelow: they may differ beyond the
    // precision cap.
    if (this == &o) return zero(*ctx_);
    if (o.state_ == State::Zero) return *this;
    return *this + (-o);
}

Scalar Scalar::operator*(const Scalar& o) const {
    const Context& c = *ctx_;
    if (state_ == State::Zero || o.state_ == State::Zero) return zero(c);
    if (state_ == State::Bounded || o.state_ == State::Bounded)
        return bounded_below(c, lower_bound() + o.lower_bound());
    Scalar s;
    s.ctx_ = &c;
    s.state_ = State::Known;
    s.val_ = val_ + o.val_;
    s.rel_ = std::min(rel_, o.rel_);
    s.unit_ = c.mul(c.reduce(unit_, s.rel_), c.reduce(o.unit_, s.rel_), s.rel_);
    return s;
}

Scalar Scalar::inverse() const {
    if (state_ != State::Known) throw division_by_uncertain();
    Scalar s;
    s.ctx_ = ctx_;
    s.state_ = State::Known;
    s.val_ = -val_;
    s.rel_ = rel_;
    s.unit_ = ctx_->inv(unit_, rel_);
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.state_ != State::Known) throw division_by_uncertain();
    if (state_ == State::Zero) return zero(*ctx_);
    if (state_ == State::Bounded) return bounded_below(*ctx_, val_ - o.val_);
    return *this * o.inverse();
}

Scalar Scalar::frobenius(unsigned power) const {
    if (state_ != State::Known) return *this;  // sigma preserves valuations
    Scalar s = *this;
    s.unit_ = ctx_->frobenius(unit_, rel_, power);
    return s;
}

Scalar Scalar::shifted(long k) const {
    if (state_ == State::Zero) return *this;
    Scalar s = *this;
    s.val_ += k;
    return s;
}

bool Scalar::same_representation(const Scalar& o) const {
    if (state_ != o.state_) return false;
    switch (state_) {
        case State::Zero: return true;
        case State::Bounded: return val_ == o.val_;
        default: return val_ == o.val_ && rel_ == o.rel_ && unit_ == o.unit_;
    }
}

bool Scalar::indistinguishable(const Scalar& a, const Scalar& b, long floor) {
    Scalar d = a - b;
    return d.is_zero() || d.lower_bound() >= floor;
}

Scalar Scalar::truncated(long cut) const {
    const Context& c = *ctx_;
    if (state_ == State::Zero) return zero(c);
    if (state_ == State::Bounded) {
        if (val_ >= cut) return zero(c);
        throw insufficient_precision("truncation of a bounded-below scalar");
    }
    if (val_ >= cut) return zero(c);
    long need = cut - val_;  // digits of the unit required
    if (need > static_cast<long>(rel_))
        throw insufficient_precision("truncation beyond tracked precision");
    const mpz_class& m = c.pk(static_cast<unsigned>(need));
    Poly u = c.zero_poly();
    bool nonzero = false;
    for (unsigned i = 0; i < c.degree(); ++i) {
        mpz_mod(u[i].get_mpz_t(), unit_[i].get_mpz_t(), m.get_mpz_t());
        if (u[i] != 0) nonzero = true;
    }
    if (!nonzero) return zero(c);
    // exactly-described value: full precision, re-normalized
    Scalar s;
    s.ctx_ = &c;
    s.state_ = State::Known;
    s.val_ = val_;
    s.rel_ = c.precision();
    s.unit_ = std::move(u);
    s.normalize_known();
    return s;
}

std::string Scalar::str() const {
    std::ostringstream os;
    switch (state_) {
        case State::Zero: os << "0"; break;
        case State::Bounded: os << "O(pi^" << val_ << ")"; break;
        default: {
            os << "pi^" << val_ << "*(";
            for (size_t i = 0; i < unit_.size(); ++i) {
                if (i) os << " + ";
                os << unit_[i].get_str();
                if (i == 1) os << "*t";
                if (i > 1) os << "*t^" << i;
            }
            os << " mod p^" << rel_ << ")";
        }
    }
    return os.str();
}

}  // namespace isoc
