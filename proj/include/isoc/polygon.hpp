#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "isoc/errors.hpp"

namespace isoc {

using Rational = mpq_class;

// Element of (Q^d)_+ : rational slopes sorted decreasingly.  Constructors
// sort their input, so callers may pass multisets.
class SlopeVector {
public:
    SlopeVector() = default;
    explicit SlopeVector(std::vector<Rational> entries);
    static SlopeVector integral(const std::vector<long>& entries);

    size_t size() const { return v_.size(); }
    const Rational& operator[](size_t i) const { return v_[i]; }
    const std::vector<Rational>& entries() const { return v_; }

    Rational total() const;  // |lambda|
    bool operator==(const SlopeVector& o) const { return v_ == o.v_; }
    bool operator!=(const SlopeVector& o) const { return v_ != o.v_; }
    bool operator<(const SlopeVector& o) const { return v_ < o.v_; }  // container order, for maps

    bool is_integral() const;
    std::string str() const;  // "[n1/d1, n2/d2, ...]"
    static SlopeVector parse(const std::string& text);

private:
    std::vector<Rational> v_;
};

// Convex polygon of a slope vector: vertices from (0,0), slopes increasing
// left to right, the segment of slope s having x-extent equal to the
// multiplicity of s.
class NewtonPolygon {
public:
    static NewtonPolygon of(const SlopeVector& lambda);

    const std::vector<std::pair<Rational, Rational>>& vertices() const { return verts_; }
    Rational value_at(const Rational& x) const;  // piecewise-linear evaluation
    std::pair<Rational, Rational> endpoint() const { return verts_.back(); }
    std::string str() const;

private:
    std::vector<std::pair<Rational, Rational>> verts_;
};

// Partial-sum route: true iff every prefix sum of a is <= that of b and the
// totals agree.
bool dominance_leq(const SlopeVector& a, const SlopeVector& b);

// Geometric route: P(a) lies on or above P(b) with identical endpoints.
// Kept independent of dominance_leq so the two can cross-check each other.
bool polygon_above_same_endpoints(const SlopeVector& a, const SlopeVector& b);

// P(a) lies on or below P(b) pointwise (endpoints need not match).
bool polygon_below_pointwise(const SlopeVector& a, const SlopeVector& b);

}  // namespace isoc
