#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "isoc/scalar.hpp"

namespace isoc {

// Dense matrix over the coefficient field; all entries share one context.
class Matrix {
public:
    Matrix() : ctx_(nullptr), rows_(0), cols_(0) {}
    Matrix(const Context& ctx, unsigned rows, unsigned cols)
        : ctx_(&ctx), rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(ctx)) {}

    static Matrix identity(const Context& ctx, unsigned n);

    const Context& ctx() const { return *ctx_; }
    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }

    Scalar& at(unsigned i, unsigned j) { return a_[i * cols_ + j]; }
    const Scalar& at(unsigned i, unsigned j) const { return a_[i * cols_ + j]; }

    Matrix transpose() const;
    Matrix map_frobenius(unsigned power = 1) const;
    Matrix pi_scaled(long k) const;       // multiply every entry by pi^k
    Matrix scaled(const Scalar& c) const;

    Matrix col(unsigned j) const;
    Matrix cols_range(unsigned first, unsigned count) const;
    std::vector<Scalar> col_vec(unsigned j) const;
    void set_col(unsigned j, const std::vector<Scalar>& v);

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);

    std::string str() const;

private:
    const Context* ctx_;
    unsigned rows_, cols_;
    std::vector<Scalar> a_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix from_cols(const Context& ctx, unsigned rows, const std::vector<std::vector<Scalar>>& cols);
Matrix kron(const Matrix& a, const Matrix& b);

// ---- elimination-backed algorithms (valuation-pivoted, precision honest) ----

// Right kernel basis over the field.  Pivoting always selects a
// minimal-valuation certified pivot; an uncertain pivot decision raises
// insufficient_precision.  Output vectors annihilate the input up to
// coordinates that are ExactZero or BoundedBelow at the working floor
// (>= N - d * (valuation spread), see echelonize).
std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m);

unsigned rank(const Matrix& m);
Matrix inverse(const Matrix& m);
// Solve A X = B for invertible square A.
Matrix solve(const Matrix& a, const Matrix& b);
Scalar determinant(const Matrix& m);
long det_valuation(const Matrix& m);

// Valuations of the elementary divisors over the valuation ring, decreasing.
// Requires a square matrix invertible over the field.
std::vector<long> smith_valuations(const Matrix& m);

// Two-sided reduction of a full-column-rank d x k matrix tracking the left
// transform: returns (U, vals) with U in GL_d(O) whose first k columns span
// span_L(C) \cap O^d (the saturation of the column span).
std::pair<Matrix, std::vector<long>> smith_left_transform(const Matrix& c);

// Characteristic polynomial coefficients c[0..d] (monic, c[d] = 1), computed
// division-free in the matrix entries (Faddeev-LeVerrier; the only divisions
// are by the integers 1..d, which are exact).
std::vector<Scalar> charpoly(const Matrix& m);

// Root valuations of a polynomial with the given coefficients, from the lower
// convex hull of (i, v(c_i)); returned as (valuation, multiplicity) pairs in
// decreasing valuation order.  Raises insufficient_precision if a
// bounded-below coefficient could cut the hull.
std::vector<std::pair<std::pair<long, long>, unsigned>> newton_root_valuations(
    const std::vector<Scalar>& coeffs);

// True when columns of sub lie in the column span of space.
bool subspace_contains(const Matrix& space, const Matrix& sub);
// Basis of the intersection of two column spans.
Matrix subspace_intersection(const Matrix& a, const Matrix& b);
// Reduced column basis (field echelon) of the column span.
Matrix column_space_basis(const Matrix& m);
// Rows spanning the annihilator of the column span (left kernel).
Matrix annihilator_rows(const Matrix& m);
unsigned intersection_dim(const Matrix& a, const Matrix& b);

}  // namespace isoc
