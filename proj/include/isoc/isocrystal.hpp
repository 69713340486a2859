#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isoc/matrix.hpp"
#include "isoc/polygon.hpp"
#include "isoc/rng.hpp"

namespace isoc {

// Simple summand of slope a/b with gcd(a, b) = 1, taken with a multiplicity;
// the cyclic block sends e_i to e_{i+1} and e_b to pi^a e_1.
struct StandardSummand {
    long a;
    unsigned b;
    unsigned mult;
};

struct SlopeDecomposition {
    unsigned s;  // common denominator level: phi^s acts on each piece as pi^{s alpha}
    struct Piece {
        Rational slope;
        Matrix basis;  // columns v with phi^s(v) = pi^{s alpha} v, jointly L-independent
    };
    std::vector<Piece> pieces;  // decreasing slope
    Matrix full_basis() const;
    const Matrix* piece_for(const Rational& slope) const;
};

// Finite free module over the coefficient field with invertible sigma-linear
// Frobenius v -> A sigma(v).  rat_level rho declares that the entries of A
// are fixed by sigma^rho.  restrict_rational, when set, models a
// non-algebraically-closed residue field: only sigma^m-stable subobjects are
// admitted to subobject enumeration.
class Isocrystal {
public:
    static Isocrystal standard_form(ContextPtr ctx, const std::vector<StandardSummand>& summands);
    static Isocrystal from_matrix(ContextPtr ctx, Matrix a, unsigned rat_level);

    Isocrystal base_changed(const Matrix& g) const;  // A -> g A sigma(g)^{-1}
    Isocrystal with_restriction(unsigned level) const;

    const Context& ctx() const { return *ctx_; }
    ContextPtr ctx_ptr() const { return ctx_; }
    unsigned dim() const { return dim_; }
    const Matrix& frobenius_matrix() const { return frob_; }
    unsigned rat_level() const { return rat_level_; }
    std::optional<unsigned> restriction() const { return restrict_rational_; }
    const std::optional<std::vector<StandardSummand>>& provenance() const { return provenance_; }
    const std::optional<Matrix>& base_change() const { return base_change_; }

    Matrix apply_phi(const Matrix& cols) const;            // A sigma(cols)
    Matrix apply_phi_power(const Matrix& cols, unsigned k) const;

    SlopeVector newton_vector() const;
    long t_newton() const;  // v(det A) = |nu|, always an integer

    SlopeDecomposition slope_decomposition() const;

    Isocrystal dual() const;
    static Isocrystal tensor(const Isocrystal& x, const Isocrystal& y);

private:
    ContextPtr ctx_;
    unsigned dim_ = 0;
    Matrix frob_;
    unsigned rat_level_ = 1;
    std::optional<std::vector<StandardSummand>> provenance_;
    std::optional<Matrix> base_change_;
    std::optional<unsigned> restrict_rational_;
};

// phi-stable subspace with its induced Frobenius: basis * frob = A sigma(basis).
struct SubIsocrystal {
    Matrix basis;  // d x k
    Matrix frob;   // k x k
    unsigned dim() const { return basis.cols(); }
    long t_newton() const;
    SlopeVector newton_vector(unsigned rat_level) const;
};

struct FamilyOptions {
    unsigned structured = 16;
    unsigned random_draws = 64;
    std::uint64_t seed = 0;
    bool cyclic = true;  // IsotypicSums only when false
};

// Refutation-sound candidate family: all 2^n sums of isoclinic components,
// phi-cyclic spans of structured and seeded-random rational vectors, closed
// under sums with isotypic components, deduplicated by column span.  In the
// multiplicity-free case the isotypic sums alone form the complete subobject
// lattice.  Includes 0 and D.  Under a rationality restriction only
// sigma^m-stable members are kept.
std::vector<SubIsocrystal> subobject_family(const Isocrystal& x, const FamilyOptions& opts,
                                            const SlopeDecomposition& dec);

// Every isoclinic component simple: the Boolean lattice of isotypic sums is
// provably the whole subobject lattice.
bool multiplicity_free(const SlopeVector& nu);

// Try to express the columns of w in the column basis s; nullopt when w is
// not contained in the span.
std::optional<Matrix> express_in_basis(const Matrix& s, const Matrix& w);

// Certified phi-stability: returns the induced Frobenius if phi(span) = span.
std::optional<Matrix> induced_frobenius(const Isocrystal& x, const Matrix& basis);

// Smallest phi-stable span containing v.
Matrix cyclic_span(const Isocrystal& x, const std::vector<Scalar>& v);

// Exact integral elements fixed by sigma^m, as a Q_p-basis (columns of an
// r x m0 matrix of ring elements); used to draw rational coefficients.
std::vector<Scalar> fixed_field_basis(const Context& ctx, unsigned m);

// Vectors v in the column span of `window` with B sigma^k(v) = pi^{shift} v;
// returns a spanning set of the solution space (possibly empty).
std::vector<std::vector<Scalar>> twisted_fixed_vectors(const Isocrystal& x, const Matrix& b,
                                                       unsigned sigma_power, long shift,
                                                       const Matrix& window);

struct QuotientData {
    Isocrystal quotient;
    Matrix complement;  // d x (d-k): lifts of the quotient basis
    Matrix proj_rows;   // (d-k) x d: coordinates in the quotient
};
QuotientData quotient_by(const Isocrystal& x, const SubIsocrystal& sub);

// Canonical fingerprint of a column span at working precision (dedup key).
std::string subspace_key(const Matrix& basis);

}  // namespace isoc
