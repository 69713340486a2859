#pragma once

#include <optional>

#include "isoc/isocrystal.hpp"

namespace isoc {

// Decreasing exhaustive separated Z-indexed flag of integral type mu: the
// first c_i columns of the flag matrix span F^i, where c_i = #{j : mu_j >= i}.
class Filtration {
public:
    Filtration(ContextPtr ctx, std::vector<long> mu, Matrix flag);

    const Context& ctx() const { return *ctx_; }
    ContextPtr ctx_ptr() const { return ctx_; }
    unsigned dim() const { return static_cast<unsigned>(mu_.size()); }
    const std::vector<long>& type() const { return mu_; }
    long t_hodge() const;
    const Matrix& flag() const { return flag_; }

    unsigned level_dim(long i) const;  // c_i
    Matrix step(long i) const;         // basis of F^i
    long max_jump() const { return mu_.front(); }
    long min_jump() const { return mu_.back(); }

private:
    ContextPtr ctx_;
    std::vector<long> mu_;
    Matrix flag_;
};

// Nested flag from spanning sets per level (levels descending, target
// dimensions increasing); completes to the standard basis at the bottom.
Matrix flag_from_chain(const Context& ctx, unsigned n,
                       const std::vector<std::pair<Matrix, unsigned>>& levels);

// Type of the filtration induced on a subspace, via intersection dimensions.
std::vector<long> induced_type(const Filtration& f, const Matrix& sub_basis);

// The induced filtration in the coordinates of the subspace basis.
Filtration induced_filtration(const Filtration& f, const Matrix& sub_basis);

long t_hodge_of(const std::vector<long>& mu);

struct Verdict {
    enum class Kind { Admissible, NotAdmissible, ProbablyAdmissible, ConditionIFails };
    Kind kind = Kind::ProbablyAdmissible;
    bool complete = false;  // family provably complete (Admissible only)
    long t_hodge = 0;
    long t_newton = 0;
    // refutation data (NotAdmissible)
    std::optional<SubIsocrystal> witness;
    std::vector<long> witness_mu;
    long witness_t_hodge = 0;
    long witness_t_newton = 0;
    unsigned family_size = 0;
    unsigned trials = 0;

    bool admissible_or_probable() const {
        return kind == Kind::Admissible || kind == Kind::ProbablyAdmissible;
    }
    std::string str() const;
};

struct CheckOptions {
    FamilyOptions family;
    bool polygon_crosscheck = true;
};

// Weak admissibility: t_H = t_N on D, and t_H <= t_N for the induced
// filtration on every subobject of the refutation family.  The polygon form
// (Hodge polygon below Newton polygon per member) is cross-checked; an
// interior polygon violation is converted into a concrete witness through the
// member's slope filtration.
Verdict check_weak_admissibility(const Isocrystal& x, const Filtration& f,
                                 const CheckOptions& opts = {});

// Same, over a caller-supplied family (used by the phi-N variant).
Verdict check_weak_admissibility_family(const Isocrystal& x, const Filtration& f,
                                        std::vector<SubIsocrystal> family, bool complete_family,
                                        const CheckOptions& opts);

struct ProbeFinding {
    long level;      // filtration index i
    Rational slope;  // isoclinic piece
    std::vector<Scalar> vec;
};

// phi^s-rational vectors inside F^i intersected with each isoclinic piece;
// each finding spans a cyclic subobject for the checker's family.
std::vector<ProbeFinding> rationality_probe(const Isocrystal& x, const Filtration& f,
                                            const SlopeDecomposition& dec);

struct TransversalityRow {
    unsigned member;
    unsigned member_dim;
    long level;
    unsigned dim_intersection;
    unsigned bound;  // max(0, dim F^i - (d - d'))
    bool equal;
};

std::vector<TransversalityRow> transversality_report(const Isocrystal& x, const Filtration& f,
                                                     const std::vector<SubIsocrystal>& family);

// Family used by the checker: subobject_family plus probe-derived cyclic
// spans, deduplicated.
std::vector<SubIsocrystal> checker_family(const Isocrystal& x, const Filtration& f,
                                          const SlopeDecomposition& dec, const FamilyOptions& opts);

// True when the refutation family provably exhausts all subobjects.
bool family_complete_for(const Isocrystal& x, const SlopeVector& nu);

// Dual filtration F*^i = ann(F^{1-i}), of type -reverse(mu); the convention
// under which adapted lattices dualize.
Filtration dual_filtration(const Filtration& f);

// Tensor filtration F^i = sum_{a+b=i} F^a (x) F^b, of type {mu_i + mu'_j}.
Filtration tensor_filtration(const Filtration& f, const Filtration& g);

}  // namespace isoc
