#pragma once

#include "isoc/filtration.hpp"

namespace isoc {

// Isocrystal with a monodromy operator N satisfying N phi = q phi N (q = p in
// the unramified model); N is nilpotent as a consequence of the relation.
struct PhiNModule {
    Isocrystal iso;
    Matrix monodromy;
};

// Commutation identity on a basis plus nilpotency, certified at precision
// with the documented slack (N - 2).
bool validate_phi_n(const PhiNModule& m);

// Subobject family filtered to members stable under both phi and N.
std::vector<SubIsocrystal> phi_n_family(const PhiNModule& m, const Filtration& f,
                                        const SlopeDecomposition& dec, const FamilyOptions& opts);

// Weak admissibility over the (phi, N)-stable family; a fortiori implied by
// admissibility of the underlying isocrystal.
Verdict check_weak_admissibility_phi_n(const PhiNModule& m, const Filtration& f,
                                       const CheckOptions& opts = {});

// N maps the slope-alpha part into the slope-(alpha-1) part.
bool monodromy_slope_shift(const PhiNModule& m, const SlopeDecomposition& dec);

}  // namespace isoc
