#pragma once

#include "isoc/filtration.hpp"

namespace isoc {

struct GenericityBudget {
    unsigned retries = 3;
    std::uint64_t seed = 0;
    CheckOptions check;
};

struct ConstructionResult {
    Filtration filtration;
    Verdict verdict;
    std::vector<SubIsocrystal> family;
    std::vector<TransversalityRow> transversality;
    unsigned retries_used = 0;
};

// Random flag matrix in GL_d(O) with exact integral entries; level 1 draws
// sigma-fixed entries (for rationality-restricted models), anything else
// draws at the full unramified level of the context.
Matrix random_flag(const Context& ctx, unsigned d, Rng& rng, unsigned level);

// Theorem-1 constructor: a filtration of type mu that passes the full
// admissibility battery, drawn by seeded genericity with verification.
// Requires mu >= nu; every family subobject must show the transverse
// intersection pattern with tail induced type, else the draw is repeated.
ConstructionResult construct_admissible_filtration(const Isocrystal& x,
                                                   const std::vector<long>& mu,
                                                   const GenericityBudget& budget);

}  // namespace isoc
