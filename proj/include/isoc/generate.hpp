#pragma once

#include "isoc/lattice.hpp"
#include "isoc/phi_n.hpp"

namespace isoc {

// Seeded, reproducible instance generation.  All drawn data is exact integral
// (bounded digit count), so the same seed describes the same mathematical
// instance at every working precision.

// Random multiplicity-free standard form of total dimension d; the context is
// created at the splitting level of the drawn slopes.
Isocrystal generate_multfree(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed);

// Random standard form, repeated slopes allowed.
Isocrystal generate_standard(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed);

// A near-minimal integral type dominating nu (upper concave hull of the
// rounded-up partial sums, re-sorted).
std::vector<long> minimal_integral_above(const SlopeVector& nu);

// Random integral mu >= nu: minimal type plus dominance-preserving raises.
std::vector<long> random_type_above(const SlopeVector& nu, Rng& rng, unsigned raises = 3);

// Random integral mu with |mu| = |nu| that does NOT dominate nu (d >= 2);
// occasionally a wrong-total type instead.
std::optional<std::vector<long>> random_type_not_above(const SlopeVector& nu, Rng& rng);

// Random lattice with integral basis entries.
Lattice generate_lattice(const Context& ctx, unsigned d, Rng& rng);

// Random filtration of the prescribed type at the instance's rationality level.
Filtration generate_filtration(const Isocrystal& x, const std::vector<long>& mu, Rng& rng);

// Random sigma-conjugation of the frobenius by a unimodular matrix; level 1
// draws keep the entries sigma-fixed.
Matrix generate_unimodular(const Context& ctx, unsigned d, Rng& rng, unsigned level);

// Random validated (phi, N)-module: integer-slope standard form with a
// slope-lowering monodromy, optionally base-changed.
PhiNModule generate_phi_n(const mpz_class& p, unsigned d, unsigned prec, std::uint64_t seed);

}  // namespace isoc
