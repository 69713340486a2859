#pragma once

#include <variant>

#include "isoc/filtration.hpp"

namespace isoc {

// Full-rank O_L-span inside an isocrystal, held as a basis matrix.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(Matrix basis);
    static Lattice standard(const Context& ctx, unsigned d);
    static Lattice from_generators(const Context& ctx, const Matrix& gens);

    const Matrix& basis() const { return basis_; }
    unsigned dim() const { return basis_.rows(); }
    long covolume() const;  // v(det basis)

    Lattice pi_scaled(long k) const;
    Lattice dual() const;  // inverse-transpose basis

private:
    Matrix basis_;
};

// Canonical Hermite form over the valuation ring: lower triangular, diagonal
// pi^{a_i}, below-diagonal entries canonical residues mod the row pivot.
Matrix lattice_hermite(const Matrix& gens);
std::string lattice_key(const Lattice& m);

bool lattice_contains(const Lattice& outer, const Lattice& inner);
bool lattice_equal(const Lattice& a, const Lattice& b);
Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);
Lattice tensor_lattice(const Lattice& a, const Lattice& b);

// O-basis of (column span of the subspace) \cap M.
Matrix lattice_subspace_intersection(const Lattice& m, const Matrix& subspace);

// Hodge type mu(M): elementary-divisor valuations of the matrix expressing a
// phi(M)-basis in an M-basis, decreasing.
std::vector<long> lattice_type(const Isocrystal& x, const Lattice& m);

// dominance nu <= mu(M); always true (Mazur).
bool check_mazur(const Isocrystal& x, const Lattice& m);

// T(M) = phi( sum_i pi^{-i} (F^i \cap M) ).
Lattice filtration_transform(const Isocrystal& x, const Filtration& f, const Lattice& m);

bool strongly_divisible(const Isocrystal& x, const Filtration& f, const Lattice& m);

struct Divergence {
    long iterations;
    long covolume_drift;
    long diameter;  // max |elementary divisor| of the basis change from the start
};
using IterationResult = std::variant<Lattice, Divergence>;

long default_iteration_budget(unsigned d, const std::vector<long>& mu);

// Iterate M -> T(M) until a fixpoint (a strongly divisible lattice) or the
// budget runs out; divergence is evidence of non-admissibility.
IterationResult laffaille_iterate(const Isocrystal& x, const Filtration& f, const Lattice& m0,
                                  long max_iter = -1);

struct AdaptedBounds {
    Lattice max_inside;   // maximal adapted lattice contained in M
    Lattice min_outside;  // minimal adapted lattice containing M
    bool certified_max = false;  // pi-neighbor certificates
    bool certified_min = false;
    unsigned neighbors_checked = 0;
};

// Monotone closures X -> X \cap T(X) and X -> X + T(X); at t_H = t_N their
// fixpoints are strongly divisible, and one-step pi-neighbor enumeration
// certifies maximality/minimality.
AdaptedBounds adapted_bounds(const Isocrystal& x, const Filtration& f, const Lattice& m,
                             long max_iter = -1, unsigned neighbor_cap = 2048);

struct AdaptedBasis {
    Matrix u;                // basis adapted to the filtration
    Matrix e;                // e_r = pi^{-mu_r} phi(u_r), again a basis of M
    std::vector<long> jumps; // mu_r per column, decreasing
};

// Basis u_1..u_d of an adapted lattice with F^i \cap M = span_O{u_r : mu_r >= i},
// certifying mu(M) = mu(F).
AdaptedBasis adapted_basis(const Isocrystal& x, const Filtration& f, const Lattice& m);

struct ConstructedLattice {
    Lattice lattice;
    Filtration filtration;  // the admissible filtration the lattice is adapted to
    unsigned attempts;
};

// Existence constructor: admissible filtration of type mu, then the lattice
// iteration; requires mu >= nu.
ConstructedLattice construct_lattice_of_type(const Isocrystal& x, const std::vector<long>& mu,
                                             std::uint64_t seed = 0, unsigned attempts = 8);

}  // namespace isoc
