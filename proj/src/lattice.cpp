#include "isoc/lattice.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "isoc/existence.hpp"

namespace isoc {

Lattice::Lattice(Matrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols()) throw input_error("lattice basis not square");
    if (rank(basis_) != basis_.rows()) throw input_error("lattice basis singular");
}

Lattice Lattice::standard(const Context& ctx, unsigned d) {
    return Lattice(Matrix::identity(ctx, d));
}

Lattice Lattice::from_generators(const Context& ctx, const Matrix& gens) {
    (void)ctx;
    return Lattice(lattice_hermite(gens));
}

long Lattice::covolume() const { return det_valuation(basis_); }

Lattice Lattice::pi_scaled(long k) const { return Lattice(basis_.pi_scaled(k)); }

Lattice Lattice::dual() const { return Lattice(inverse(basis_).transpose()); }

Matrix lattice_hermite(const Matrix& gens) {
    const Context& c = gens.ctx();
    const unsigned d = gens.rows();
    Matrix m = gens;
    // phase 1: column triangularization with minimal-valuation pivots
    std::vector<long> pivot_val(d, 0);
    for (unsigned row = 0; row < d; ++row) {
        int best = -1;
        long bestval = 0;
        long blocker = Scalar::kZeroSentinel;
        for (unsigned j = row; j < m.cols(); ++j) {
            const Scalar& e = m.at(row, j);
            if (e.is_zero()) continue;
            if (e.is_known()) {
                if (best < 0 || e.valuation() < bestval) {
                    best = static_cast<int>(j);
                    bestval = e.valuation();
                }
            } else {
                blocker = std::min(blocker, e.lower_bound());
            }
        }
        if (best < 0) throw input_error("lattice generators do not have full rank");
        if (blocker < bestval)
            throw insufficient_precision("hermite pivot decision uncertain");
        // swap into place
        if (static_cast<unsigned>(best) != row)
            for (unsigned i = 0; i < d; ++i) std::swap(m.at(i, row), m.at(i, static_cast<unsigned>(best)));
        // normalize the column so the pivot is exactly pi^a
        Scalar unit_inv = m.at(row, row).shifted(-bestval).inverse();
        for (unsigned i = 0; i < d; ++i) m.at(i, row) = m.at(i, row) * unit_inv;
        m.at(row, row) = Scalar::pi_power(c, bestval);
        pivot_val[row] = bestval;
        for (unsigned j = row + 1; j < m.cols(); ++j) {
            const Scalar& e = m.at(row, j);
            if (e.is_zero()) continue;
            if (e.is_bounded() && e.lower_bound() >= bestval + static_cast<long>(c.precision()) - 8) {
                m.at(row, j) = Scalar::zero(c);
                continue;
            }
            Scalar q = e / m.at(row, row);
            for (unsigned i = row + 1; i < d; ++i)
                m.at(i, j) = m.at(i, j) - q * m.at(i, row);
            m.at(row, j) = Scalar::zero(c);
        }
    }
    Matrix t(c, d, d);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) t.at(i, j) = m.at(i, j);
    // phase 2: canonical residues below the diagonal
    for (unsigned b = 0; b < d; ++b) {
        for (unsigned i = 0; i < b; ++i) {
            const Scalar& e = t.at(b, i);
            if (e.is_zero()) continue;
            Scalar tr = e.truncated(pivot_val[b]);
            Scalar q = (e - tr) / t.at(b, b);
            for (unsigned k = b + 1; k < d; ++k) t.at(k, i) = t.at(k, i) - q * t.at(k, b);
            t.at(b, i) = tr;
        }
    }
    return t;
}

std::string lattice_key(const Lattice& m) {
    Matrix h = lattice_hermite(m.basis());
    std::ostringstream os;
    const Context& c = h.ctx();
    for (unsigned j = 0; j < h.cols(); ++j) {
        os << "|";
        for (unsigned i = 0; i < h.rows(); ++i) {
            const Scalar& e = h.at(i, j);
            if (e.is_zero()) {
                os << "z,";
                continue;
            }
            if (e.is_bounded()) {
                os << "?" << e.lower_bound() << ",";
                continue;
            }
            os << e.valuation() << ":";
            Scalar tr = e.truncated(e.valuation() + std::min<long>(c.precision(), 24));
            for (const auto& dd : tr.unit()) os << dd.get_str() << ".";
            os << ",";
        }
    }
    return os.str();
}

bool lattice_contains(const Lattice& outer, const Lattice& inner) {
    Matrix ch = solve(outer.basis(), inner.basis());
    for (unsigned i = 0; i < ch.rows(); ++i)
        for (unsigned j = 0; j < ch.cols(); ++j)
            if (!ch.at(i, j).is_zero() && ch.at(i, j).lower_bound() < 0) return false;
    return true;
}

bool lattice_equal(const Lattice& a, const Lattice& b) {
    if (a.covolume() != b.covolume()) return false;
    Matrix ch = solve(a.basis(), b.basis());
    for (unsigned i = 0; i < ch.rows(); ++i)
        for (unsigned j = 0; j < ch.cols(); ++j)
            if (!ch.at(i, j).is_zero() && ch.at(i, j).lower_bound() < 0) return false;
    return det_valuation(ch) == 0;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    return Lattice(lattice_hermite(hstack(a.basis(), b.basis())));
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
    Lattice dual_sum = lattice_sum(a.dual(), b.dual());
    return dual_sum.dual();
}

Lattice tensor_lattice(const Lattice& a, const Lattice& b) {
    return Lattice(kron(a.basis(), b.basis()));
}

Matrix lattice_subspace_intersection(const Lattice& m, const Matrix& subspace) {
    const Context& c = m.basis().ctx();
    if (subspace.cols() == 0) return Matrix(c, m.dim(), 0);
    Matrix ann = annihilator_rows(subspace);
    Matrix sys = ann * m.basis();
    auto kb = kernel_basis(sys);
    if (kb.empty()) return Matrix(c, m.dim(), 0);
    Matrix k = from_cols(c, m.dim(), kb);
    auto [u, vals] = smith_left_transform(k);
    Matrix sat = u.cols_range(0, static_cast<unsigned>(vals.size()));
    return m.basis() * sat;
}

std::vector<long> lattice_type(const Isocrystal& x, const Lattice& m) {
    Matrix c = solve(m.basis(), x.apply_phi(m.basis()));
    return smith_valuations(c);
}

bool check_mazur(const Isocrystal& x, const Lattice& m) {
    return dominance_leq(x.newton_vector(), SlopeVector::integral(lattice_type(x, m)));
}

Lattice filtration_transform(const Isocrystal& x, const Filtration& f, const Lattice& m) {
    const Context& c = x.ctx();
    Matrix gens = m.basis().pi_scaled(-f.min_jump());
    for (long i = f.min_jump() + 1; i <= f.max_jump(); ++i) {
        Matrix w = lattice_subspace_intersection(m, f.step(i));
        if (w.cols() == 0) continue;
        gens = hstack(gens, w.pi_scaled(-i));
    }
    Matrix s = lattice_hermite(gens);
    return Lattice(x.apply_phi(s));
}

bool strongly_divisible(const Isocrystal& x, const Filtration& f, const Lattice& m) {
    return lattice_equal(filtration_transform(x, f, m), m);
}

long default_iteration_budget(unsigned d, const std::vector<long>& mu) {
    long range = mu.empty() ? 1 : mu.front() - mu.back() + 1;
    return 20L * static_cast<long>(d) * range;
}

namespace {

long lattice_diameter(const Lattice& from, const Lattice& to) {
    Matrix ch = solve(from.basis(), to.basis());
    auto vals = smith_valuations(ch);
    long m = 0;
    for (long v : vals) m = std::max(m, std::labs(v));
    return m;
}

}  // namespace

IterationResult laffaille_iterate(const Isocrystal& x, const Filtration& f, const Lattice& m0,
                                  long max_iter) {
    if (max_iter < 0) max_iter = default_iteration_budget(x.dim(), f.type());
    // Plain T-orbits can be periodic (T preserves covolume when t_H = t_N),
    // so the iteration runs through the monotone closure X -> X + T(X).  At
    // t_H = t_N a closure point X has T(X) inside X with equal covolume,
    // hence T(X) = X: the closure lands exactly on a strongly divisible
    // lattice.  Divergence shows up as covolume escape.  The escape cap is
    // budget-derived; when the working precision cannot support even that
    // much drift, the outcome is undecided rather than a diagnosis.
    long range = f.type().front() - f.type().back() + 1;
    const long div_cap = static_cast<long>(x.dim()) * (range + 2) + 4;
    const long guard = std::max<long>(6, static_cast<long>(x.ctx().precision()) / 2 - 8);
    const long cap = std::min(div_cap, guard);
    Lattice cur = m0;
    for (long it = 0; it < max_iter; ++it) {
        Lattice tx = filtration_transform(x, f, cur);
        if (lattice_equal(tx, cur)) return cur;
        Lattice nxt = lattice_sum(cur, tx);
        if (lattice_equal(nxt, cur)) nxt = std::move(tx);  // t_H != t_N: descending orbit
        long drift = std::labs(nxt.covolume() - m0.covolume());
        long diam = lattice_diameter(m0, nxt);
        if (drift > cap || diam > cap) {
            if (div_cap <= guard)
                return Divergence{it + 1, nxt.covolume() - m0.covolume(), diam};
            throw insufficient_precision("lattice iteration drift exceeds the working precision");
        }
        cur = std::move(nxt);
    }
    return Divergence{max_iter, cur.covolume() - m0.covolume(), lattice_diameter(m0, cur)};
}

namespace {

// one-step neighbor enumeration helpers over the residue field k = O/pi
std::vector<std::vector<mpz_class>> projective_points(const Context& ctx, unsigned d,
                                                      unsigned cap, Rng& rng, bool& complete) {
    // residue field size q = p^r
    mpz_class q(1);
    for (unsigned i = 0; i < ctx.degree(); ++i) q *= ctx.prime();
    std::vector<std::vector<mpz_class>> pts;
    complete = true;
    if (!q.fits_ulong_p() || q.get_ui() > 1u << 20) {
        complete = false;
    } else {
        unsigned long qu = q.get_ui();
        // count (q^d - 1)/(q - 1)
        double count = 0;
        double qp = 1;
        for (unsigned i = 0; i < d; ++i) {
            count += qp;
            qp *= static_cast<double>(qu);
        }
        if (count > cap) complete = false;
        if (complete) {
            // first nonzero coordinate normalized to 1
            for (unsigned lead = 0; lead < d; ++lead) {
                unsigned tail = d - lead - 1;
                std::vector<unsigned long> idx(tail, 0);
                for (;;) {
                    std::vector<mpz_class> v(d, mpz_class(0));
                    v[lead] = 1;
                    for (unsigned t = 0; t < tail; ++t) v[lead + 1 + t] = idx[t];
                    pts.push_back(v);
                    unsigned t = 0;
                    for (; t < tail; ++t) {
                        if (++idx[t] < qu) break;
                        idx[t] = 0;
                    }
                    if (t == tail) break;
                    if (tail == 0) break;
                }
            }
        }
    }
    if (!complete) {
        for (unsigned n = 0; n < cap; ++n) {
            std::vector<mpz_class> v(d, mpz_class(0));
            unsigned lead = static_cast<unsigned>(rng.below(d));
            v[lead] = 1;
            for (unsigned j = lead + 1; j < d; ++j)
                v[j] = static_cast<long>(rng.below(
                    ctx.prime().fits_ulong_p() ? ctx.prime().get_ui() : 97));
            pts.push_back(v);
        }
    }
    return pts;
}

// residue element index -> exact scalar lift
Scalar residue_scalar(const Context& ctx, const mpz_class& index) {
    // digits of the index in base p give the poly coefficients
    std::vector<mpz_class> coeffs(ctx.degree(), mpz_class(0));
    mpz_class rem = index;
    for (unsigned i = 0; i < ctx.degree() && rem != 0; ++i) {
        coeffs[i] = rem % ctx.prime();
        rem /= ctx.prime();
    }
    return Scalar::from_int_poly(ctx, coeffs);
}

}  // namespace

AdaptedBounds adapted_bounds(const Isocrystal& x, const Filtration& f, const Lattice& m,
                             long max_iter, unsigned neighbor_cap) {
    const Context& c = x.ctx();
    if (f.t_hodge() != x.t_newton()) throw condition_i_fails(f.t_hodge(), x.t_newton());
    if (max_iter < 0) max_iter = default_iteration_budget(x.dim(), f.type()) + 8;

    long range = f.type().front() - f.type().back() + 1;
    const long div_cap = static_cast<long>(x.dim()) * (range + 2) + 4;
    const long guard = std::max<long>(6, static_cast<long>(x.ctx().precision()) / 2 - 8);
    const long cap = std::min(div_cap + 4, guard);

    // minimal adapted lattice containing M: closure under X -> X + T(X)
    Lattice min_l = m;
    bool done = false;
    for (long it = 0; it < max_iter; ++it) {
        Lattice nxt = lattice_sum(min_l, filtration_transform(x, f, min_l));
        if (lattice_equal(nxt, min_l)) {
            done = true;
            break;
        }
        if (lattice_diameter(m, nxt) > cap) break;
        min_l = std::move(nxt);
    }
    if (!done) throw no_convergence(max_iter, lattice_diameter(m, min_l));
    if (!strongly_divisible(x, f, min_l)) throw not_strongly_divisible();

    // maximal adapted lattice inside M: closure under X -> X \cap T(X)
    Lattice max_l = m;
    done = false;
    for (long it = 0; it < max_iter; ++it) {
        Lattice nxt = lattice_intersection(max_l, filtration_transform(x, f, max_l));
        if (lattice_equal(nxt, max_l)) {
            done = true;
            break;
        }
        if (lattice_diameter(m, nxt) > cap) break;
        max_l = std::move(nxt);
    }
    if (!done) throw no_convergence(max_iter, lattice_diameter(m, max_l));
    if (!strongly_divisible(x, f, max_l)) throw not_strongly_divisible();

    AdaptedBounds out{max_l, min_l, false, false, 0};

    // pi-neighbor certificates
    Rng rng(0xadb0);
    bool complete_pts = false;
    auto pts = projective_points(c, x.dim(), neighbor_cap, rng, complete_pts);
    unsigned checked = 0;
    bool min_ok = true, max_ok = true;
    for (const auto& nvec : pts) {
        // sublattice of min_l: hyperplane normal nvec; must still contain M
        unsigned lead = 0;
        while (lead < nvec.size() && nvec[lead] == 0) ++lead;
        Matrix sub(c, x.dim(), x.dim());
        unsigned colk = 0;
        for (unsigned j = 0; j < x.dim(); ++j) {
            if (j == lead) continue;
            for (unsigned i = 0; i < x.dim(); ++i)
                sub.at(i, colk) = (i == j) ? Scalar::one(c) : Scalar::zero(c);
            if (nvec[j] != 0) sub.at(lead, colk) = -residue_scalar(c, nvec[j]);
            ++colk;
        }
        for (unsigned i = 0; i < x.dim(); ++i)
            sub.at(i, colk) = (i == lead) ? Scalar::pi_power(c, 1) : Scalar::zero(c);
        Lattice z(min_l.basis() * sub);
        ++checked;
        if (lattice_contains(z, m) && strongly_divisible(x, f, z)) min_ok = false;

        // superlattice of max_l in direction nvec; must stay inside M
        Matrix dir(c, x.dim(), 1);
        for (unsigned i = 0; i < x.dim(); ++i)
            dir.at(i, 0) = residue_scalar(c, nvec[i]);
        Matrix ext = hstack(max_l.basis(), (max_l.basis() * dir).pi_scaled(-1));
        Lattice y(lattice_hermite(ext));
        if (lattice_contains(m, y) && strongly_divisible(x, f, y)) max_ok = false;
    }
    out.neighbors_checked = checked;
    out.certified_min = complete_pts && min_ok;
    out.certified_max = complete_pts && max_ok;
    return out;
}

AdaptedBasis adapted_basis(const Isocrystal& x, const Filtration& f, const Lattice& m) {
    if (!strongly_divisible(x, f, m)) throw not_strongly_divisible();
    const Context& c = x.ctx();
    const unsigned d = x.dim();
    Matrix u(c, d, 0);
    std::vector<long> jumps;
    for (long i = f.max_jump(); i >= f.min_jump(); --i) {
        Matrix ni = i <= f.min_jump() ? m.basis() : lattice_subspace_intersection(m, f.step(i));
        if (ni.cols() == u.cols()) continue;
        if (u.cols() == 0) {
            for (unsigned j = 0; j < ni.cols(); ++j) jumps.push_back(i);
            u = ni;
            continue;
        }
        // complete the previous basis inside the saturated submodule N_i
        auto coords = express_in_basis(ni, u);
        if (!coords) throw insufficient_precision("adapted basis: nesting failed");
        auto [tr, vals] = smith_left_transform(*coords);
        for (long v : vals)
            if (v != 0) throw insufficient_precision("adapted basis: submodule not saturated");
        Matrix fresh = ni * tr.cols_range(static_cast<unsigned>(vals.size()),
                                          ni.cols() - static_cast<unsigned>(vals.size()));
        for (unsigned j = 0; j < fresh.cols(); ++j) jumps.push_back(i);
        u = hstack(u, fresh);
    }
    if (u.cols() != d) throw insufficient_precision("adapted basis incomplete");
    // e_r = pi^{-mu_r} phi(u_r)
    Matrix e = x.apply_phi(u);
    for (unsigned j = 0; j < d; ++j)
        for (unsigned i = 0; i < d; ++i) e.at(i, j) = e.at(i, j).shifted(-jumps[j]);
    if (!lattice_equal(Lattice(e), m))
        throw insufficient_precision("adapted basis: derived basis does not span M");
    return AdaptedBasis{std::move(u), std::move(e), std::move(jumps)};
}

ConstructedLattice construct_lattice_of_type(const Isocrystal& x, const std::vector<long>& mu,
                                             std::uint64_t seed, unsigned attempts) {
    SlopeVector nu = x.newton_vector();
    if (!dominance_leq(nu, SlopeVector::integral(mu))) throw dominance_fails();
    std::string last = "no attempts";
    for (unsigned attempt = 0; attempt < attempts; ++attempt) {
        GenericityBudget budget;
        budget.retries = 3;
        budget.seed = seed * 977 + attempt;
        std::optional<ConstructionResult> cons;
        try {
            cons = construct_admissible_filtration(x, mu, budget);
        } catch (const retries_exhausted& e) {
            last = e.what();
            continue;
        }
        IterationResult res =
            laffaille_iterate(x, cons->filtration, Lattice::standard(x.ctx(), x.dim()));
        if (std::holds_alternative<Lattice>(res)) {
            Lattice out = std::get<Lattice>(res);
            if (lattice_type(x, out) == mu)
                return ConstructedLattice{std::move(out), std::move(cons->filtration), attempt + 1};
            last = "fixpoint type mismatch";
            continue;
        }
        const auto& div = std::get<Divergence>(res);
        last = "iteration diverged after " + std::to_string(div.iterations) + " steps";
    }
    throw construction_retry_exhausted(last);
}

}  // namespace isoc
