#include "isoc/isocrystal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace isoc {

namespace {

// Constant-coefficient scalar from a canonical representative mod p^rel with a
// pi^base prefactor.  A vanishing representative is only known to be small.
Scalar coeff_scalar(const Context& ctx, const mpz_class& c, long base, unsigned rel) {
    if (c == 0) return Scalar::bounded_below(ctx, base + static_cast<long>(rel));
    mpz_class x = c;
    unsigned w = 0;
    while (w < rel && mpz_divisible_p(x.get_mpz_t(), ctx.prime().get_mpz_t())) {
        x /= ctx.prime();
        ++w;
    }
    if (w >= rel) return Scalar::bounded_below(ctx, base + static_cast<long>(rel));
    Poly u = ctx.zero_poly();
    u[0] = x;
    return Scalar::make_unit(ctx, u, base + static_cast<long>(w), rel - w);
}

// Q_p-linearization of y -> M sigma^k(y) on column vectors, in the power
// basis of the ring over Z_p.  Column (j*r + c) holds the coefficients of
// M(:, j) * sigma^k(t^c).
Matrix linearize_op(const Context& ctx, const Matrix& m, unsigned sigma_power) {
    const unsigned r = ctx.degree();
    const unsigned rows = m.rows(), cols = m.cols();
    Matrix lin(ctx, rows * r, cols * r);
    std::vector<Poly> twisted(r);
    for (unsigned c = 0; c < r; ++c) {
        Poly e = ctx.zero_poly();
        e[c] = 1;
        twisted[c] = ctx.frobenius(e, ctx.precision(), sigma_power % ctx.degree());
    }
    for (unsigned i = 0; i < rows; ++i) {
        for (unsigned j = 0; j < cols; ++j) {
            const Scalar& e = m.at(i, j);
            if (e.is_zero()) continue;
            for (unsigned c = 0; c < r; ++c) {
                if (e.is_bounded()) {
                    for (unsigned k = 0; k < r; ++k)
                        lin.at(i * r + k, j * r + c) = Scalar::bounded_below(ctx, e.lower_bound());
                    continue;
                }
                Poly prod = ctx.mul(ctx.reduce(e.unit(), e.relprec()), twisted[c], e.relprec());
                for (unsigned k = 0; k < r; ++k)
                    lin.at(i * r + k, j * r + c) =
                        coeff_scalar(ctx, prod[k], e.valuation(), e.relprec());
            }
        }
    }
    return lin;
}

// Back-conversion of a Q_p-coordinate vector to an L-vector.
std::vector<Scalar> delinearize(const Context& ctx, const std::vector<Scalar>& w, unsigned dim) {
    const unsigned r = ctx.degree();
    std::vector<Scalar> v(dim, Scalar::zero(ctx));
    for (unsigned i = 0; i < dim; ++i) {
        for (unsigned c = 0; c < r; ++c) {
            const Scalar& x = w[i * r + c];
            if (x.is_zero()) continue;
            std::vector<mpz_class> mono(c + 1, mpz_class(0));
            mono[c] = 1;
            Scalar tc = Scalar::from_int_poly(ctx, mono);
            v[i] = v[i] + x * tc;
        }
    }
    return v;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

Matrix SlopeDecomposition::full_basis() const {
    if (pieces.empty()) return Matrix();
    Matrix b = pieces[0].basis;
    for (size_t i = 1; i < pieces.size(); ++i) b = hstack(b, pieces[i].basis);
    return b;
}

const Matrix* SlopeDecomposition::piece_for(const Rational& slope) const {
    for (const auto& p : pieces)
        if (p.slope == slope) return &p.basis;
    return nullptr;
}

Isocrystal Isocrystal::standard_form(ContextPtr ctx, const std::vector<StandardSummand>& summands) {
    unsigned d = 0;
    for (const auto& s : summands) {
        if (s.b == 0 || s.mult == 0) throw input_error("summand with zero size");
        if (std::gcd(std::labs(s.a), static_cast<long>(s.b)) != 1)
            throw input_error("summand slope not in lowest terms");
        d += s.b * s.mult;
    }
    if (d == 0) throw input_error("empty standard form");
    Matrix a(*ctx, d, d);
    unsigned ofs = 0;
    for (const auto& s : summands) {
        for (unsigned copy = 0; copy < s.mult; ++copy) {
            for (unsigned i = 0; i + 1 < s.b; ++i)
                a.at(ofs + i + 1, ofs + i) = Scalar::one(*ctx);
            a.at(ofs, ofs + s.b - 1) = Scalar::pi_power(*ctx, s.a);
            ofs += s.b;
        }
    }
    Isocrystal x;
    x.ctx_ = std::move(ctx);
    x.dim_ = d;
    x.frob_ = std::move(a);
    x.rat_level_ = 1;
    x.provenance_ = summands;
    return x;
}

Isocrystal Isocrystal::from_matrix(ContextPtr ctx, Matrix a, unsigned rat_level) {
    if (a.rows() != a.cols()) throw input_error("frobenius matrix not square");
    if (rat_level == 0) throw input_error("rationality level must be >= 1");
    Isocrystal x;
    x.dim_ = a.rows();
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) {
            const Scalar& e = a.at(i, j);
            if (e.is_zero()) continue;
            Scalar f = e.frobenius(rat_level % ctx->degree());
            if (!Scalar::indistinguishable(
                    f, e, e.lower_bound() + static_cast<long>(ctx->precision()) - 2))
                throw input_error("matrix entry not fixed by sigma^rho at working precision");
        }
    if (rank(a) != a.rows()) throw input_error("frobenius matrix is singular");
    x.ctx_ = std::move(ctx);
    x.frob_ = std::move(a);
    x.rat_level_ = rat_level;
    return x;
}

Isocrystal Isocrystal::base_changed(const Matrix& g) const {
    Matrix sg_inv = inverse(g.map_frobenius());
    Isocrystal x;
    x.ctx_ = ctx_;
    x.dim_ = dim_;
    x.frob_ = g * frob_ * sg_inv;
    x.rat_level_ = ctx_->degree();
    // conjugation by a sigma-fixed g keeps level-1 rationality; detecting it
    // keeps the newton computation a single characteristic polynomial
    {
        bool level1 = true;
        for (unsigned i = 0; i < dim_ && level1; ++i)
            for (unsigned j = 0; j < dim_ && level1; ++j) {
                const Scalar& e = x.frob_.at(i, j);
                if (e.is_zero()) continue;
                if (!Scalar::indistinguishable(
                        e.frobenius(), e,
                        e.lower_bound() + static_cast<long>(ctx_->precision()) - 2))
                    level1 = false;
            }
        if (level1) x.rat_level_ = 1;
    }
    x.provenance_ = provenance_;
    if (provenance_) {
        if (base_change_) x.base_change_ = g * (*base_change_);
        else x.base_change_ = g;
    }
    x.restrict_rational_ = restrict_rational_;
    return x;
}

Isocrystal Isocrystal::with_restriction(unsigned level) const {
    Isocrystal x = *this;
    x.restrict_rational_ = level;
    return x;
}

Matrix Isocrystal::apply_phi(const Matrix& cols) const { return frob_ * cols.map_frobenius(); }

Matrix Isocrystal::apply_phi_power(const Matrix& cols, unsigned k) const {
    Matrix w = cols;
    for (unsigned i = 0; i < k; ++i) w = apply_phi(w);
    return w;
}

SlopeVector Isocrystal::newton_vector() const {
    // matrix of phi^rho, linear over the sigma^rho-fixed field
    Matrix b = frob_;
    Matrix power = frob_;
    for (unsigned j = 1; j < rat_level_; ++j) {
        power = power.map_frobenius();
        b = b * power;
    }
    auto roots = newton_root_valuations(charpoly(b));
    std::vector<Rational> nu;
    for (const auto& [vd, mult] : roots) {
        Rational slope(vd.first, vd.second * static_cast<long>(rat_level_));
        slope.canonicalize();
        for (unsigned i = 0; i < mult; ++i) nu.push_back(slope);
    }
    SlopeVector result(std::move(nu));
    Rational tot = result.total();
    if (tot.get_den() != 1 || tot.get_num() != t_newton())
        throw insufficient_precision("newton polygon total disagrees with det valuation");
    return result;
}

long Isocrystal::t_newton() const { return det_valuation(frob_); }

SlopeDecomposition Isocrystal::slope_decomposition() const {
    const Context& c = *ctx_;
    SlopeVector nu = newton_vector();
    long s_l = rat_level_;
    for (size_t i = 0; i < nu.size(); ++i) s_l = lcm_long(s_l, nu[i].get_den().get_si());
    if (s_l > 256) throw input_error("slope denominators too large for decomposition");
    const unsigned s = static_cast<unsigned>(s_l);

    std::vector<std::pair<Rational, unsigned>> slots;
    for (size_t i = 0; i < nu.size(); ++i) {
        if (!slots.empty() && slots.back().first == nu[i]) slots.back().second += 1;
        else slots.emplace_back(nu[i], 1);
    }

    SlopeDecomposition dec;
    dec.s = s;

    std::map<size_t, std::vector<std::vector<Scalar>>> cands;
    if (provenance_) {
        Matrix g = base_change_ ? *base_change_ : Matrix::identity(c, dim_);
        unsigned ofs = 0;
        for (const auto& sm : *provenance_) {
            Rational slope(sm.a, static_cast<long>(sm.b));
            slope.canonicalize();
            size_t slot = 0;
            while (slot < slots.size() && slots[slot].first != slope) ++slot;
            if (slot == slots.size())
                throw insufficient_precision("provenance slope missing from newton vector");
            for (unsigned copy = 0; copy < sm.mult; ++copy) {
                for (unsigned i = 0; i < sm.b; ++i) cands[slot].push_back(g.col_vec(ofs + i));
                ofs += sm.b;
            }
        }
    } else {
        Matrix bs = frob_;
        Matrix power = frob_;
        for (unsigned j = 1; j < s; ++j) {
            power = power.map_frobenius();
            bs = bs * power;
        }
        for (size_t slot = 0; slot < slots.size(); ++slot) {
            Rational shift_q = slots[slot].first * s;
            long shift = static_cast<long>(shift_q.get_num().get_si());
            Matrix lin = linearize_op(c, bs.pi_scaled(-shift), s);
            for (unsigned i = 0; i < lin.rows(); ++i)
                lin.at(i, i) = lin.at(i, i) - Scalar::one(c);
            auto kb = kernel_basis(lin);
            for (auto& w : kb) cands[slot].push_back(delinearize(c, w, dim_));
        }
    }

    for (size_t slot = 0; slot < slots.size(); ++slot) {
        Matrix piece(c, dim_, 0);
        for (const auto& v : cands[slot]) {
            if (piece.cols() == slots[slot].second) break;
            Matrix cand =
                piece.cols() == 0 ? from_cols(c, dim_, {v}) : hstack(piece, from_cols(c, dim_, {v}));
            bool grew = false;
            try {
                grew = rank(cand) == cand.cols();
            } catch (const insufficient_precision&) {
                grew = false;
            }
            if (grew) piece = std::move(cand);
        }
        if (piece.cols() != slots[slot].second)
            throw not_diagonalizable(
                "level does not split this slope (try a context with larger residue degree)");
        dec.pieces.push_back({slots[slot].first, std::move(piece)});
    }

    // certify eigen equations and joint spanning
    Matrix bs = frob_;
    {
        Matrix power = frob_;
        for (unsigned j = 1; j < s; ++j) {
            power = power.map_frobenius();
            bs = bs * power;
        }
    }
    const long slack = 8 + 2 * static_cast<long>(dim_);
    for (const auto& piece : dec.pieces) {
        Rational shift_q = piece.slope * s;
        long shift = static_cast<long>(shift_q.get_num().get_si());
        Matrix lhs = bs * piece.basis.map_frobenius(s % c.degree());
        Matrix rhs = piece.basis.pi_scaled(shift);
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned j = 0; j < piece.basis.cols(); ++j) {
                long floor = rhs.at(i, j).is_zero()
                                 ? shift + static_cast<long>(c.precision()) - slack
                                 : rhs.at(i, j).lower_bound() +
                                       static_cast<long>(c.precision()) - slack;
                Scalar diff = lhs.at(i, j) - rhs.at(i, j);
                if (!(diff.is_zero() || diff.lower_bound() >= floor))
                    throw insufficient_precision("eigenvector certificate failed");
            }
    }
    if (rank(dec.full_basis()) != dim_) throw not_diagonalizable("slope pieces do not span");
    return dec;
}

Isocrystal Isocrystal::dual() const {
    Matrix a_dual = inverse(frob_).transpose();
    Isocrystal x;
    x.ctx_ = ctx_;
    x.dim_ = dim_;
    x.frob_ = std::move(a_dual);
    x.rat_level_ = rat_level_;
    x.restrict_rational_ = restrict_rational_;
    return x;
}

Isocrystal Isocrystal::tensor(const Isocrystal& x, const Isocrystal& y) {
    if (!(x.ctx() == y.ctx())) throw input_error("tensor factors over different contexts");
    Isocrystal t;
    t.ctx_ = x.ctx_;
    t.dim_ = x.dim_ * y.dim_;
    t.frob_ = kron(x.frob_, y.frob_);
    t.rat_level_ = static_cast<unsigned>(lcm_long(x.rat_level_, y.rat_level_));
    if (x.restrict_rational_) t.restrict_rational_ = x.restrict_rational_;
    else t.restrict_rational_ = y.restrict_rational_;
    return t;
}

long SubIsocrystal::t_newton() const { return dim() == 0 ? 0 : det_valuation(frob); }

SlopeVector SubIsocrystal::newton_vector(unsigned rat_level) const {
    if (dim() == 0) return SlopeVector();
    Matrix b = frob;
    Matrix power = frob;
    for (unsigned j = 1; j < rat_level; ++j) {
        power = power.map_frobenius();
        b = b * power;
    }
    auto roots = newton_root_valuations(charpoly(b));
    std::vector<Rational> nu;
    for (const auto& [vd, mult] : roots) {
        Rational slope(vd.first, vd.second * static_cast<long>(rat_level));
        slope.canonicalize();
        for (unsigned i = 0; i < mult; ++i) nu.push_back(slope);
    }
    return SlopeVector(std::move(nu));
}

bool multiplicity_free(const SlopeVector& nu) {
    std::map<Rational, unsigned> mult;
    for (size_t i = 0; i < nu.size(); ++i) mult[nu[i]] += 1;
    for (const auto& [slope, m] : mult) {
        if (slope.get_den() != static_cast<long>(m)) return false;
    }
    return true;
}

std::optional<Matrix> express_in_basis(const Matrix& s, const Matrix& w) {
    if (s.cols() == 0) {
        for (unsigned i = 0; i < w.rows(); ++i)
            for (unsigned j = 0; j < w.cols(); ++j)
                if (w.at(i, j).is_known()) return std::nullopt;
        return Matrix(s.ctx(), 0, w.cols());
    }
    try {
        if (rank(s) != s.cols()) return std::nullopt;
        if (rank(hstack(s, w)) != s.cols()) return std::nullopt;
    } catch (const insufficient_precision&) {
        return std::nullopt;
    }
    Matrix y(s.ctx(), s.cols(), w.cols());
    for (unsigned j = 0; j < w.cols(); ++j) {
        Matrix sys(s.ctx(), s.rows(), s.cols() + 1);
        for (unsigned i = 0; i < s.rows(); ++i) {
            for (unsigned k = 0; k < s.cols(); ++k) sys.at(i, k) = s.at(i, k);
            sys.at(i, s.cols()) = -w.at(i, j);
        }
        auto kb = kernel_basis(sys);
        bool done = false;
        for (const auto& v : kb) {
            if (!v[s.cols()].is_known()) continue;
            Scalar inv = v[s.cols()].inverse();
            for (unsigned k = 0; k < s.cols(); ++k) y.at(k, j) = v[k] * inv;
            done = true;
            break;
        }
        if (!done) return std::nullopt;
    }
    return y;
}

std::optional<Matrix> induced_frobenius(const Isocrystal& x, const Matrix& basis) {
    Matrix w = x.apply_phi(basis);
    return express_in_basis(basis, w);
}

Matrix cyclic_span(const Isocrystal& x, const std::vector<Scalar>& v) {
    const Context& c = x.ctx();
    Matrix cols = from_cols(c, x.dim(), {v});
    try {
        if (rank(cols) == 0) return Matrix(c, x.dim(), 0);
    } catch (const insufficient_precision&) {
        return Matrix(c, x.dim(), 0);
    }
    for (unsigned step = 0; step < x.dim(); ++step) {
        Matrix next = x.apply_phi(cols.col(cols.cols() - 1));
        Matrix cand = hstack(cols, next);
        bool grew;
        try {
            grew = rank(cand) == cand.cols();
        } catch (const insufficient_precision&) {
            grew = false;
        }
        if (!grew) break;
        cols = std::move(cand);
    }
    return cols;
}

std::vector<Scalar> fixed_field_basis(const Context& ctx, unsigned m) {
    Matrix id = Matrix::identity(ctx, 1);
    Matrix lin = linearize_op(ctx, id, m % ctx.degree());
    for (unsigned i = 0; i < lin.rows(); ++i) lin.at(i, i) = lin.at(i, i) - Scalar::one(ctx);
    auto kb = kernel_basis(lin);
    std::vector<Scalar> out;
    for (const auto& w : kb) {
        auto v = delinearize(ctx, w, 1);
        out.push_back(v[0]);
    }
    return out;
}

std::vector<std::vector<Scalar>> twisted_fixed_vectors(const Isocrystal& x, const Matrix& b,
                                                       unsigned sigma_power, long shift,
                                                       const Matrix& window) {
    const Context& c = x.ctx();
    if (window.cols() == 0) return {};
    Matrix m1 = b * window.map_frobenius(sigma_power % c.degree());
    Matrix lhs = linearize_op(c, m1.pi_scaled(-shift), sigma_power);
    Matrix rhs = linearize_op(c, window, 0);
    Matrix sys = lhs - rhs;
    auto kb = kernel_basis(sys);
    std::vector<std::vector<Scalar>> out;
    for (const auto& wy : kb) {
        auto y = delinearize(c, wy, window.cols());
        std::vector<Scalar> v(x.dim(), Scalar::zero(c));
        for (unsigned j = 0; j < window.cols(); ++j) {
            if (y[j].is_zero()) continue;
            for (unsigned i = 0; i < x.dim(); ++i) v[i] = v[i] + window.at(i, j) * y[j];
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string subspace_key(const Matrix& basis) {
    if (basis.cols() == 0) return "0";
    const Context& c = basis.ctx();
    // canonical generators: Gauss-Jordan rows of the transpose with
    // minimal-valuation pivots, serialized with truncated digits
    Matrix t = basis.transpose();
    const unsigned R = t.rows(), C = t.cols();
    std::vector<std::vector<Scalar>> a(R, std::vector<Scalar>(C, Scalar::zero(c)));
    for (unsigned i = 0; i < R; ++i)
        for (unsigned j = 0; j < C; ++j) a[i][j] = t.at(i, j);
    std::vector<bool> used(R, false);
    std::vector<std::pair<unsigned, unsigned>> pivots;
    for (unsigned col = 0; col < C; ++col) {
        int best = -1;
        long bestval = 0;
        for (unsigned i = 0; i < R; ++i) {
            if (used[i] || !a[i][col].is_known()) continue;
            if (best < 0 || a[i][col].valuation() < bestval) {
                best = static_cast<int>(i);
                bestval = a[i][col].valuation();
            }
        }
        if (best < 0) continue;
        unsigned r = static_cast<unsigned>(best);
        used[r] = true;
        pivots.emplace_back(r, col);
        Scalar inv = a[r][col].inverse();
        for (unsigned j = 0; j < C; ++j)
            if (j != col) a[r][j] = a[r][j] * inv;
        a[r][col] = Scalar::one(c);
        for (unsigned i = 0; i < R; ++i) {
            if (i == r || a[i][col].is_zero()) continue;
            Scalar mult = a[i][col];
            for (unsigned j = 0; j < C; ++j) {
                if (j == col || a[r][j].is_zero()) continue;
                a[i][j] = a[i][j] - mult * a[r][j];
            }
            a[i][col] = Scalar::zero(c);
        }
    }
    std::sort(pivots.begin(), pivots.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });
    std::ostringstream os;
    const long K = std::min<long>(12, c.precision());
    for (const auto& [r, col] : pivots) {
        os << "|p" << col << ":";
        for (unsigned j = 0; j < C; ++j) {
            const Scalar& e = a[r][j];
            if (e.is_zero()) {
                os << "z,";
                continue;
            }
            if (e.is_bounded()) {
                os << (e.lower_bound() >= K ? "z," : "?,");
                continue;
            }
            if (e.valuation() >= K) {
                os << "z,";
                continue;
            }
            try {
                Scalar tr = e.truncated(K);
                if (tr.is_zero()) {
                    os << "z,";
                    continue;
                }
                os << tr.valuation() << ":";
                for (const auto& d : tr.unit()) os << d.get_str() << ".";
                os << ",";
            } catch (const insufficient_precision&) {
                os << "?,";
            }
        }
    }
    return os.str();
}

std::vector<SubIsocrystal> subobject_family(const Isocrystal& x, const FamilyOptions& opts,
                                            const SlopeDecomposition& dec) {
    const Context& c = x.ctx();
    const unsigned n = static_cast<unsigned>(dec.pieces.size());
    std::vector<Matrix> cands;

    const unsigned masks = n <= 12 ? (1u << n) : (1u << 12);
    std::vector<Matrix> isotypic;
    for (unsigned mask = 0; mask < masks; ++mask) {
        Matrix b(c, x.dim(), 0);
        for (unsigned i = 0; i < n; ++i)
            if (mask & (1u << i))
                b = b.cols() == 0 ? dec.pieces[i].basis : hstack(b, dec.pieces[i].basis);
        isotypic.push_back(b);
    }
    for (const auto& b : isotypic) cands.push_back(b);

    if (opts.cyclic) {
        std::vector<std::vector<Scalar>> pool;
        Matrix eig = dec.full_basis();
        for (unsigned j = 0; j < eig.cols(); ++j) pool.push_back(eig.col_vec(j));
        unsigned structured = 0;
        for (unsigned i = 0; i < eig.cols() && structured < opts.structured; ++i)
            for (unsigned j = i + 1; j < eig.cols() && structured < opts.structured; ++j) {
                std::vector<Scalar> v(x.dim(), Scalar::zero(c));
                for (unsigned k = 0; k < x.dim(); ++k) v[k] = eig.at(k, i) + eig.at(k, j);
                pool.push_back(std::move(v));
                ++structured;
            }
        Rng rng(opts.seed * 0x9e3779b9u + 17);
        unsigned level = std::gcd(dec.s, c.degree());
        if (level == 0) level = 1;
        std::vector<Scalar> ffb = fixed_field_basis(c, level);
        if (ffb.empty()) ffb.push_back(Scalar::one(c));
        for (unsigned t = 0; t < opts.random_draws; ++t) {
            std::vector<Scalar> v(x.dim(), Scalar::zero(c));
            bool nonzero = false;
            for (unsigned j = 0; j < eig.cols(); ++j) {
                if (rng.coin()) continue;  // sparse draws
                Scalar coeff = Scalar::zero(c);
                for (const auto& f : ffb) {
                    long ci = rng.range(-3, 3);
                    if (ci == 0) continue;
                    coeff = coeff + f * Scalar::from_integer(c, mpz_class(ci));
                }
                if (coeff.is_zero()) continue;
                nonzero = true;
                for (unsigned k = 0; k < x.dim(); ++k) v[k] = v[k] + eig.at(k, j) * coeff;
            }
            if (nonzero) pool.push_back(std::move(v));
        }
        if (x.restriction()) {
            Matrix full = Matrix::identity(c, x.dim());
            auto fixed = twisted_fixed_vectors(x, full, *x.restriction(), 0, full);
            for (auto& v : fixed) pool.push_back(v);
            for (unsigned t = 0; t < std::min<unsigned>(opts.random_draws / 2, 16); ++t) {
                std::vector<Scalar> v(x.dim(), Scalar::zero(c));
                bool nonzero = false;
                for (const auto& f : fixed) {
                    long ci = rng.range(-2, 2);
                    if (ci == 0) continue;
                    nonzero = true;
                    Scalar s = Scalar::from_integer(c, mpz_class(ci));
                    for (unsigned k = 0; k < x.dim(); ++k) v[k] = v[k] + f[k] * s;
                }
                if (nonzero) pool.push_back(std::move(v));
            }
        }
        for (const auto& v : pool) {
            Matrix cyc = cyclic_span(x, v);
            if (cyc.cols() == 0 || cyc.cols() == x.dim()) continue;
            cands.push_back(cyc);
            for (const auto& iso : isotypic) {
                if (iso.cols() == 0 || iso.cols() + cyc.cols() > x.dim()) continue;
                Matrix un = column_space_basis(hstack(cyc, iso));
                cands.push_back(std::move(un));
            }
        }
    }

    std::map<std::string, SubIsocrystal> fam;
    for (auto& b : cands) {
        std::string key;
        try {
            key = subspace_key(b);
        } catch (const insufficient_precision&) {
            continue;
        }
        if (fam.count(key)) continue;
        auto frob = induced_frobenius(x, b);
        if (!frob) continue;
        if (x.restriction()) {
            Matrix tw = b.map_frobenius(*x.restriction() % c.degree());
            try {
                if (!(subspace_contains(b, tw) && subspace_contains(tw, b))) continue;
            } catch (const insufficient_precision&) {
                continue;
            }
        }
        fam.emplace(std::move(key), SubIsocrystal{std::move(b), std::move(*frob)});
    }
    std::vector<SubIsocrystal> out;
    for (auto& [k, v] : fam) out.push_back(std::move(v));
    std::stable_sort(out.begin(), out.end(),
                     [](const SubIsocrystal& a, const SubIsocrystal& b) { return a.dim() < b.dim(); });
    return out;
}

QuotientData quotient_by(const Isocrystal& x, const SubIsocrystal& sub) {
    const Context& c = x.ctx();
    const unsigned d = x.dim(), k = sub.dim();
    Matrix p = sub.basis;
    for (unsigned i = 0; i < d && p.cols() < d; ++i) {
        Matrix e(c, d, 1);
        e.at(i, 0) = Scalar::one(c);
        Matrix cand = p.cols() == 0 ? e : hstack(p, e);
        bool grew;
        try {
            grew = rank(cand) == cand.cols();
        } catch (const insufficient_precision&) {
            grew = false;
        }
        if (grew) p = std::move(cand);
    }
    if (p.cols() != d) throw insufficient_precision("complement completion failed");
    Matrix pinv = inverse(p);
    Matrix m = pinv * x.frobenius_matrix() * p.map_frobenius();
    Matrix z(c, d - k, d - k);
    for (unsigned i = 0; i < d - k; ++i)
        for (unsigned j = 0; j < d - k; ++j) z.at(i, j) = m.at(k + i, k + j);
    QuotientData q{Isocrystal::from_matrix(x.ctx_ptr(), z, c.degree()), Matrix(c, d, d - k),
                   Matrix(c, d - k, d)};
    if (x.restriction()) q.quotient = q.quotient.with_restriction(*x.restriction());
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d - k; ++j) q.complement.at(i, j) = p.at(i, k + j);
    for (unsigned i = 0; i < d - k; ++i)
        for (unsigned j = 0; j < d; ++j) q.proj_rows.at(i, j) = pinv.at(k + i, j);
    return q;
}

}  // namespace isoc
