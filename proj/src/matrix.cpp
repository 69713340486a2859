#include "isoc/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace isoc {

Matrix Matrix::identity(const Context& ctx, unsigned n) {
    Matrix m(ctx, n, n);
    for (unsigned i = 0; i < n; ++i) m.at(i, i) = Scalar::one(ctx);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(*ctx_, cols_, rows_);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::map_frobenius(unsigned power) const {
    Matrix t(*ctx_, rows_, cols_);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j) t.at(i, j) = at(i, j).frobenius(power);
    return t;
}

Matrix Matrix::pi_scaled(long k) const {
    Matrix t(*ctx_, rows_, cols_);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j) t.at(i, j) = at(i, j).shifted(k);
    return t;
}

Matrix Matrix::scaled(const Scalar& c) const {
    Matrix t(*ctx_, rows_, cols_);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j) t.at(i, j) = at(i, j) * c;
    return t;
}

Matrix Matrix::col(unsigned j) const {
    Matrix t(*ctx_, rows_, 1);
    for (unsigned i = 0; i < rows_; ++i) t.at(i, 0) = at(i, j);
    return t;
}

Matrix Matrix::cols_range(unsigned first, unsigned count) const {
    Matrix t(*ctx_, rows_, count);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < count; ++j) t.at(i, j) = at(i, first + j);
    return t;
}

std::vector<Scalar> Matrix::col_vec(unsigned j) const {
    std::vector<Scalar> v;
    v.reserve(rows_);
    for (unsigned i = 0; i < rows_; ++i) v.push_back(at(i, j));
    return v;
}

void Matrix::set_col(unsigned j, const std::vector<Scalar>& v) {
    for (unsigned i = 0; i < rows_; ++i) at(i, j) = v[i];
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows(), b.cols());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned k = 0; k < a.cols(); ++k) {
            const Scalar& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (unsigned j = 0; j < b.cols(); ++j) {
                if (b.at(k, j).is_zero()) continue;
                c.at(i, j) = c.at(i, j) + aik * b.at(k, j);
            }
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows(), a.cols());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows(), a.cols());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
    return c;
}

std::string Matrix::str() const {
    std::ostringstream os;
    for (unsigned i = 0; i < rows_; ++i) {
        os << "[ ";
        for (unsigned j = 0; j < cols_; ++j) os << at(i, j).str() << (j + 1 < cols_ ? ", " : "");
        os << " ]\n";
    }
    return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows(), a.cols() + b.cols());
    for (unsigned i = 0; i < a.rows(); ++i) {
        for (unsigned j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
        for (unsigned j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
    }
    return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows() + b.rows(), a.cols());
    for (unsigned j = 0; j < a.cols(); ++j) {
        for (unsigned i = 0; i < a.rows(); ++i) c.at(i, j) = a.at(i, j);
        for (unsigned i = 0; i < b.rows(); ++i) c.at(a.rows() + i, j) = b.at(i, j);
    }
    return c;
}

Matrix from_cols(const Context& ctx, unsigned rows, const std::vector<std::vector<Scalar>>& cols) {
    Matrix c(ctx, rows, static_cast<unsigned>(cols.size()));
    for (unsigned j = 0; j < cols.size(); ++j) c.set_col(j, cols[j]);
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.ctx(), a.rows() * b.rows(), a.cols() * b.cols());
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (unsigned k = 0; k < b.rows(); ++k)
                for (unsigned l = 0; l < b.cols(); ++l)
                    c.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return c;
}

namespace {

// Absolute-precision floor: the matrix is only determined modulo pi^tau.
long precision_floor(const Matrix& m) {
    long tau = Scalar::kZeroSentinel;
    for (unsigned i = 0; i < m.rows(); ++i)
        for (unsigned j = 0; j < m.cols(); ++j) {
            const Scalar& e = m.at(i, j);
            if (e.is_known())
                tau = std::min(tau, e.valuation() + static_cast<long>(e.relprec()));
            else if (e.is_bounded())
                tau = std::min(tau, e.lower_bound());
        }
    return tau;
}

bool negligible(const Scalar& e, long tau) {
    return e.is_zero() || (e.is_bounded() && e.lower_bound() >= tau);
}

// Zero floor for elimination decisions.  Entries are determined mod pi^tau;
// the elimination itself costs precision (one cancellation depth per step),
// so residuals certified down to tau - (2*steps + 8) count as zero.  Output
// residual bounds always carry the honest certified value.
long zero_floor(const Matrix& m, long tau) {
    long steps = static_cast<long>(std::min(m.rows(), m.cols()));
    return tau - (2 * steps + 8);
}

struct Elim {
    Matrix m;
    std::vector<int> prow;           // pivot row per column, -1 = free
    std::vector<unsigned> pcols;
    std::vector<Scalar> pivots;      // values at selection time
    long tau;
};

// Row echelon / RREF with minimal-valuation pivoting.  Bounded entries below
// the floor block pivot certification.  The pivot column of an eliminated row
// is forced to ExactZero: the multiplier is by definition the exact quotient,
// so the cancellation there is structural; uncertainty flows into the other
// columns through the multiplier's state.
Elim echelonize(const Matrix& in, bool reduced) {
    Elim e{in, std::vector<int>(in.cols(), -1), {}, {}, precision_floor(in)};
    Matrix& m = e.m;
    const unsigned rows = m.rows(), cols = m.cols();
    const long floor = zero_floor(in, e.tau);
    std::vector<bool> used(rows, false);
    for (unsigned c = 0; c < cols; ++c) {
        int best = -1;
        long bestval = 0;
        long blocker = Scalar::kZeroSentinel;
        for (unsigned i = 0; i < rows; ++i) {
            if (used[i]) continue;
            const Scalar& x = m.at(i, c);
            if (negligible(x, floor)) continue;
            if (x.is_known()) {
                if (best < 0 || x.valuation() < bestval) {
                    best = static_cast<int>(i);
                    bestval = x.valuation();
                }
            } else {
                blocker = std::min(blocker, x.lower_bound());
            }
        }
        if (best < 0) {
            if (blocker < Scalar::kZeroSentinel)
                throw insufficient_precision("pivot decision uncertain in column");
            continue;  // free column
        }
        if (blocker < bestval)
            throw insufficient_precision("bounded entry below candidate pivot valuation");
        const unsigned r = static_cast<unsigned>(best);
        used[r] = true;
        e.prow[c] = best;
        e.pcols.push_back(c);
        e.pivots.push_back(m.at(r, c));
        if (reduced) {
            Scalar inv = m.at(r, c).inverse();
            for (unsigned j = 0; j < cols; ++j)
                if (j != c) m.at(r, j) = m.at(r, j) * inv;
            m.at(r, c) = Scalar::one(m.ctx());
        }
        for (unsigned i = 0; i < rows; ++i) {
            if (i == r) continue;
            if (!reduced && used[i]) continue;
            const Scalar& x = m.at(i, c);
            if (negligible(x, floor)) continue;
            Scalar mult = reduced ? x : x / m.at(r, c);
            for (unsigned j = 0; j < cols; ++j) {
                if (j == c) continue;
                if (m.at(r, j).is_zero()) continue;
                m.at(i, j) = m.at(i, j) - mult * m.at(r, j);
            }
            m.at(i, c) = Scalar::zero(m.ctx());
        }
    }
    return e;
}

}  // namespace

std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m) {
    Elim e = echelonize(m, true);
    std::vector<std::vector<Scalar>> out;
    const Context& ctx = m.ctx();
    for (unsigned f = 0; f < m.cols(); ++f) {
        if (e.prow[f] >= 0) continue;
        std::vector<Scalar> v(m.cols(), Scalar::zero(ctx));
        v[f] = Scalar::one(ctx);
        for (unsigned c = 0; c < m.cols(); ++c) {
            if (e.prow[c] < 0) continue;
            v[c] = -e.m.at(static_cast<unsigned>(e.prow[c]), f);
        }
        out.push_back(std::move(v));
    }
    return out;
}

unsigned rank(const Matrix& m) { return static_cast<unsigned>(echelonize(m, false).pcols.size()); }

Matrix solve(const Matrix& a, const Matrix& b) {
    Matrix aug = hstack(a, b);
    Elim e = echelonize(aug, true);
    const unsigned n = a.cols();
    Matrix x(a.ctx(), n, b.cols());
    for (unsigned c = 0; c < n; ++c) {
        if (e.prow[c] < 0) throw input_error("solve: matrix is singular at working precision");
        for (unsigned j = 0; j < b.cols(); ++j)
            x.at(c, j) = e.m.at(static_cast<unsigned>(e.prow[c]), n + j);
    }
    // consistency: no pivot inside the right block beyond column n
    for (unsigned c : e.pcols)
        if (c >= n) throw input_error("solve: inconsistent system");
    return x;
}

Matrix inverse(const Matrix& m) { return solve(m, Matrix::identity(m.ctx(), m.rows())); }

Scalar determinant(const Matrix& m) {
    Elim e = echelonize(m, false);
    if (e.pcols.size() < m.rows()) return Scalar::zero(m.ctx());
    Scalar d = Scalar::one(m.ctx());
    for (const Scalar& p : e.pivots) d = d * p;
    // permutation parity of (pivot column order -> pivot row)
    std::vector<int> perm;
    for (unsigned c : e.pcols) perm.push_back(e.prow[c]);
    int sign = 1;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign > 0 ? d : -d;
}

long det_valuation(const Matrix& m) {
    Elim e = echelonize(m, false);
    if (e.pcols.size() < m.rows()) throw input_error("det_valuation: singular matrix");
    long v = 0;
    for (const Scalar& p : e.pivots) v += p.valuation();
    return v;
}

namespace {

// Global-minimum pivot for the two-sided (Smith) reduction.
struct SmithPivot {
    int row = -1, col = -1;
    long val = 0;
};

SmithPivot find_smith_pivot(const Matrix& m, const std::vector<bool>& rdone,
                            const std::vector<bool>& cdone, long floor) {
    SmithPivot best;
    long blocker = Scalar::kZeroSentinel;
    for (unsigned i = 0; i < m.rows(); ++i) {
        if (rdone[i]) continue;
        for (unsigned j = 0; j < m.cols(); ++j) {
            if (cdone[j]) continue;
            const Scalar& x = m.at(i, j);
            if (negligible(x, floor)) continue;
            if (x.is_known()) {
                if (best.row < 0 || x.valuation() < best.val) {
                    best = {static_cast<int>(i), static_cast<int>(j), x.valuation()};
                }
            } else {
                blocker = std::min(blocker, x.lower_bound());
            }
        }
    }
    if (best.row >= 0 && blocker < best.val)
        throw insufficient_precision("bounded entry below Smith pivot valuation");
    if (best.row < 0 && blocker < Scalar::kZeroSentinel)
        throw insufficient_precision("Smith pivot decision uncertain");
    return best;
}

}  // namespace

std::vector<long> smith_valuations(const Matrix& m0) {
    if (m0.rows() != m0.cols()) throw input_error("smith_valuations: matrix not square");
    Matrix m = m0;
    const long floor = zero_floor(m, precision_floor(m));
    std::vector<bool> rdone(m.rows(), false), cdone(m.cols(), false);
    std::vector<long> vals;
    for (unsigned step = 0; step < m.rows(); ++step) {
        SmithPivot pv = find_smith_pivot(m, rdone, cdone, floor);
        if (pv.row < 0) throw input_error("smith_valuations: matrix singular at working precision");
        const unsigned r = static_cast<unsigned>(pv.row), c = static_cast<unsigned>(pv.col);
        const Scalar piv = m.at(r, c);
        // clear column c with row operations (multipliers are integral)
        for (unsigned i = 0; i < m.rows(); ++i) {
            if (i == r || rdone[i]) continue;
            const Scalar& x = m.at(i, c);
            if (negligible(x, floor)) { m.at(i, c) = Scalar::zero(m.ctx()); continue; }
            Scalar mult = x / piv;
            for (unsigned j = 0; j < m.cols(); ++j) {
                if (j == c || cdone[j]) continue;
                if (m.at(r, j).is_zero()) continue;
                m.at(i, j) = m.at(i, j) - mult * m.at(r, j);
            }
            m.at(i, c) = Scalar::zero(m.ctx());
        }
        // clear row r with column operations
        for (unsigned j = 0; j < m.cols(); ++j) {
            if (j == c || cdone[j]) continue;
            m.at(r, j) = Scalar::zero(m.ctx());
        }
        vals.push_back(pv.val);
        rdone[r] = true;
        cdone[c] = true;
    }
    std::sort(vals.begin(), vals.end(), std::greater<long>());
    return vals;
}

std::pair<Matrix, std::vector<long>> smith_left_transform(const Matrix& c0) {
    Matrix m = c0;
    Matrix u = Matrix::identity(m.ctx(), m.rows());
    const long floor = zero_floor(m, precision_floor(m));
    std::vector<bool> rdone(m.rows(), false), cdone(m.cols(), false);
    std::vector<long> vals;
    const unsigned steps = std::min(m.rows(), m.cols());
    for (unsigned step = 0; step < steps; ++step) {
        SmithPivot pv = find_smith_pivot(m, rdone, cdone, floor);
        if (pv.row < 0) break;
        const unsigned r = static_cast<unsigned>(pv.row), c = static_cast<unsigned>(pv.col);
        const Scalar piv = m.at(r, c);
        for (unsigned i = 0; i < m.rows(); ++i) {
            if (i == r || rdone[i]) continue;
            const Scalar& x = m.at(i, c);
            if (negligible(x, floor)) { m.at(i, c) = Scalar::zero(m.ctx()); continue; }
            Scalar mult = x / piv;  // integral: pivot has globally minimal valuation
            for (unsigned j = 0; j < m.cols(); ++j) {
                if (j == c || cdone[j]) continue;
                if (m.at(r, j).is_zero()) continue;
                m.at(i, j) = m.at(i, j) - mult * m.at(r, j);
            }
            m.at(i, c) = Scalar::zero(m.ctx());
            // working <- E * working with E = I - mult e_i e_r^T, so U <- U E^{-1}:
            // col_r(U) += mult * col_i(U)
            for (unsigned k = 0; k < u.rows(); ++k)
                u.at(k, r) = u.at(k, r) + mult * u.at(k, i);
        }
        for (unsigned j = 0; j < m.cols(); ++j) {
            if (j == c || cdone[j]) continue;
            m.at(r, j) = Scalar::zero(m.ctx());
        }
        vals.push_back(pv.val);
        rdone[r] = true;
        cdone[c] = true;
    }
    // The reduced matrix has a single pivot per selected (row, col); the
    // saturation of the input span is generated by the transform columns at
    // the pivot rows.  Put those first, the complement after.
    std::vector<unsigned> order;
    for (unsigned i = 0; i < m.rows(); ++i)
        if (rdone[i]) order.push_back(i);
    std::vector<unsigned> free_rows;
    for (unsigned i = 0; i < m.rows(); ++i)
        if (!rdone[i]) free_rows.push_back(i);
    Matrix out(m.ctx(), u.rows(), u.cols());
    unsigned idx = 0;
    for (unsigned i : order) {
        for (unsigned k = 0; k < u.rows(); ++k) out.at(k, idx) = u.at(k, i);
        ++idx;
    }
    for (unsigned i : free_rows) {
        for (unsigned k = 0; k < u.rows(); ++k) out.at(k, idx) = u.at(k, i);
        ++idx;
    }
    return {out, vals};
}

std::vector<Scalar> charpoly(const Matrix& a) {
    const unsigned d = a.rows();
    const Context& ctx = a.ctx();
    std::vector<Scalar> c(d + 1, Scalar::zero(ctx));
    c[d] = Scalar::one(ctx);
    if (d == 0) return c;
    Matrix m = a;
    auto trace = [](const Matrix& x) {
        Scalar t = Scalar::zero(x.ctx());
        for (unsigned i = 0; i < x.rows(); ++i) t = t + x.at(i, i);
        return t;
    };
    c[d - 1] = -trace(m);
    for (unsigned k = 2; k <= d; ++k) {
        // m <- a * (m + c_{d-k+1} I)
        Matrix t = m;
        for (unsigned i = 0; i < d; ++i) t.at(i, i) = t.at(i, i) + c[d - k + 1];
        m = a * t;
        Scalar tr = trace(m);
        c[d - k] = -(tr / Scalar::from_integer(ctx, mpz_class(k)));
    }
    return c;
}

std::vector<std::pair<std::pair<long, long>, unsigned>> newton_root_valuations(
    const std::vector<Scalar>& coeffs) {
    const long d = static_cast<long>(coeffs.size()) - 1;
    // gather certified points
    std::vector<std::pair<long, long>> pts;  // (i, v)
    for (long i = 0; i <= d; ++i) {
        const Scalar& c = coeffs[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        if (c.is_known()) pts.emplace_back(i, c.valuation());
    }
    if (coeffs[0].is_zero()) throw input_error("newton polygon of a polynomial with zero constant term");
    if (!coeffs[0].is_known() || !coeffs[static_cast<size_t>(d)].is_known())
        throw insufficient_precision("endpoint coefficient valuation uncertain");
    // lower convex hull, x increasing
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // pop b if it lies on or above segment a-p
            __int128 cross = static_cast<__int128>(b.first - a.first) * (p.second - a.second) -
                             static_cast<__int128>(b.second - a.second) * (p.first - a.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    // keep only the part that is actually the lower hull (x strictly increasing is
    // guaranteed; monotone chain above already yields the lower hull for sorted x)
    // certify bounded coefficients against the hull
    auto hull_ge = [&hull](long i, long bound) {
        // true if bound >= hull(i)
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            if (hull[k].first <= i && i <= hull[k + 1].first) {
                long x1 = hull[k].first, y1 = hull[k].second;
                long x2 = hull[k + 1].first, y2 = hull[k + 1].second;
                // bound >= y1 + (y2-y1)(i-x1)/(x2-x1)
                return static_cast<__int128>(bound - y1) * (x2 - x1) >=
                       static_cast<__int128>(y2 - y1) * (i - x1);
            }
        }
        return true;
    };
    for (long i = 0; i <= d; ++i) {
        const Scalar& c = coeffs[static_cast<size_t>(i)];
        if (c.is_bounded() && !hull_ge(i, c.lower_bound()))
            throw insufficient_precision("characteristic coefficient uncertain at a hull vertex");
    }
    // root valuations: segment slope -s gives roots of valuation s
    std::vector<std::pair<std::pair<long, long>, unsigned>> out;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        long dx = hull[k + 1].first - hull[k].first;
        long dy = hull[k + 1].second - hull[k].second;
        out.push_back({{-dy, dx}, static_cast<unsigned>(dx)});
    }
    return out;  // traversal left to right = decreasing root valuation
}

bool subspace_contains(const Matrix& space, const Matrix& sub) {
    if (sub.cols() == 0) return true;
    return rank(space) == rank(hstack(space, sub));
}

Matrix column_space_basis(const Matrix& m) {
    Elim e = echelonize(m, false);
    Matrix b(m.ctx(), m.rows(), static_cast<unsigned>(e.pcols.size()));
    unsigned idx = 0;
    for (unsigned c : e.pcols) {
        for (unsigned i = 0; i < m.rows(); ++i) b.at(i, idx) = m.at(i, c);
        ++idx;
    }
    return b;
}

Matrix annihilator_rows(const Matrix& m) {
    auto kb = kernel_basis(m.transpose());
    Matrix rows(m.ctx(), static_cast<unsigned>(kb.size()), m.rows());
    for (unsigned i = 0; i < kb.size(); ++i)
        for (unsigned j = 0; j < m.rows(); ++j) rows.at(i, j) = kb[i][j];
    return rows;
}

Matrix subspace_intersection(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return Matrix(a.ctx(), a.rows(), 0);
    // kernel of [a | -b]
    Matrix ab(a.ctx(), a.rows(), a.cols() + b.cols());
    for (unsigned i = 0; i < a.rows(); ++i) {
        for (unsigned j = 0; j < a.cols(); ++j) ab.at(i, j) = a.at(i, j);
        for (unsigned j = 0; j < b.cols(); ++j) ab.at(i, a.cols() + j) = -b.at(i, j);
    }
    auto kb = kernel_basis(ab);
    std::vector<std::vector<Scalar>> cols;
    for (const auto& v : kb) {
        std::vector<Scalar> w(a.rows(), Scalar::zero(a.ctx()));
        for (unsigned j = 0; j < a.cols(); ++j) {
            if (v[j].is_zero()) continue;
            for (unsigned i = 0; i < a.rows(); ++i) w[i] = w[i] + a.at(i, j) * v[j];
        }
        cols.push_back(std::move(w));
    }
    Matrix res = from_cols(a.ctx(), a.rows(), cols);
    return column_space_basis(res);
}

unsigned intersection_dim(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return 0;
    unsigned ra = rank(a), rb = rank(b), rj = rank(hstack(a, b));
    return ra + rb - rj;
}

}  // namespace isoc
