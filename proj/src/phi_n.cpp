#include "isoc/phi_n.hpp"

namespace isoc {

namespace {

long matrix_scale(const Matrix& m) {
    long s = 0;
    for (unsigned i = 0; i < m.rows(); ++i)
        for (unsigned j = 0; j < m.cols(); ++j)
            if (m.at(i, j).is_known()) s = std::min(s, m.at(i, j).valuation());
    return s;
}

bool matrices_close(const Matrix& a, const Matrix& b, long floor) {
    for (unsigned i = 0; i < a.rows(); ++i)
        for (unsigned j = 0; j < a.cols(); ++j) {
            Scalar d = a.at(i, j) - b.at(i, j);
            if (!(d.is_zero() || d.lower_bound() >= floor)) return false;
        }
    return true;
}

}  // namespace

bool validate_phi_n(const PhiNModule& m) {
    const Context& c = m.iso.ctx();
    if (m.monodromy.rows() != m.iso.dim() || m.monodromy.cols() != m.iso.dim()) return false;
    // N A = q A sigma(N) as matrices is the operator identity N phi = q phi N
    Matrix lhs = m.monodromy * m.iso.frobenius_matrix();
    Matrix rhs = (m.iso.frobenius_matrix() * m.monodromy.map_frobenius())
                     .scaled(Scalar::from_integer(c, c.prime()));
    long scale = std::min(matrix_scale(lhs), matrix_scale(rhs));
    long floor = scale + static_cast<long>(c.precision()) - 2;
    if (!matrices_close(lhs, rhs, floor)) return false;
    // nilpotency (forced by the relation; tested)
    Matrix power = m.monodromy;
    for (unsigned k = 1; k < m.iso.dim(); ++k) power = power * m.monodromy;
    long nscale = matrix_scale(m.monodromy);
    long nfloor = nscale * static_cast<long>(m.iso.dim()) + static_cast<long>(c.precision()) - 2;
    Matrix zero(c, m.iso.dim(), m.iso.dim());
    return matrices_close(power, zero, nfloor);
}

std::vector<SubIsocrystal> phi_n_family(const PhiNModule& m, const Filtration& f,
                                        const SlopeDecomposition& dec, const FamilyOptions& opts) {
    auto fam = checker_family(m.iso, f, dec, opts);
    std::vector<SubIsocrystal> kept;
    for (auto& sub : fam) {
        if (sub.dim() == 0 || sub.dim() == m.iso.dim()) {
            kept.push_back(std::move(sub));
            continue;
        }
        Matrix image = m.monodromy * sub.basis;
        try {
            if (subspace_contains(sub.basis, image)) kept.push_back(std::move(sub));
        } catch (const insufficient_precision&) {
        }
    }
    return kept;
}

Verdict check_weak_admissibility_phi_n(const PhiNModule& m, const Filtration& f,
                                       const CheckOptions& opts) {
    if (!validate_phi_n(m)) throw relation_fails("N phi = q phi N does not hold");
    long th = f.t_hodge(), tn = m.iso.t_newton();
    if (th != tn) {
        Verdict v;
        v.kind = Verdict::Kind::ConditionIFails;
        v.t_hodge = th;
        v.t_newton = tn;
        return v;
    }
    SlopeVector nu = m.iso.newton_vector();
    SlopeDecomposition dec = m.iso.slope_decomposition();
    auto fam = phi_n_family(m, f, dec, opts.family);
    return check_weak_admissibility_family(m.iso, f, std::move(fam),
                                           family_complete_for(m.iso, nu), opts);
}

bool monodromy_slope_shift(const PhiNModule& m, const SlopeDecomposition& dec) {
    const Context& c = m.iso.ctx();
    long nscale = matrix_scale(m.monodromy);
    for (const auto& piece : dec.pieces) {
        Matrix image = m.monodromy * piece.basis;
        Rational down = piece.slope - 1;
        const Matrix* target = dec.piece_for(down);
        if (target) {
            try {
                if (!subspace_contains(*target, image)) return false;
            } catch (const insufficient_precision&) {
                return false;
            }
        } else {
            // no slope-(alpha-1) part: the image must vanish
            long floor = nscale + static_cast<long>(c.precision()) - 8;
            for (unsigned i = 0; i < image.rows(); ++i)
                for (unsigned j = 0; j < image.cols(); ++j) {
                    const Scalar& e = image.at(i, j);
                    if (!(e.is_zero() || e.lower_bound() >= floor)) return false;
                }
        }
    }
    return true;
}

}  // namespace isoc
