#include "isoc/existence.hpp"

#include <sstream>

namespace isoc {

Matrix random_flag(const Context& ctx, unsigned d, Rng& rng, unsigned level) {
    const unsigned digits = 8;
    auto draw_entry = [&]() {
        unsigned deg = level == 1 ? 1 : ctx.degree();
        std::vector<mpz_class> coeffs(deg, mpz_class(0));
        for (unsigned k = 0; k < deg; ++k) {
            mpz_class v(0), pw(1);
            for (unsigned t = 0; t < digits; ++t) {
                v += pw * static_cast<long>(rng.below(
                             ctx.prime().fits_ulong_p() ? ctx.prime().get_ui() : 1000000));
                pw *= ctx.prime();
            }
            coeffs[k] = v;
        }
        return Scalar::from_int_poly(ctx, coeffs);
    };
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix g(ctx, d, d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j) g.at(i, j) = draw_entry();
        try {
            if (det_valuation(g) == 0) return g;  // unimodular flag
        } catch (const error&) {
        }
    }
    throw insufficient_precision("could not draw an invertible flag matrix");
}

ConstructionResult construct_admissible_filtration(const Isocrystal& x,
                                                   const std::vector<long>& mu,
                                                   const GenericityBudget& budget) {
    if (mu.size() != x.dim()) throw input_error("type length differs from the dimension");
    SlopeVector nu = x.newton_vector();
    SlopeVector mu_sv = SlopeVector::integral(mu);
    if (!dominance_leq(nu, mu_sv)) throw dominance_fails();

    SlopeDecomposition dec = x.slope_decomposition();
    const bool complete = family_complete_for(x, nu);
    const unsigned level = x.restriction() ? *x.restriction() : x.ctx().degree();

    std::string last_failure = "no draws";
    Rng master(budget.seed);
    for (unsigned retry = 0; retry < std::max(1u, budget.retries); ++retry) {
        Rng rng = master.fork(retry + 1);
        Matrix flag = random_flag(x.ctx(), x.dim(), rng, level);
        Filtration f(x.ctx_ptr(), mu, std::move(flag));

        CheckOptions opts = budget.check;
        opts.family.seed = budget.seed * 1315423911u + retry;
        auto fam = checker_family(x, f, dec, opts.family);
        Verdict v = check_weak_admissibility_family(x, f, fam, complete, opts);
        if (!v.admissible_or_probable()) {
            std::ostringstream os;
            os << "draw " << retry << ": " << v.str();
            last_failure = os.str();
            continue;
        }

        // the proof mechanism: every family subobject meets the filtration
        // transversally and the induced type is the tail of mu
        auto rows = transversality_report(x, f, fam);
        bool mechanism = true;
        for (const auto& row : rows)
            if (!row.equal) mechanism = false;
        if (mechanism) {
            for (const auto& sub : fam) {
                if (sub.dim() == 0) continue;
                std::vector<long> tail(mu.end() - sub.dim(), mu.end());
                std::vector<long> got = induced_type(f, sub.basis);
                if (got != tail) {
                    mechanism = false;
                    break;
                }
                // the inequality that closes the argument
                if (t_hodge_of(tail) > sub.t_newton()) {
                    mechanism = false;
                    break;
                }
            }
        }
        if (!mechanism) {
            last_failure = "draw " + std::to_string(retry) + ": non-transverse position";
            continue;
        }
        return ConstructionResult{std::move(f), std::move(v), std::move(fam), std::move(rows),
                                  retry + 1};
    }
    throw retries_exhausted(last_failure);
}

}  // namespace isoc
