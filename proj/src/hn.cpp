#include "isoc/hn.hpp"

#include <algorithm>

#include "isoc/existence.hpp"

namespace isoc {

namespace {

// image filtration on the quotient: levels are projected step spans, target
// dimensions c_i - dim(F^i \cap kernel)
Filtration image_filtration(const Filtration& f, const SubIsocrystal& sub, const QuotientData& q) {
    const Context& c = f.ctx();
    const unsigned dq = q.quotient.dim();
    std::vector<long> mu;
    long lo = f.min_jump(), hi = f.max_jump();
    std::map<long, unsigned> cbar;
    cbar[lo] = dq;
    for (long i = lo + 1; i <= hi; ++i) {
        unsigned ci = f.level_dim(i);
        unsigned cut = intersection_dim(f.step(i), sub.basis);
        cbar[i] = ci - cut;
    }
    cbar[hi + 1] = 0;
    for (long i = hi; i >= lo; --i) {
        unsigned count = cbar[i] - cbar[i + 1];
        for (unsigned k = 0; k < count; ++k) mu.push_back(i);
    }
    std::vector<std::pair<Matrix, unsigned>> levels;
    for (long i = hi; i > lo; --i) {
        Matrix proj = q.proj_rows * f.step(i);
        levels.emplace_back(std::move(proj), cbar[i]);
    }
    Matrix flag = flag_from_chain(c, dq, levels);
    return Filtration(f.ctx_ptr(), std::move(mu), std::move(flag));
}

}  // namespace

HNVector hn_vector(const Isocrystal& x, const Filtration& f, const CheckOptions& opts) {
    if (f.t_hodge() != x.t_newton()) throw condition_i_fails(f.t_hodge(), x.t_newton());
    const Context& c = x.ctx();

    HNVector out;
    out.exact = true;
    std::vector<Rational> lambda;

    Isocrystal cur = x;
    Filtration curf = f;
    // columns expressing current-stage coordinates inside the ambient space
    Matrix lift = Matrix::identity(c, x.dim());
    Matrix acc(c, x.dim(), 0);  // realized flag so far

    for (unsigned stage = 0; stage < x.dim() + 1; ++stage) {
        SlopeVector nu = cur.newton_vector();
        SlopeDecomposition dec = cur.slope_decomposition();
        CheckOptions o = opts;
        o.family.seed = opts.family.seed + stage * 1299709u;
        auto fam = checker_family(cur, curf, dec, o.family);
        out.exact = out.exact && family_complete_for(cur, nu);

        // the whole space is always a candidate
        Rational best_slope(f.t_hodge() - x.t_newton());  // placeholder, reset below
        int best = -1;
        unsigned best_dim = 0;
        auto slope_of = [&](unsigned dim, long th, long tn) {
            Rational s(th - tn, static_cast<long>(dim));
            s.canonicalize();
            return s;
        };
        Rational whole = slope_of(cur.dim(), curf.t_hodge(), cur.t_newton());
        best_slope = whole;
        best_dim = cur.dim();
        for (unsigned idx = 0; idx < fam.size(); ++idx) {
            const auto& sub = fam[idx];
            if (sub.dim() == 0 || sub.dim() == cur.dim()) continue;
            long th = t_hodge_of(induced_type(curf, sub.basis));
            Rational s = slope_of(sub.dim(), th, sub.t_newton());
            if (s > best_slope || (s == best_slope && sub.dim() > best_dim)) {
                best_slope = s;
                best = static_cast<int>(idx);
                best_dim = sub.dim();
            }
        }

        if (best < 0) {
            // the destabilizer is the whole stage: close the recursion
            for (unsigned k = 0; k < cur.dim(); ++k) lambda.push_back(whole);
            break;
        }
        const SubIsocrystal& dest = fam[static_cast<unsigned>(best)];
        for (unsigned k = 0; k < dest.dim(); ++k) lambda.push_back(best_slope);
        Matrix realized = lift * dest.basis;
        acc = acc.cols() == 0 ? realized : hstack(acc, realized);
        out.flag.push_back(column_space_basis(acc));

        QuotientData q = quotient_by(cur, dest);
        curf = image_filtration(curf, dest, q);
        lift = lift * q.complement;
        cur = q.quotient;
    }

    // HN slopes strictly decrease along the recursion in the exact regime
    if (out.exact) {
        for (size_t i = 0; i + 1 < lambda.size(); ++i)
            if (lambda[i] < lambda[i + 1])
                throw insufficient_precision("HN slopes failed to decrease in the exact regime");
    }
    Rational total(0);
    for (const auto& s : lambda) total += s;
    if (total != 0) throw insufficient_precision("HN vector total is nonzero");

    // keep the recursion order (already decreasing); the constructor sorts,
    // which is a no-op here
    out.lambda = SlopeVector(std::move(lambda));
    return out;
}

StratumReport stratum_sample(const Isocrystal& x, const std::vector<long>& mu, unsigned trials,
                             std::uint64_t seed, const CheckOptions& opts) {
    StratumReport rep;
    rep.trials = trials;
    const unsigned level = x.restriction() ? *x.restriction() : x.ctx().degree();
    std::map<SlopeVector, unsigned> counts;
    std::map<SlopeVector, std::pair<Filtration, bool>> witness;
    Rng master(seed);
    for (unsigned t = 0; t < trials; ++t) {
        Rng rng = master.fork(t + 1);
        Matrix flag = random_flag(x.ctx(), x.dim(), rng, level);
        Filtration f(x.ctx_ptr(), mu, std::move(flag));
        CheckOptions o = opts;
        o.family.seed = seed + t;
        HNVector hn = hn_vector(x, f, o);
        counts[hn.lambda] += 1;
        if (!witness.count(hn.lambda)) witness.emplace(hn.lambda, std::make_pair(f, hn.exact));
    }
    for (auto& [lambda, count] : counts) {
        auto it = witness.find(lambda);
        rep.strata.push_back({lambda, count, it->second.first, it->second.second});
    }
    std::stable_sort(rep.strata.begin(), rep.strata.end(),
                     [](const auto& a, const auto& b) { return a.count > b.count; });
    return rep;
}

}  // namespace isoc
