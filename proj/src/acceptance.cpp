#include "isoc/acceptance.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "isoc/existence.hpp"
#include "isoc/generate.hpp"
#include "isoc/hn.hpp"
#include "isoc/io.hpp"

namespace isoc {

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

struct Outcomes {
    bool pass = true;
    std::vector<std::string> per_instance;
    std::string note;
};

// ---------------------------------------------------------------- criterion 1
bool criterion1_dominance_polygon(std::ostream& os, bool quick) {
    Rng rng(20260101);
    const int pairs = quick ? 1000 : 10000;
    int hits = 0;
    for (int t = 0; t < pairs; ++t) {
        size_t d = 1 + rng.below(8);
        std::vector<Rational> a, b;
        for (size_t i = 0; i < d; ++i) {
            a.emplace_back(rng.range(-6, 6), rng.range(1, 4));
            b.emplace_back(rng.range(-6, 6), rng.range(1, 4));
        }
        SlopeVector sa(std::move(a));
        SlopeVector sb;
        if (rng.coin()) {
            // same-total partner so the relation is exercised
            std::vector<Rational> c = sa.entries();
            for (int moves = rng.range(0, 4); moves > 0; --moves) {
                size_t i = rng.below(d), j = rng.below(d);
                if (i == j) continue;
                Rational step(1, rng.range(1, 3));
                c[i] += step;
                c[j] -= step;
            }
            sb = SlopeVector(std::move(c));
        } else {
            sb = SlopeVector(std::move(b));
        }
        bool dom = dominance_leq(sa, sb);
        bool geo = polygon_above_same_endpoints(sa, sb);
        if (dom != geo) {
            os << "  disagreement at pair " << t << ": " << sa.str() << " vs " << sb.str()
               << "\n";
            return false;
        }
        if (dom) ++hits;
    }
    os << "  " << pairs << " pairs, relation held " << hits << " times\n";
    return hits > 0;
}

// ---------------------------------------------------------------- criterion 2
std::vector<std::vector<StandardSummand>> enumerate_summand_lists(unsigned dmax) {
    std::vector<std::pair<long, unsigned>> items;
    for (unsigned b = 1; b <= 4; ++b)
        for (long a = -3; a <= 3; ++a)
            if (std::gcd(std::labs(a), static_cast<long>(b)) == 1) items.emplace_back(a, b);
    std::vector<std::vector<StandardSummand>> out;
    std::vector<StandardSummand> cur;
    // multisets: nondecreasing item index, multiplicity folded into the entry
    std::function<void(size_t, unsigned)> rec = [&](size_t from, unsigned left) {
        if (!cur.empty()) out.push_back(cur);
        for (size_t k = from; k < items.size(); ++k) {
            if (items[k].second > left) continue;
            if (!cur.empty() && cur.back().a == items[k].first &&
                cur.back().b == items[k].second) {
                continue;  // multiplicity handled when the item was first chosen
            }
            for (unsigned mult = 1; mult * items[k].second <= left; ++mult) {
                cur.push_back({items[k].first, items[k].second, mult});
                rec(k + 1, left - mult * items[k].second);
                cur.pop_back();
            }
        }
    };
    rec(0, dmax);
    return out;
}

Outcomes run_c2(unsigned prec, bool quick, std::ostream* os) {
    Outcomes out;
    auto lists = enumerate_summand_lists(6);
    if (os) *os << "  " << lists.size() << " summand lists\n";
    std::map<unsigned, ContextPtr> ctx_cache;
    const unsigned conj = quick ? 5 : 50;
    for (size_t idx = 0; idx < lists.size(); ++idx) {
        const auto& sm = lists[idx];
        long r = 1;
        unsigned d = 0;
        std::vector<Rational> declared;
        for (const auto& s : sm) {
            r = lcm_long(r, static_cast<long>(s.b));
            d += s.b * s.mult;
            for (unsigned k = 0; k < s.b * s.mult; ++k)
                declared.emplace_back(s.a, static_cast<long>(s.b));
        }
        SlopeVector want(std::move(declared));
        auto it = ctx_cache.find(static_cast<unsigned>(r));
        if (it == ctx_cache.end())
            it = ctx_cache.emplace(static_cast<unsigned>(r),
                                   Context::make(2, static_cast<unsigned>(r), prec)).first;
        try {
            Isocrystal x = Isocrystal::standard_form(it->second, sm);
            SlopeVector nu = x.newton_vector();
            if (nu != want) {
                out.pass = false;
                out.per_instance.push_back("MISMATCH");
                continue;
            }
            Rng rng(900000 + idx);
            bool invariant = true;
            for (unsigned c = 0; c < conj; ++c) {
                unsigned level = (c % 10 == 9) ? static_cast<unsigned>(r) : 1;
                Matrix g = generate_unimodular(*it->second, d, rng, level);
                if (x.base_changed(g).newton_vector() != nu) {
                    invariant = false;
                    break;
                }
            }
            if (!invariant) {
                out.pass = false;
                out.per_instance.push_back("CONJ-MISMATCH");
                continue;
            }
            out.per_instance.push_back("ok:" + nu.str());
        } catch (const insufficient_precision&) {
            out.per_instance.push_back("INSUFFICIENT");
        }
    }
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcomes run_c3(unsigned prec, bool quick) {
    Outcomes out;
    const unsigned count = quick ? 60 : 500;
    for (unsigned i = 0; i < count; ++i) {
        unsigned d = 1 + (i % 4);
        try {
            Isocrystal x = generate_standard(2, d, prec, 31000 + i);
            Rng rng(32000 + i);
            Lattice m = generate_lattice(x.ctx(), d, rng);
            if (check_mazur(x, m)) {
                out.per_instance.push_back("true");
            } else {
                out.pass = false;
                out.per_instance.push_back("VIOLATION");
            }
        } catch (const insufficient_precision&) {
            out.per_instance.push_back("INSUFFICIENT");
        }
    }
    return out;
}

// ------------------------------------------------------------ criteria 4 and 5
struct C45Data {
    Outcomes c4;
    Outcomes c5;
    // base-precision artifacts reused by later criteria
    std::vector<Isocrystal> instances;
    std::vector<Filtration> filtrations;
    std::vector<Lattice> fixpoints;
};

C45Data run_c45(unsigned prec, bool quick) {
    C45Data data;
    const unsigned count = quick ? 15 : 100;
    for (unsigned i = 0; i < count; ++i) {
        unsigned d = 2 + (i % 4);
        std::string o4, o5;
        try {
            Isocrystal x = generate_multfree(2, d, prec, 41000 + i);
            SlopeVector nu = x.newton_vector();
            Rng rng(51000 + i);
            std::vector<long> mu = random_type_above(nu, rng);
            GenericityBudget budget;
            budget.retries = 3;
            budget.seed = 61000 + i;
            ConstructionResult res = construct_admissible_filtration(x, mu, budget);
            if (res.verdict.kind != Verdict::Kind::Admissible || !res.verdict.complete) {
                data.c4.pass = false;
                o4 = "WEAK-VERDICT";
                o5 = "SKIPPED";
            } else {
                o4 = "ok:" + SlopeVector::integral(mu).str();
                // criterion 5: the lattice construction converges with type mu
                try {
                    auto lat = laffaille_iterate(x, res.filtration, Lattice::standard(x.ctx(), d));
                    if (!std::holds_alternative<Lattice>(lat)) {
                        data.c5.pass = false;
                        o5 = "DIVERGED";
                    } else {
                        Lattice m = std::get<Lattice>(lat);
                        if (lattice_type(x, m) != mu) {
                            data.c5.pass = false;
                            o5 = "TYPE-MISMATCH";
                        } else {
                            o5 = "ok";
                            data.instances.push_back(std::move(x));
                            data.filtrations.push_back(std::move(res.filtration));
                            data.fixpoints.push_back(std::move(m));
                        }
                    }
                } catch (const insufficient_precision&) {
                    o5 = "INSUFFICIENT";
                }
            }
        } catch (const retries_exhausted&) {
            data.c4.pass = false;
            o4 = "RETRIES-EXHAUSTED";
            o5 = "SKIPPED";
        } catch (const insufficient_precision&) {
            o4 = "INSUFFICIENT";
            o5 = "INSUFFICIENT";
        } catch (const error&) {
            o4 = "INSUFFICIENT";  // model-level failure at this precision
            o5 = "INSUFFICIENT";
        }
        data.c4.per_instance.push_back(std::move(o4));
        data.c5.per_instance.push_back(std::move(o5));
    }
    // negative stream: mu not dominating
    for (unsigned i = 0; i < count; ++i) {
        unsigned d = 2 + (i % 4);
        std::string o4;
        try {
            Isocrystal x = generate_standard(2, d, prec, 71000 + i);
            SlopeVector nu = x.newton_vector();
            std::optional<std::vector<long>> bad;
            for (unsigned attempt = 0; attempt < 8 && !bad; ++attempt) {
                Rng rng(72000 + 17 * i + attempt);
                bad = random_type_not_above(nu, rng);
            }
            if (!bad) {
                o4 = "NO-BAD-TYPE";
            } else {
                bool threw = false;
                try {
                    construct_admissible_filtration(x, *bad, GenericityBudget{});
                } catch (const dominance_fails&) {
                    threw = true;
                }
                if (threw) {
                    o4 = "dominance_fails";
                } else {
                    data.c4.pass = false;
                    o4 = "NEGATIVE-NOT-CAUGHT";
                }
            }
        } catch (const insufficient_precision&) {
            o4 = "INSUFFICIENT";
        } catch (const error&) {
            o4 = "INSUFFICIENT";
        }
        data.c4.per_instance.push_back(std::move(o4));
    }
    return data;
}

// ---------------------------------------------------------------- criterion 6
bool criterion6_counterexamples(std::ostream& os, unsigned prec, bool quick) {
    auto ctx = Context::make(2, 2, prec);
    Isocrystal x = Isocrystal::standard_form(ctx, {{0, 1, 2}}).with_restriction(1);
    const unsigned samples = quick ? 10 : 50;
    Rng rng(6001);
    for (unsigned i = 0; i < samples; ++i) {
        Filtration f = generate_filtration(x, {1, -1}, rng);
        Verdict v = check_weak_admissibility(x, f);
        if (v.kind != Verdict::Kind::NotAdmissible || !v.witness) {
            os << "  sample " << i << " not refuted: " << v.str() << "\n";
            return false;
        }
        // the witness re-verifies
        std::vector<long> mu_w = induced_type(f, v.witness->basis);
        long th = t_hodge_of(mu_w), tn = v.witness->t_newton();
        if (th != v.witness_t_hodge || tn != v.witness_t_newton || th <= tn) {
            os << "  witness failed re-verification at sample " << i << "\n";
            return false;
        }
    }
    // the 1-dimensional instance is admissible exactly for type (1)
    Isocrystal tate = Isocrystal::standard_form(ctx, {{1, 1, 1}});
    Matrix id1 = Matrix::identity(*ctx, 1);
    std::map<long, bool> admissible;
    for (long t : {0L, 1L, 2L}) {
        Verdict v = check_weak_admissibility(tate, Filtration(ctx, {t}, id1));
        admissible[t] = v.kind == Verdict::Kind::Admissible;
    }
    if (!(admissible[1] && !admissible[0] && !admissible[2])) {
        os << "  one-dimensional admissibility pattern wrong\n";
        return false;
    }
    os << "  " << samples << " refuted rational draws, witnesses re-verified\n";
    return true;
}

// ---------------------------------------------------------------- criterion 7
bool criterion7_hn(std::ostream& os, const C45Data& base, unsigned prec, bool quick) {
    // lambda = 0 on every constructed admissible instance
    for (size_t i = 0; i < base.instances.size(); ++i) {
        HNVector hn = hn_vector(base.instances[i], base.filtrations[i]);
        SlopeVector zero(std::vector<Rational>(base.instances[i].dim(), Rational(0)));
        if (hn.lambda != zero) {
            os << "  constructed instance " << i << " has nonzero lambda " << hn.lambda.str()
               << "\n";
            return false;
        }
    }
    // random draws on the same instances: lambda = 0 iff Admissible
    unsigned checked = 0;
    for (size_t i = 0; i < base.instances.size() && checked < (quick ? 8u : 60u); ++i) {
        const Isocrystal& x = base.instances[i];
        Rng rng(73000 + i);
        std::vector<long> mu = base.filtrations[i].type();
        Filtration f = generate_filtration(x, mu, rng);
        Verdict v = check_weak_admissibility(x, f);
        if (v.kind == Verdict::Kind::ConditionIFails) continue;
        HNVector hn = hn_vector(x, f);
        SlopeVector zero(std::vector<Rational>(x.dim(), Rational(0)));
        bool iszero = hn.lambda == zero;
        bool isadm = v.kind == Verdict::Kind::Admissible;
        if (iszero != isadm) {
            os << "  lambda/verdict mismatch on draw " << i << ": " << hn.lambda.str() << " vs "
               << v.str() << "\n";
            return false;
        }
        ++checked;
    }
    // the two hand-derived (1,-1) instances
    auto ctx = Context::make(2, 2, prec);
    Isocrystal xr = Isocrystal::standard_form(ctx, {{0, 1, 2}}).with_restriction(1);
    Matrix flag(*ctx, 2, 2);
    flag.at(0, 0) = Scalar::one(*ctx);
    flag.at(1, 0) = Scalar::from_integer(*ctx, 3);
    flag.at(1, 1) = Scalar::one(*ctx);
    HNVector h1 = hn_vector(xr, Filtration(ctx, {1, -1}, flag));
    if (h1.lambda != SlopeVector::integral({1, -1})) {
        os << "  restricted instance lambda " << h1.lambda.str() << "\n";
        return false;
    }
    auto ctx1 = Context::make(2, 1, prec);
    Isocrystal e01 = Isocrystal::standard_form(ctx1, {{0, 1, 1}, {1, 1, 1}});
    Matrix flag2 = Matrix::identity(*ctx1, 2);
    HNVector h2 = hn_vector(e01, Filtration(ctx1, {1, 0}, flag2));
    if (h2.lambda != SlopeVector::integral({1, -1})) {
        os << "  split instance lambda " << h2.lambda.str() << "\n";
        return false;
    }
    os << "  lambda = 0 on " << base.instances.size() << " constructed instances, " << checked
       << " random draws cross-checked\n";
    return true;
}

// ---------------------------------------------------------------- criterion 8
bool criterion8_divisibility_duality(std::ostream& os, const C45Data& base, unsigned prec,
                                     bool quick) {
    for (size_t i = 0; i < base.fixpoints.size(); ++i) {
        if (!strongly_divisible(base.instances[i], base.filtrations[i], base.fixpoints[i])) {
            os << "  fixpoint " << i << " is not strongly divisible\n";
            return false;
        }
    }
    // duality on seeded instances of dimension <= 3
    const unsigned want = quick ? 12 : 100;
    unsigned done = 0;
    unsigned seed = 0;
    while (done < want && seed < 6 * want) {
        ++seed;
        unsigned d = 1 + (seed % 3);
        try {
            Isocrystal x = generate_multfree(2, d, prec, 81000 + seed);
            SlopeVector nu = x.newton_vector();
            Rng rng(82000 + seed);
            std::vector<long> mu = random_type_above(nu, rng);
            GenericityBudget budget;
            budget.seed = 83000 + seed;
            ConstructionResult cons = construct_admissible_filtration(x, mu, budget);
            Lattice m = generate_lattice(x.ctx(), d, rng);
            auto ab = adapted_bounds(x, cons.filtration, m);
            if (!(lattice_contains(m, ab.max_inside) && lattice_contains(ab.min_outside, m))) {
                os << "  nesting failed at seed " << seed << "\n";
                return false;
            }
            auto abd = adapted_bounds(x.dual(), dual_filtration(cons.filtration), m.dual());
            if (!lattice_equal(abd.max_inside, ab.min_outside.dual()) ||
                !lattice_equal(abd.min_outside, ab.max_inside.dual())) {
                os << "  duality identity failed at seed " << seed << "\n";
                return false;
            }
            ++done;
        } catch (const error&) {
            continue;  // skip draws that exhaust retries; the stream continues
        }
    }
    if (done < want) {
        os << "  only " << done << " duality instances completed\n";
        return false;
    }
    // tensor incompatibility: exhibit one instance
    bool found = false;
    auto ctx = Context::make(2, 2, prec);
    Isocrystal x2 = Isocrystal::standard_form(ctx, {{0, 1, 2}});
    Scalar t = Scalar::from_int_poly(*ctx, {0, 1});
    Matrix flag(*ctx, 2, 2);
    flag.at(0, 0) = Scalar::one(*ctx);
    flag.at(1, 0) = t;
    flag.at(1, 1) = Scalar::one(*ctx);
    Filtration f2(ctx, {1, -1}, flag);
    Isocrystal xt = Isocrystal::tensor(x2, x2);
    Filtration ft = tensor_filtration(f2, f2);
    for (unsigned seed2 = 0; seed2 < 24 && !found; ++seed2) {
        try {
            Rng rng(84000 + seed2);
            Lattice m1 = generate_lattice(*ctx, 2, rng);
            Lattice m2 = generate_lattice(*ctx, 2, rng);
            auto b1 = adapted_bounds(x2, f2, m1);
            auto b2 = adapted_bounds(x2, f2, m2);
            auto bt = adapted_bounds(xt, ft, tensor_lattice(m1, m2));
            if (!lattice_equal(bt.max_inside, tensor_lattice(b1.max_inside, b2.max_inside))) {
                found = true;
            }
        } catch (const error&) {
            continue;
        }
    }
    if (!found) {
        os << "  no tensor incompatibility instance found\n";
        return false;
    }
    os << "  " << base.fixpoints.size() << " fixpoints strongly divisible, " << done
       << " duality identities, tensor incompatibility exhibited\n";
    return true;
}

// ---------------------------------------------------------------- criterion 9
bool criterion9_phi_n(std::ostream& os, unsigned prec, bool quick) {
    const unsigned count = quick ? 15 : 100;
    unsigned monotone_checked = 0;
    for (unsigned i = 0; i < count; ++i) {
        unsigned d = 2 + (i % 3);
        PhiNModule m = generate_phi_n(2, d, prec, 91000 + i);
        if (!validate_phi_n(m)) {
            os << "  generated module " << i << " failed validation\n";
            return false;
        }
        auto dec = m.iso.slope_decomposition();
        if (!monodromy_slope_shift(m, dec)) {
            os << "  slope shift failed at module " << i << "\n";
            return false;
        }
        SlopeVector nu = m.iso.newton_vector();
        Rng rng(92000 + i);
        std::vector<long> mu = random_type_above(nu, rng);
        Filtration f = generate_filtration(m.iso, mu, rng);
        Verdict plain = check_weak_admissibility(m.iso, f);
        if (plain.kind == Verdict::Kind::Admissible) {
            Verdict withn = check_weak_admissibility_phi_n(m, f);
            if (withn.kind != Verdict::Kind::Admissible) {
                os << "  a fortiori failed at module " << i << "\n";
                return false;
            }
            ++monotone_checked;
        }
    }
    os << "  " << count << " modules validated, a fortiori checked on " << monotone_checked
       << "\n";
    return true;
}

// --------------------------------------------------------------- criterion 10
bool compare_streams(std::ostream& os, const char* what, const std::vector<std::string>& base,
                     const std::vector<std::string>& other) {
    if (base.size() != other.size()) {
        os << "  " << what << ": stream sizes differ\n";
        return false;
    }
    for (size_t i = 0; i < base.size(); ++i) {
        if (base[i] == other[i]) continue;
        if (base[i] == "INSUFFICIENT" || other[i] == "INSUFFICIENT") continue;  // exit code 2
        os << "  " << what << " instance " << i << ": '" << base[i] << "' vs '" << other[i]
           << "'\n";
        return false;
    }
    return true;
}

}  // namespace

bool run_acceptance(std::ostream& os, const AcceptanceOptions& opts) {
    bool all = true;
    const unsigned prec = opts.base_precision;
    auto report = [&](int num, const char* name, bool ok) {
        os << "criterion " << num << ": " << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        all = all && ok;
    };

    {
        std::ostringstream detail;
        bool ok = criterion1_dominance_polygon(detail, opts.quick);
        report(1, "dominance order agrees with the polygon comparison", ok);
        os << detail.str();
    }

    Outcomes c2 = run_c2(prec, opts.quick, &os);
    report(2, "newton vectors of standard forms, sigma-conjugation invariant", c2.pass);

    Outcomes c3 = run_c3(prec, opts.quick);
    {
        bool clean = c3.pass;
        for (const auto& s : c3.per_instance)
            if (s == "INSUFFICIENT") clean = false;
        report(3, "Mazur inequality on seeded random lattices", clean);
    }

    C45Data c45 = run_c45(prec, opts.quick);
    report(4, "admissible filtration constructor (and dominance failures)", c45.c4.pass);
    report(5, "lattice construction via the filtration transform fixpoint", c45.c5.pass);

    {
        std::ostringstream detail;
        bool ok = criterion6_counterexamples(detail, prec, opts.quick);
        report(6, "counterexample fidelity (restricted plane, one-dimensional types)", ok);
        os << detail.str();
    }

    {
        std::ostringstream detail;
        bool ok = criterion7_hn(detail, c45, prec, opts.quick);
        report(7, "HN vector: lambda = 0 iff admissible; hand instances", ok);
        os << detail.str();
    }

    {
        std::ostringstream detail;
        bool ok = criterion8_divisibility_duality(detail, c45, prec, opts.quick);
        report(8, "strong divisibility, duality identity, tensor incompatibility", ok);
        os << detail.str();
    }

    {
        std::ostringstream detail;
        bool ok = criterion9_phi_n(detail, prec, opts.quick);
        report(9, "(phi, N) inheritance and slope shift", ok);
        os << detail.str();
    }

    {
        bool ok = true;
        for (unsigned other_prec : {32u, 128u}) {
            Outcomes c2o = run_c2(other_prec, opts.quick, nullptr);
            ok = ok && compare_streams(os, "criterion-2 stream", c2.per_instance,
                                       c2o.per_instance);
            Outcomes c3o = run_c3(other_prec, opts.quick);
            ok = ok && compare_streams(os, "criterion-3 stream", c3.per_instance,
                                       c3o.per_instance);
            C45Data c45o = run_c45(other_prec, opts.quick);
            ok = ok && compare_streams(os, "criterion-4 stream", c45.c4.per_instance,
                                       c45o.c4.per_instance);
            ok = ok && compare_streams(os, "criterion-5 stream", c45.c5.per_instance,
                                       c45o.c5.per_instance);
        }
        report(10, "precision robustness at N = 32 and N = 128", ok);
    }

    os << (all ? "acceptance: ALL CRITERIA PASS" : "acceptance: FAILURES PRESENT") << "\n";
    return all;
}

}  // namespace isoc
