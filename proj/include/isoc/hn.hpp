#pragma once

#include <map>

#include "isoc/filtration.hpp"

namespace isoc {

// Harder-Narasimhan vector of a filtered isocrystal with |lambda| = 0; the
// flag realizes it by subobjects with strictly decreasing slopes.  Exact when
// every stage's family is provably complete, heuristic otherwise.
struct HNVector {
    SlopeVector lambda;
    std::vector<Matrix> flag;  // nested subobject bases in the ambient coordinates
    bool exact = false;
};

// Greedy maximal-destabilizing recursion: pick the family member maximizing
// (t_H' - t_N') / dim (ties: largest dimension, then canonical order),
// quotient out, repeat on the image filtration.  Requires t_H = t_N.
HNVector hn_vector(const Isocrystal& x, const Filtration& f, const CheckOptions& opts = {});

struct StratumReport {
    struct Entry {
        SlopeVector lambda;
        unsigned count = 0;
        std::optional<Filtration> witness;
        bool exact = false;
    };
    std::vector<Entry> strata;  // by decreasing frequency
    unsigned trials = 0;
};

// Monte-Carlo exploration of the HN stratification: samples random
// filtrations of type mu and bins them by hn_vector.  Observed strata only;
// emptiness of missing strata is never claimed.
StratumReport stratum_sample(const Isocrystal& x, const std::vector<long>& mu, unsigned trials,
                             std::uint64_t seed, const CheckOptions& opts = {});

}  // namespace isoc
