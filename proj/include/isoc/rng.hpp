#pragma once

#include <cstdint>
#include <random>

namespace isoc {

// Deterministic seeded RNG.  mt19937_64 has a standard-specified sequence, and
// we draw bounded values by rejection so results are identical on every
// platform (std::uniform_int_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        for (;;) {
            std::uint64_t x = eng_();
            if (x < limit) return x % bound;
        }
    }

    // Uniform in [lo, hi] inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (eng_() & 1u) != 0; }

    // Independent child stream; used for per-trial seeds.
    Rng fork(std::uint64_t salt) {
        return Rng(eng_() ^ (salt * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace isoc
