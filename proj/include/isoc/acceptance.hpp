#pragma once

#include <iosfwd>

namespace isoc {

struct AcceptanceOptions {
    bool quick = false;  // reduced counts for development smoke runs
    unsigned base_precision = 64;
};

// Runs the full acceptance battery, printing one pass/fail line per
// criterion; returns true when every criterion passes.
bool run_acceptance(std::ostream& os, const AcceptanceOptions& opts = {});

}  // namespace isoc
