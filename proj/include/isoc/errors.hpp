#pragma once

#include <stdexcept>
#include <string>

namespace isoc {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A discrete decision (pivot choice, zero test, polygon vertex) could not be
// certified at the working precision.  Callers may rebuild the context at a
// larger N and retry; all theorem-level outputs are discrete and stabilize.
struct insufficient_precision : error {
    explicit insufficient_precision(const std::string& what)
        : error("insufficient precision: " + what) {}
};

// Division by ExactZero or by a scalar whose valuation is only bounded below.
struct division_by_uncertain : error {
    division_by_uncertain() : error("division by zero or uncertain scalar") {}
};

struct length_mismatch : error {
    length_mismatch() : error("slope vectors have different lengths") {}
};

// Requested dominance mu >= nu does not hold.
struct dominance_fails : error {
    dominance_fails() : error("dominance mu >= nu fails") {}
};

// The eigen-solve behind the slope decomposition found too few certified
// eigenvectors at this level and precision.
struct not_diagonalizable : error {
    explicit not_diagonalizable(const std::string& what)
        : error("slope decomposition failed: " + what) {}
};

struct retries_exhausted : error {
    explicit retries_exhausted(const std::string& what)
        : error("retries exhausted: " + what) {}
};

struct construction_retry_exhausted : error {
    explicit construction_retry_exhausted(const std::string& what)
        : error("lattice construction retries exhausted: " + what) {}
};

struct no_convergence : error {
    long iterations;
    long drift;
    no_convergence(long iters, long drift_)
        : error("lattice iteration did not converge after " +
                std::to_string(iters) + " steps (drift " +
                std::to_string(drift_) + ")"),
          iterations(iters), drift(drift_) {}
};

struct not_strongly_divisible : error {
    not_strongly_divisible() : error("lattice is not strongly divisible for this filtration") {}
};

// NPhi = q PhiN fails or the monodromy is not nilpotent.
struct relation_fails : error {
    explicit relation_fails(const std::string& what)
        : error("monodromy relation fails: " + what) {}
};

// |mu| != |nu| where the operation assumes equality.
struct condition_i_fails : error {
    long t_hodge;
    long t_newton;
    condition_i_fails(long th, long tn)
        : error("t_H = " + std::to_string(th) + " differs from t_N = " + std::to_string(tn)),
          t_hodge(th), t_newton(tn) {}
};

// Malformed input files, schema violations, incompatible dimensions.
struct input_error : error {
    using error::error;
};

}  // namespace isoc
