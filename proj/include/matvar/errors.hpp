#pragma once

#include <stdexcept>
#include <string>

namespace matvar {

// Scalar field of the matrix entries: real symmetric vs hermitian.
enum class Field { real, complex };

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Convergence condition of a gamma/beta integral is violated:
// alpha > (p-1)/2 in the real case, alpha > p-1 in the complex case.
struct GammaDomainError : Error {
    double required_bound;
    double actual;
    Field field;

    GammaDomainError(double bound, double value, Field f)
        : Error("gamma argument " + std::to_string(value) + " must exceed " +
                std::to_string(bound) + " (" + matvar::to_string(f) + " case)"),
          required_bound(bound),
          actual(value),
          field(f) {}
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

// Structurally malformed input: wrong dimensions, asymmetry beyond tolerance,
// non-real diagonal of a hermitian matrix.
struct InvalidMatrix : Error {
    using Error::Error;
};

// A density was evaluated outside its support (e.g. type-1 beta needs O < X < I).
struct DomainViolation : Error {
    using Error::Error;
};

struct InvalidSchedule : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : Error {
    using Error::Error;
};

// Importance-sampling effective sample size collapsed; the proposal is a bad
// match for the requested parameters.
struct DegenerateWeights : Error {
    using Error::Error;
};

}  // namespace matvar
