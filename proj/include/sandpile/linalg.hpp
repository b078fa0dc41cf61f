#ifndef SANDPILE_LINALG_HPP
#define SANDPILE_LINALG_HPP

#include <stdexcept>

#include "sandpile/matrix.hpp"

namespace sandpile {

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSquare : LinalgError {
    NotSquare() : LinalgError("matrix is not square") {}
};
struct Singular : LinalgError {
    Singular() : LinalgError("matrix is singular") {}
};

/// U * A * V = D with D diagonal, d_1 | d_2 | ..., det(U), det(V) = +-1.
struct SnfResult {
    IntMatrix d;
    IntMatrix u;
    IntMatrix v;
};

// Exact determinant, fraction-free (Bareiss) elimination.
Int det(const IntMatrix &a);

// Exact inverse as a rational matrix; throws Singular.
RatMatrix inverse(const IntMatrix &a);

// Solves A * x = b (column convention); throws Singular.
RatVec solve_col(const IntMatrix &a, const RatVec &b);

// Solves x * A = b (row convention); throws Singular.
RatVec solve_row(const IntMatrix &a, const RatVec &b);

SnfResult smith_normal_form(const IntMatrix &a);

// Least positive L such that L*v is integral.
Int lcm_denominators(const RatVec &v);

}  // namespace sandpile

#endif
