#ifndef SANDPILE_LP_HPP
#define SANDPILE_LP_HPP

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "sandpile/graph.hpp"
#include "sandpile/matrix.hpp"

namespace sandpile {

struct LpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedLP : LpError {
    using LpError::LpError;
};

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };

struct LinearProgram {
    Sense sense = Sense::Minimize;
    RatVec objective;
    RatMatrix rows;  // m x n constraint matrix
    std::vector<Relation> relations;
    RatVec rhs;
    std::vector<std::optional<Rat>> lower;  // per-variable bounds
    std::vector<std::optional<Rat>> upper;
    std::vector<bool> integral;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }
    void validate() const;  // throws MalformedLP on inconsistent dimensions

    // Plain-text dump for external cross-solver audits; rationals as "p/q".
    void dump(std::ostream &os) const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct MipSolution {
    SolveStatus status = SolveStatus::Infeasible;
    RatVec point;
    Rat objective;
    long node_count = 0;
};

// Exact optimum of the continuous relaxation (integrality ignored).
// Bland's rule; deterministic.
MipSolution simplex_solve(const LinearProgram &lp);

// Depth-first branch and bound: lowest-index fractional variable,
// floor branch first, pruning by exact bound comparison. Every integral
// variable must carry finite bounds.
MipSolution branch_and_bound(const LinearProgram &lp);

// minimize or maximize 1*x over 0 <= c - x*Lq <= sigma_max, x integral.
LinearProgram build_stabilization_model(const SinkedMultigraph &g, const IntVec &c, Sense sense);

// maximize 1*x over 0 <= c + x*Lq <= sigma_max, x integral
// (c is pre-stabilized when unstable).
LinearProgram build_recurrent_model(const SinkedMultigraph &g, const IntVec &c);

// Recurrent model with c = 0; x* * Lq is the group identity.
LinearProgram build_identity_model(const SinkedMultigraph &g);

// minimize d over x*Lq = d*c, 1 <= d <= |det Lq|, x integral.
// Variable 0 is d; variables 1..n are x.
LinearProgram build_order_model(const SinkedMultigraph &g, const IntVec &c);

}  // namespace sandpile

#endif
