#ifndef SANDPILE_DUALITY_HPP
#define SANDPILE_DUALITY_HPP

#include <string>

#include "sandpile/graph.hpp"
#include "sandpile/lp.hpp"
#include "sandpile/matrix.hpp"

namespace sandpile {

struct NotRegular : GraphError {
    using GraphError::GraphError;
};
struct DimensionMismatch : LpError {
    using LpError::LpError;
};

enum class CertVerdict { Certified, Gap, Infeasible };

/// Paired primal/dual feasible points; equal objectives certify optimality
/// of both (weak duality).
struct DualCertificate {
    RatVec primal_point;  // length n
    RatVec dual_point;    // length 2n, split-sign form as displayed
    Rat primal_objective;
    Rat dual_objective;
    CertVerdict verdict = CertVerdict::Infeasible;

    std::string to_json_string(int indent = -1) const;
};

// minimize (sigma_max | 0) * y  s.t.  [Lq Lq] y = 1,
// y_i >= 0 for i < n, y_i <= 0 for i >= n.
LinearProgram build_dual_of_identity_relaxation(const SinkedMultigraph &g);

DualCertificate check_weak_duality(const RatVec &primal_x, const RatVec &dual_y,
                                   const SinkedMultigraph &g);

struct ConeIdentityReport {
    int regularity = 0;  // r of the base graph
    IntVec identity_closed_form;  // r * 1
    IntVec identity_ilp;
    IntVec identity_dynamics;
    DualCertificate certificate;
    bool all_agree = false;
};

// Builds the cone with apex sink, certifies x = r*1 against y = (1,0), and
// cross-checks the ILP and dynamics identities.
ConeIdentityReport verify_cone_identity(const BaseGraph &base);

}  // namespace sandpile

#endif
