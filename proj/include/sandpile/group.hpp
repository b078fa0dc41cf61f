#ifndef SANDPILE_GROUP_HPP
#define SANDPILE_GROUP_HPP

#include <vector>

#include "sandpile/graph.hpp"
#include "sandpile/matrix.hpp"

namespace sandpile {

struct CrossCheckMismatch : GraphError {
    using GraphError::GraphError;
};
struct OutOfRange : GraphError {
    using GraphError::GraphError;
};

struct GroupStructure {
    std::vector<Int> invariant_factors;  // nontrivial factors, each dividing the next
    Int group_order;                     // |det Lq|
};

struct GroupElement {
    IntVec recurrent;
    Int order;
};

// Group identity; the ILP and dynamics routes are both run and must agree.
IntVec identity(const SinkedMultigraph &g);

// Unique recurrent configuration equivalent to c (negative entries allowed;
// the vector is shifted into the nonnegative orthant first).
IntVec recurrent_representative(const SinkedMultigraph &g, const IntVec &c);

// Recurrent representatives and orders of the canonical classes [e_i].
std::vector<GroupElement> generators(const SinkedMultigraph &g);

// Order of [c]: lcm of denominators of the row-solve x * Lq = c.
Int order(const SinkedMultigraph &g, const IntVec &c);

GroupStructure group_structure(const SinkedMultigraph &g);

// E(c) = || Lq^{-1} c ||^2 with c as a column, exactly as printed; for
// directed graphs this convention differs from the row one.
Rat energy(const SinkedMultigraph &g, const IntVec &c);

// Minimum-energy representative: sigma_max - recurrent_rep(sigma_max - s(c)).
IntVec superstable_representative(const SinkedMultigraph &g, const IntVec &c);

bool is_superstable(const SinkedMultigraph &g, const IntVec &c);

}  // namespace sandpile

#endif
