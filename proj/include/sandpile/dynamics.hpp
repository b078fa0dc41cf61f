#ifndef SANDPILE_DYNAMICS_HPP
#define SANDPILE_DYNAMICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "sandpile/graph.hpp"
#include "sandpile/matrix.hpp"

namespace sandpile {

// The stable result and odometer are policy-independent (Abelian property);
// the policy only changes the toppling order in traces.
enum class TopplePolicy { InOrder, ReverseOrder, Fifo };

struct StabilizationResult {
    IntVec stable;
    IntVec odometer;              // topple count per non-sink vertex
    Int avalanche_size;           // sum of the odometer
    std::vector<std::string> trace;  // one line per toppling when requested
};

bool is_stable(const SinkedMultigraph &g, const IntVec &c);

StabilizationResult stabilize(const SinkedMultigraph &g, const IntVec &c,
                              TopplePolicy policy = TopplePolicy::InOrder, bool trace = false);

// c (+) d = s(c + d)
IntVec oplus(const SinkedMultigraph &g, const IntVec &c, const IntVec &d);

// Integral h >= 1 with h * Lq = L * (1,...,1); built from the rational
// row-solve of x * Lq = 1 scaled by the lcm of denominators.
std::pair<IntVec, Int> positive_preimage_h(const SinkedMultigraph &g);

// Unique recurrent configuration equivalent to c, via stabilizing
// c + t*h*Lq for the smallest t pushing every entry to at least deg.
IntVec recurrent_rep_dynamics(const SinkedMultigraph &g, const IntVec &c);

bool is_recurrent(const SinkedMultigraph &g, const IntVec &c);

}  // namespace sandpile

#endif
