#include "sandpile/group.hpp"

#include "sandpile/dynamics.hpp"
#include "sandpile/linalg.hpp"
#include "sandpile/lp.hpp"

namespace sandpile {

namespace {

IntVec point_to_int(const RatVec &p, int n, int offset = 0) {
    IntVec x(n);
    for (int i = 0; i < n; ++i) x[i] = p[offset + i].get_num();
    return x;
}

}  // namespace

IntVec identity(const SinkedMultigraph &g) {
    const int n = g.nonsink_count();
    MipSolution sol = branch_and_bound(build_identity_model(g));
    if (sol.status != SolveStatus::Optimal) throw CrossCheckMismatch("identity ILP did not solve");
    IntVec via_ilp = row_times(point_to_int(sol.point, n), g.reduced_laplacian());
    IntVec via_dynamics = recurrent_rep_dynamics(g, IntVec(n, Int(0)));
    if (via_ilp != via_dynamics)
        throw CrossCheckMismatch("ILP and dynamics identities disagree");
    return via_ilp;
}

IntVec recurrent_representative(const SinkedMultigraph &g, const IntVec &c) {
    IntMatrix lq = g.reduced_laplacian();
    const int n = lq.rows;
    auto [h, level] = positive_preimage_h(g);
    IntVec shift = row_times(h, lq);

    // Shift negative entries into N^V; the shift stays inside the class.
    IntVec work = c;
    Int t(0);
    for (int i = 0; i < n; ++i) {
        if (work[i] >= 0) continue;
        Int need = -work[i];
        Int ti;
        mpz_cdiv_q(ti.get_mpz_t(), need.get_mpz_t(), level.get_mpz_t());
        if (ti > t) t = ti;
    }
    if (t > 0)
        for (int i = 0; i < n; ++i) work[i] += t * shift[i];

    IntVec base = stabilize(g, work).stable;
    MipSolution sol = branch_and_bound(build_recurrent_model(g, base));
    if (sol.status != SolveStatus::Optimal)
        throw CrossCheckMismatch("recurrent ILP did not solve");
    IntVec xl = row_times(point_to_int(sol.point, n), lq);
    IntVec rep(n);
    for (int i = 0; i < n; ++i) rep[i] = base[i] + xl[i];

    IntVec via_dynamics = recurrent_rep_dynamics(g, base);
    if (rep != via_dynamics) throw CrossCheckMismatch("ILP and dynamics representatives disagree");
    return rep;
}

Int order(const SinkedMultigraph &g, const IntVec &c) {
    RatVec x = solve_row(g.reduced_laplacian(), to_rat(c));
    return lcm_denominators(x);
}

std::vector<GroupElement> generators(const SinkedMultigraph &g) {
    const int n = g.nonsink_count();
    std::vector<GroupElement> gens;
    gens.reserve(n);
    for (int i = 0; i < n; ++i) {
        IntVec e(n, Int(0));
        e[i] = 1;
        gens.push_back({recurrent_representative(g, e), order(g, e)});
    }
    return gens;
}

GroupStructure group_structure(const SinkedMultigraph &g) {
    IntMatrix lq = g.reduced_laplacian();
    SnfResult snf = smith_normal_form(lq);
    GroupStructure s;
    s.group_order = abs(det(lq));
    for (int i = 0; i < snf.d.rows; ++i)
        if (snf.d.at(i, i) > 1) s.invariant_factors.push_back(snf.d.at(i, i));
    return s;
}

Rat energy(const SinkedMultigraph &g, const IntVec &c) {
    RatVec y = solve_col(g.reduced_laplacian(), to_rat(c));
    Rat e(0);
    for (const Rat &v : y) e += v * v;
    return e;
}

IntVec superstable_representative(const SinkedMultigraph &g, const IntVec &c) {
    IntVec smax = g.sigma_max();
    IntVec s = stabilize(g, c).stable;
    const int n = static_cast<int>(s.size());
    IntVec flipped(n);
    for (int i = 0; i < n; ++i) flipped[i] = smax[i] - s[i];
    IntVec rec = recurrent_representative(g, flipped);
    IntVec out(n);
    for (int i = 0; i < n; ++i) out[i] = smax[i] - rec[i];
    return out;
}

bool is_superstable(const SinkedMultigraph &g, const IntVec &c) {
    IntVec smax = g.sigma_max();
    const int n = static_cast<int>(c.size());
    IntVec flipped(n);
    for (int i = 0; i < n; ++i) {
        if (c[i] < 0 || c[i] > smax[i])
            throw OutOfRange("configuration outside [0, sigma_max]");
        flipped[i] = smax[i] - c[i];
    }
    return is_recurrent(g, flipped);
}

}  // namespace sandpile
