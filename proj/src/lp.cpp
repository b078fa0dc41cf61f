#include "sandpile/lp.hpp"

#include <algorithm>

#include "sandpile/dynamics.hpp"
#include "sandpile/linalg.hpp"

namespace sandpile {

void LinearProgram::validate() const {
    const int n = num_vars();
    const int m = num_rows();
    if (rows.rows != m || (m > 0 && rows.cols != n))
        throw MalformedLP("constraint matrix dimensions inconsistent");
    if (static_cast<int>(relations.size()) != m) throw MalformedLP("relation count mismatch");
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
        throw MalformedLP("bound vector length mismatch");
    if (static_cast<int>(integral.size()) != n) throw MalformedLP("integrality flag length mismatch");
    for (int j = 0; j < n; ++j)
        if (lower[j] && upper[j] && *lower[j] > *upper[j])
            throw MalformedLP("empty variable bound interval");
}

void LinearProgram::dump(std::ostream &os) const {
    os << "sense " << (sense == Sense::Minimize ? "min" : "max") << "\n";
    os << "obj";
    for (const Rat &c : objective) os << " " << rat_to_string(c);
    os << "\nrows " << num_rows() << "\n";
    for (int i = 0; i < num_rows(); ++i) {
        for (int j = 0; j < num_vars(); ++j) os << (j ? " " : "") << rat_to_string(rows.at(i, j));
        os << (relations[i] == Relation::LessEq ? " <= "
                                                : relations[i] == Relation::Equal ? " = " : " >= ")
           << rat_to_string(rhs[i]) << "\n";
    }
    os << "bounds\n";
    for (int j = 0; j < num_vars(); ++j)
        os << "x" << j << " " << (lower[j] ? rat_to_string(*lower[j]) : std::string("-inf")) << " "
           << (upper[j] ? rat_to_string(*upper[j]) : std::string("+inf")) << "\n";
    os << "int";
    for (int j = 0; j < num_vars(); ++j)
        if (integral[j]) os << " x" << j;
    os << "\n";
}

namespace {

// Standard-form tableau simplex over exact rationals, Bland's rule.
class StandardSimplex {
public:
    // minimize c*s subject to rows, s >= 0
    StandardSimplex(std::vector<RatVec> rows, RatVec rhs, std::vector<Relation> rels, RatVec cost)
        : cost_(std::move(cost)) {
        const int m = static_cast<int>(rhs.size());
        nstruct_ = static_cast<int>(cost_.size());
        for (int i = 0; i < m; ++i) {
            if (rhs[i] < 0) {
                for (Rat &v : rows[i]) v = -v;
                rhs[i] = -rhs[i];
                rels[i] = rels[i] == Relation::LessEq ? Relation::GreaterEq
                          : rels[i] == Relation::GreaterEq ? Relation::LessEq
                                                           : Relation::Equal;
            }
        }
        int nslack = 0;
        for (Relation r : rels)
            if (r != Relation::Equal) ++nslack;
        nart_ = 0;
        for (Relation r : rels)
            if (r != Relation::LessEq) ++nart_;
        ncols_ = nstruct_ + nslack + nart_;
        tab_.assign(m, RatVec(ncols_ + 1, Rat(0)));
        basis_.assign(m, -1);
        int slack = nstruct_;
        int art = nstruct_ + nslack;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < nstruct_; ++j) tab_[i][j] = rows[i][j];
            tab_[i][ncols_] = rhs[i];
            if (rels[i] == Relation::LessEq) {
                tab_[i][slack] = 1;
                basis_[i] = slack++;
            } else if (rels[i] == Relation::GreaterEq) {
                tab_[i][slack] = -1;
                ++slack;
                tab_[i][art] = 1;
                basis_[i] = art++;
            } else {
                tab_[i][art] = 1;
                basis_[i] = art++;
            }
        }
        art_start_ = nstruct_ + nslack;
    }

    // Returns false when infeasible.
    bool phase1() {
        if (nart_ == 0) return true;
        RatVec cost(ncols_, Rat(0));
        for (int j = art_start_; j < ncols_; ++j) cost[j] = 1;
        run(cost, art_start_);
        Rat val(0);
        for (size_t i = 0; i < tab_.size(); ++i)
            if (basis_[i] >= art_start_) val += tab_[i][ncols_];
        if (val != 0) return false;
        // Drive remaining artificial basics out, dropping redundant rows.
        for (size_t i = 0; i < tab_.size();) {
            if (basis_[i] < art_start_) {
                ++i;
                continue;
            }
            int enter = -1;
            for (int j = 0; j < art_start_; ++j)
                if (tab_[i][j] != 0) {
                    enter = j;
                    break;
                }
            if (enter >= 0) {
                pivot(static_cast<int>(i), enter);
                ++i;
            } else {
                tab_.erase(tab_.begin() + static_cast<long>(i));
                basis_.erase(basis_.begin() + static_cast<long>(i));
            }
        }
        // Artificial columns are dead from here on.
        nart_usable_ = false;
        return true;
    }

    // Returns false when unbounded.
    bool phase2() {
        RatVec cost(ncols_, Rat(0));
        for (int j = 0; j < nstruct_; ++j) cost[j] = cost_[j];
        return run(cost, nart_usable_ ? ncols_ : art_start_);
    }

    RatVec structural_solution() const {
        RatVec x(nstruct_, Rat(0));
        for (size_t i = 0; i < tab_.size(); ++i)
            if (basis_[i] < nstruct_) x[basis_[i]] = tab_[i][ncols_];
        return x;
    }

private:
    std::vector<RatVec> tab_;
    std::vector<int> basis_;
    RatVec cost_;
    int nstruct_ = 0;
    int ncols_ = 0;
    int nart_ = 0;
    int art_start_ = 0;
    bool nart_usable_ = true;

    void pivot(int row, int col) {
        Rat p = tab_[row][col];
        for (Rat &v : tab_[row]) v /= p;
        for (size_t i = 0; i < tab_.size(); ++i) {
            if (static_cast<int>(i) == row || tab_[i][col] == 0) continue;
            Rat f = tab_[i][col];
            for (int j = 0; j <= ncols_; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        basis_[row] = col;
    }

    // Bland: entering = lowest index with negative reduced cost; leaving =
    // lowest basis index among ratio-test ties. Returns false on unbounded.
    bool run(const RatVec &cost, int col_limit) {
        const int m = static_cast<int>(tab_.size());
        RatVec red = cost;
        Rat shift(0);
        for (int i = 0; i < m; ++i) {
            if (cost[basis_[i]] == 0) continue;
            Rat f = cost[basis_[i]];
            for (int j = 0; j < ncols_; ++j) red[j] -= f * tab_[i][j];
            shift -= f * tab_[i][ncols_];
        }
        for (;;) {
            int enter = -1;
            for (int j = 0; j < col_limit; ++j)
                if (red[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < m; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rat ratio = tab_[i][ncols_] / tab_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            Rat f = red[enter];
            for (int j = 0; j < ncols_; ++j) red[j] -= f * tab_[leave][j];
        }
    }
};

// Bound-handling substitutions mapping original variables to nonnegative
// standard-form variables.
struct VarMap {
    enum class Kind { Shift, Negate, Split };
    Kind kind;
    int col;     // first standard column
    Rat offset;  // lower (Shift) or upper (Negate) bound
};

}  // namespace

MipSolution simplex_solve(const LinearProgram &lp) {
    lp.validate();
    const int n = lp.num_vars();
    const int m = lp.num_rows();

    std::vector<VarMap> vmap;
    int scol = 0;
    std::vector<std::pair<int, Rat>> upper_rows;  // (std col, range) for two-sided boxes
    for (int j = 0; j < n; ++j) {
        if (lp.lower[j]) {
            vmap.push_back({VarMap::Kind::Shift, scol, *lp.lower[j]});
            if (lp.upper[j]) upper_rows.emplace_back(scol, *lp.upper[j] - *lp.lower[j]);
            scol += 1;
        } else if (lp.upper[j]) {
            vmap.push_back({VarMap::Kind::Negate, scol, *lp.upper[j]});
            scol += 1;
        } else {
            vmap.push_back({VarMap::Kind::Split, scol, Rat(0)});
            scol += 2;
        }
    }

    const int total_rows = m + static_cast<int>(upper_rows.size());
    std::vector<RatVec> rows(total_rows, RatVec(scol, Rat(0)));
    RatVec rhs(total_rows, Rat(0));
    std::vector<Relation> rels(total_rows, Relation::LessEq);

    for (int i = 0; i < m; ++i) {
        rels[i] = lp.relations[i];
        rhs[i] = lp.rhs[i];
        for (int j = 0; j < n; ++j) {
            const Rat &a = lp.rows.at(i, j);
            if (a == 0) continue;
            const VarMap &vm = vmap[j];
            switch (vm.kind) {
                case VarMap::Kind::Shift:
                    rows[i][vm.col] += a;
                    rhs[i] -= a * vm.offset;
                    break;
                case VarMap::Kind::Negate:
                    rows[i][vm.col] -= a;
                    rhs[i] -= a * vm.offset;
                    break;
                case VarMap::Kind::Split:
                    rows[i][vm.col] += a;
                    rows[i][vm.col + 1] -= a;
                    break;
            }
        }
    }
    for (size_t k = 0; k < upper_rows.size(); ++k) {
        int i = m + static_cast<int>(k);
        rows[i][upper_rows[k].first] = 1;
        rhs[i] = upper_rows[k].second;
        rels[i] = Relation::LessEq;
    }

    RatVec cost(scol, Rat(0));
    for (int j = 0; j < n; ++j) {
        Rat c = lp.objective[j];
        if (lp.sense == Sense::Maximize) c = -c;
        const VarMap &vm = vmap[j];
        switch (vm.kind) {
            case VarMap::Kind::Shift:
                cost[vm.col] += c;
                break;
            case VarMap::Kind::Negate:
                cost[vm.col] -= c;
                break;
            case VarMap::Kind::Split:
                cost[vm.col] += c;
                cost[vm.col + 1] -= c;
                break;
        }
    }

    StandardSimplex solver(std::move(rows), std::move(rhs), std::move(rels), std::move(cost));
    MipSolution sol;
    sol.node_count = 1;
    if (!solver.phase1()) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    if (!solver.phase2()) {
        sol.status = SolveStatus::Unbounded;
        return sol;
    }
    RatVec s = solver.structural_solution();
    sol.status = SolveStatus::Optimal;
    sol.point.assign(n, Rat(0));
    for (int j = 0; j < n; ++j) {
        const VarMap &vm = vmap[j];
        switch (vm.kind) {
            case VarMap::Kind::Shift:
                sol.point[j] = vm.offset + s[vm.col];
                break;
            case VarMap::Kind::Negate:
                sol.point[j] = vm.offset - s[vm.col];
                break;
            case VarMap::Kind::Split:
                sol.point[j] = s[vm.col] - s[vm.col + 1];
                break;
        }
    }
    sol.objective = dot(lp.objective, sol.point);
    return sol;
}

namespace {

struct BnbState {
    bool have_best = false;
    MipSolution best;
    long nodes = 0;
    bool unbounded = false;
};

bool improves(Sense sense, const Rat &candidate, const Rat &incumbent) {
    return sense == Sense::Maximize ? candidate > incumbent : candidate < incumbent;
}

void bnb(LinearProgram &lp, BnbState &st) {
    MipSolution relax = simplex_solve(lp);
    st.nodes += 1;
    if (relax.status == SolveStatus::Infeasible) return;
    if (relax.status == SolveStatus::Unbounded) {
        st.unbounded = true;
        return;
    }
    if (st.have_best && !improves(lp.sense, relax.objective, st.best.objective)) return;

    int frac = -1;
    for (int j = 0; j < lp.num_vars(); ++j)
        if (lp.integral[j] && !rat_is_integer(relax.point[j])) {
            frac = j;
            break;
        }
    if (frac < 0) {
        st.best = relax;
        st.have_best = true;
        return;
    }

    Rat val = relax.point[frac];
    auto saved_lower = lp.lower[frac];
    auto saved_upper = lp.upper[frac];

    lp.upper[frac] = Rat(rat_floor(val));
    if (!lp.lower[frac] || *lp.lower[frac] <= *lp.upper[frac]) bnb(lp, st);
    lp.upper[frac] = saved_upper;

    lp.lower[frac] = Rat(rat_ceil(val));
    if (!lp.upper[frac] || *lp.lower[frac] <= *lp.upper[frac]) bnb(lp, st);
    lp.lower[frac] = saved_lower;
}

}  // namespace

MipSolution branch_and_bound(const LinearProgram &lp) {
    lp.validate();
    for (int j = 0; j < lp.num_vars(); ++j)
        if (lp.integral[j] && (!lp.lower[j] || !lp.upper[j]))
            throw MalformedLP("integral variable without finite bounds");
    LinearProgram work = lp;
    BnbState st;
    bnb(work, st);
    MipSolution out;
    out.node_count = st.nodes;
    if (st.unbounded && !st.have_best) {
        out.status = SolveStatus::Unbounded;
        return out;
    }
    if (!st.have_best) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    out.status = SolveStatus::Optimal;
    out.point = st.best.point;
    out.objective = st.best.objective;
    return out;
}

namespace {

// With Lq^{-1} entrywise nonnegative, a <= x*Lq <= b gives the valid box
// floor(a*Lq^{-1}) <= x <= ceil(b*Lq^{-1}).
void attach_box(LinearProgram &lp, const RatMatrix &inv, const RatVec &low, const RatVec &high) {
    const int n = inv.rows;
    for (int j = 0; j < n; ++j) {
        Rat lo(0), hi(0);
        for (int i = 0; i < n; ++i) {
            lo += low[i] * inv.at(i, j);
            hi += high[i] * inv.at(i, j);
        }
        lp.lower[j] = Rat(rat_floor(lo));
        lp.upper[j] = Rat(rat_ceil(hi));
    }
}

// Rows encoding low <= x*Lq <= high as 2n one-sided constraints.
LinearProgram band_model(const SinkedMultigraph &g, const RatVec &low, const RatVec &high,
                         Sense sense) {
    IntMatrix lq = g.reduced_laplacian();
    const int n = lq.rows;
    LinearProgram lp;
    lp.sense = sense;
    lp.objective.assign(n, Rat(1));
    lp.rows = RatMatrix(2 * n, n);
    lp.relations.assign(2 * n, Relation::LessEq);
    lp.rhs.assign(2 * n, Rat(0));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            lp.rows.at(j, i) = Rat(lq.at(i, j));          // (x*Lq)_j <= high_j
            lp.rows.at(n + j, i) = Rat(lq.at(i, j));      // (x*Lq)_j >= low_j
        }
        lp.rhs[j] = high[j];
        lp.relations[n + j] = Relation::GreaterEq;
        lp.rhs[n + j] = low[j];
    }
    lp.lower.assign(n, std::nullopt);
    lp.upper.assign(n, std::nullopt);
    lp.integral.assign(n, true);
    attach_box(lp, inverse(lq), low, high);
    return lp;
}

}  // namespace

LinearProgram build_stabilization_model(const SinkedMultigraph &g, const IntVec &c, Sense sense) {
    IntVec smax = g.sigma_max();
    const int n = static_cast<int>(smax.size());
    RatVec low(n), high(n);
    for (int j = 0; j < n; ++j) {
        low[j] = Rat(c[j] - smax[j]);  // c - x*Lq <= sigma_max
        high[j] = Rat(c[j]);           // c - x*Lq >= 0
    }
    LinearProgram lp = band_model(g, low, high, sense);
    if (sense == Sense::Minimize) {
        // The least-action characterization of the odometer is over
        // nonnegative firing vectors; without x >= 0 the minimum can drop
        // below the odometer (adding -1 to every entry keeps the band
        // feasible on some graphs while lowering the objective).
        for (int j = 0; j < n; ++j)
            if (*lp.lower[j] < 0) lp.lower[j] = Rat(0);
    }
    return lp;
}

LinearProgram build_recurrent_model(const SinkedMultigraph &g, const IntVec &c) {
    IntVec base = is_stable(g, c) ? c : stabilize(g, c).stable;
    IntVec smax = g.sigma_max();
    const int n = static_cast<int>(smax.size());
    RatVec low(n), high(n);
    for (int j = 0; j < n; ++j) {
        low[j] = Rat(-base[j]);
        high[j] = Rat(smax[j] - base[j]);
    }
    return band_model(g, low, high, Sense::Maximize);
}

LinearProgram build_identity_model(const SinkedMultigraph &g) {
    return build_recurrent_model(g, IntVec(g.nonsink_count(), Int(0)));
}

LinearProgram build_order_model(const SinkedMultigraph &g, const IntVec &c) {
    IntMatrix lq = g.reduced_laplacian();
    const int n = lq.rows;
    Int dmax = abs(det(lq));  // the element order divides the group order

    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.assign(n + 1, Rat(0));
    lp.objective[0] = 1;  // variable 0 is d
    lp.rows = RatMatrix(n, n + 1);
    lp.relations.assign(n, Relation::Equal);
    lp.rhs.assign(n, Rat(0));
    for (int j = 0; j < n; ++j) {
        lp.rows.at(j, 0) = Rat(-c[j]);  // x*Lq - d*c = 0
        for (int i = 0; i < n; ++i) lp.rows.at(j, i + 1) = Rat(lq.at(i, j));
    }
    lp.lower.assign(n + 1, std::nullopt);
    lp.upper.assign(n + 1, std::nullopt);
    lp.integral.assign(n + 1, true);
    lp.lower[0] = Rat(1);
    lp.upper[0] = Rat(dmax);

    // |x| <= dmax * ceil(|c * Lq^{-1}|) entrywise, since x = d * c * Lq^{-1}.
    RatVec xrat = solve_row(lq, to_rat(c));
    for (int i = 0; i < n; ++i) {
        Rat mag = xrat[i] < 0 ? Rat(-xrat[i]) : xrat[i];
        Int m = rat_ceil(mag) * dmax;
        lp.lower[i + 1] = Rat(-m);
        lp.upper[i + 1] = Rat(m);
    }
    return lp;
}

}  // namespace sandpile
