#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "sandpile/lp.hpp"
#include "test_util.hpp"

using namespace sandpile;
using namespace testutil;

namespace {

LinearProgram single_var(Sense sense, Rat lo, Rat hi) {
    LinearProgram lp;
    lp.sense = sense;
    lp.objective = {Rat(1)};
    lp.rows = RatMatrix(2, 1);
    lp.rows.at(0, 0) = 1;
    lp.rows.at(1, 0) = 1;
    lp.relations = {Relation::GreaterEq, Relation::LessEq};
    lp.rhs = {lo, hi};
    lp.lower = {std::nullopt};
    lp.upper = {std::nullopt};
    lp.integral = {false};
    return lp;
}

IntVec int_point(const RatVec &p, int n, int offset = 0) {
    IntVec x(n);
    for (int i = 0; i < n; ++i) {
        REQUIRE(rat_is_integer(p[offset + i]));
        x[i] = p[offset + i].get_num();
    }
    return x;
}

}  // namespace

TEST_CASE("simplex basics") {
    MipSolution pinned = simplex_solve(single_var(Sense::Maximize, Rat(0), Rat(0)));
    CHECK(pinned.status == SolveStatus::Optimal);
    CHECK(pinned.point[0] == 0);

    MipSolution infeas = simplex_solve(single_var(Sense::Maximize, Rat(1), Rat(0)));
    CHECK(infeas.status == SolveStatus::Infeasible);

    LinearProgram unb = single_var(Sense::Maximize, Rat(0), Rat(0));
    unb.rows = RatMatrix(1, 1);
    unb.rows.at(0, 0) = 1;
    unb.relations = {Relation::GreaterEq};
    unb.rhs = {Rat(0)};
    CHECK(simplex_solve(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("identity relaxation of the 5-cycle solves at an integral vertex") {
    SinkedMultigraph c5 = family("cycle", 5);
    MipSolution relax = simplex_solve(build_identity_model(c5));
    CHECK(relax.status == SolveStatus::Optimal);
    CHECK(relax.objective == 10);
    CHECK(int_point(relax.point, 4) == int_vec({2, 3, 3, 2}));

    MipSolution mip = branch_and_bound(build_identity_model(c5));
    CHECK(mip.node_count == 1);  // relaxation already integral
    CHECK(int_point(mip.point, 4) == int_vec({2, 3, 3, 2}));
}

TEST_CASE("recurrent model reproduces the 5-cycle table") {
    SinkedMultigraph c5 = family("cycle", 5);
    IntMatrix lq = c5.reduced_laplacian();
    struct Row {
        IntVec c, x, rec;
    };
    std::vector<Row> expected = {
        {IntVec(4, Int(0)), int_vec({2, 3, 3, 2}), int_vec({1, 1, 1, 1})},
        {unit_vec(4, 0), int_vec({1, 2, 2, 1}), int_vec({1, 1, 1, 0})},
        {unit_vec(4, 1), int_vec({1, 1, 1, 1}), int_vec({1, 1, 0, 1})},
        {unit_vec(4, 2), int_vec({1, 1, 1, 1}), int_vec({1, 0, 1, 1})},
        {unit_vec(4, 3), int_vec({1, 2, 2, 1}), int_vec({0, 1, 1, 1})},
    };
    for (const Row &row : expected) {
        MipSolution sol = branch_and_bound(build_recurrent_model(c5, row.c));
        REQUIRE(sol.status == SolveStatus::Optimal);
        IntVec x = int_point(sol.point, 4);
        CHECK(x == row.x);
        IntVec fired = row_times(x, lq);
        for (int i = 0; i < 4; ++i) CHECK(row.c[i] + fired[i] == row.rec[i]);
    }

    // an already-recurrent input has optimum x* = 0
    MipSolution fixed = branch_and_bound(build_recurrent_model(c5, int_vec({1, 1, 1, 1})));
    CHECK(int_point(fixed.point, 4) == IntVec(4, Int(0)));
}

TEST_CASE("stabilization model under both senses") {
    SinkedMultigraph c5 = family("cycle", 5);
    IntMatrix lq = c5.reduced_laplacian();
    IntVec c = int_vec({1, 2, 1, 0});

    MipSolution mn = branch_and_bound(build_stabilization_model(c5, c, Sense::Minimize));
    IntVec xmin = int_point(mn.point, 4);
    CHECK(xmin == int_vec({1, 2, 1, 0}));
    IntVec fired = row_times(xmin, lq);
    CHECK(IntVec{c[0] - fired[0], c[1] - fired[1], c[2] - fired[2], c[3] - fired[3]} ==
          int_vec({1, 0, 1, 1}));

    MipSolution stable_in =
        branch_and_bound(build_stabilization_model(c5, int_vec({1, 0, 1, 1}), Sense::Minimize));
    CHECK(int_point(stable_in.point, 4) == IntVec(4, Int(0)));

    MipSolution mx = branch_and_bound(build_stabilization_model(c5, c, Sense::Maximize));
    IntVec xmax = int_point(mx.point, 4);
    CHECK(xmax == int_vec({2, 3, 2, 1}));
    IntVec fired2 = row_times(xmax, lq);
    CHECK(IntVec{c[0] - fired2[0], c[1] - fired2[1], c[2] - fired2[2], c[3] - fired2[3]} ==
          int_vec({0, 0, 1, 0}));
}

TEST_CASE("order model") {
    SinkedMultigraph c5 = family("cycle", 5);
    MipSolution d5 = branch_and_bound(build_order_model(c5, unit_vec(4, 0)));
    REQUIRE(d5.status == SolveStatus::Optimal);
    CHECK(d5.point[0] == 5);

    MipSolution d1 = branch_and_bound(build_order_model(c5, int_vec({1, 1, 1, 1})));
    CHECK(d1.point[0] == 1);

    SinkedMultigraph tri = family("cycle", 3);
    MipSolution d3 = branch_and_bound(build_order_model(tri, int_vec({1, 0})));
    CHECK(d3.point[0] == 3);
}

TEST_CASE("solver determinism") {
    SinkedMultigraph g = cone(base_family("complete", 4));
    LinearProgram lp = build_recurrent_model(g, int_vec({1, 0, 2, 1}));
    MipSolution a = branch_and_bound(lp);
    MipSolution b = branch_and_bound(lp);
    CHECK(a.status == b.status);
    CHECK(a.point == b.point);
    CHECK(a.objective == b.objective);
    CHECK(a.node_count == b.node_count);
}

TEST_CASE("exactness of returned optima") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        SinkedMultigraph g = random_graph(rng, 5);
        IntVec c = random_config(rng, g.nonsink_count(), 4);
        LinearProgram lp = build_recurrent_model(g, c);
        MipSolution sol = branch_and_bound(lp);
        REQUIRE(sol.status == SolveStatus::Optimal);
        for (int i = 0; i < lp.num_rows(); ++i) {
            Rat lhs(0);
            for (int j = 0; j < lp.num_vars(); ++j) lhs += lp.rows.at(i, j) * sol.point[j];
            switch (lp.relations[i]) {
                case Relation::LessEq: CHECK(lhs <= lp.rhs[i]); break;
                case Relation::Equal: CHECK(lhs == lp.rhs[i]); break;
                case Relation::GreaterEq: CHECK(lhs >= lp.rhs[i]); break;
            }
        }
        for (int j = 0; j < lp.num_vars(); ++j)
            if (lp.integral[j]) CHECK(rat_is_integer(sol.point[j]));
    }
}

TEST_CASE("ILP routes agree with dynamics on random graphs") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 25; ++trial) {
        SinkedMultigraph g = random_graph_capped(rng, 6, 2, 60);
        const int n = g.nonsink_count();
        IntMatrix lq = g.reduced_laplacian();
        IntVec c = random_config(rng, n, 6);

        StabilizationResult dyn = stabilize(g, c);
        MipSolution stab = branch_and_bound(build_stabilization_model(g, c, Sense::Minimize));
        CHECK(int_point(stab.point, n) == dyn.odometer);

        MipSolution rec = branch_and_bound(build_recurrent_model(g, c));
        IntVec x = int_point(rec.point, n);
        IntVec fired = row_times(x, lq);
        IntVec rep(n);
        for (int i = 0; i < n; ++i) rep[i] = dyn.stable[i] + fired[i];
        CHECK(rep == recurrent_rep_dynamics(g, c));

        MipSolution ord = branch_and_bound(build_order_model(g, c));
        RatVec xr = solve_row(lq, to_rat(c));
        CHECK(ord.point[0] == Rat(lcm_denominators(xr)));
    }
}

TEST_CASE("optimal integral points are unique") {
    // Excluding x* coordinatewise at the optimal objective leaves nothing.
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 6; ++trial) {
        SinkedMultigraph g = random_graph_capped(rng, 5, 2, 40);
        const int n = g.nonsink_count();
        IntVec c = random_config(rng, n, 3);
        LinearProgram lp = build_recurrent_model(g, c);
        MipSolution sol = branch_and_bound(lp);
        REQUIRE(sol.status == SolveStatus::Optimal);

        for (int j = 0; j < n; ++j) {
            for (int dir = 0; dir < 2; ++dir) {
                LinearProgram cut = lp;
                // pin the objective to the optimum
                RatMatrix rows(cut.num_rows() + 1, n);
                for (int i = 0; i < cut.num_rows(); ++i)
                    for (int k = 0; k < n; ++k) rows.at(i, k) = cut.rows.at(i, k);
                for (int k = 0; k < n; ++k) rows.at(cut.num_rows(), k) = 1;
                cut.rows = rows;
                cut.relations.push_back(Relation::Equal);
                cut.rhs.push_back(sol.objective);
                if (dir == 0)
                    cut.upper[j] = sol.point[j] - 1;
                else
                    cut.lower[j] = sol.point[j] + 1;
                if (cut.lower[j] && cut.upper[j] && *cut.lower[j] > *cut.upper[j]) continue;
                CHECK(branch_and_bound(cut).status == SolveStatus::Infeasible);
            }
        }
    }
}

TEST_CASE("lp dump format") {
    LinearProgram lp = single_var(Sense::Maximize, make_rat(1, 2), Rat(3));
    lp.integral = {true};
    lp.lower = {Rat(0)};
    lp.upper = {Rat(4)};
    std::ostringstream os;
    lp.dump(os);
    std::string s = os.str();
    CHECK(s.find("sense max") != std::string::npos);
    CHECK(s.find("1/2") != std::string::npos);
    CHECK(s.find("int x0") != std::string::npos);
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram lp = single_var(Sense::Minimize, Rat(0), Rat(1));
    lp.integral = {true};  // no finite bounds
    CHECK_THROWS_AS(branch_and_bound(lp), MalformedLP);

    LinearProgram bad = lp;
    bad.relations.pop_back();
    CHECK_THROWS_AS(simplex_solve(bad), MalformedLP);
}
