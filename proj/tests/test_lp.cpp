#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stabeq/lp.hpp"

using namespace stabeq;

namespace {

LinearProgram knapsack_lp() {
    // max 3x + 2y st x + y <= 4, x <= 3, y <= 3  -> min -3x - 2y, opt at (3,1)
    LinearProgram lp;
    lp.add_var(-3.0, 0.0, 3.0, "x");
    lp.add_var(-2.0, 0.0, 3.0, "y");
    lp.add_row({{{0, 1.0}, {1, 1.0}}, '<', 4.0});
    return lp;
}

// max-flow style degenerate-ish problem with equalities
LinearProgram transport_lp() {
    // two sources (supply 5, 5), two sinks (demand 4, 6), costs
    // c = [[1, 3], [2, 1]]; optimum ships 4 from s0->d0, 1 s0->d1? no:
    // s0->d0:4 (c1), s1->d1:5 (c1), s0->d1:1 (c3) -> cost 4+5+3 = 12
    LinearProgram lp;
    lp.add_var(1.0, 0.0, kInf, "x00");
    lp.add_var(3.0, 0.0, kInf, "x01");
    lp.add_var(2.0, 0.0, kInf, "x10");
    lp.add_var(1.0, 0.0, kInf, "x11");
    lp.add_row({{{0, 1.0}, {1, 1.0}}, '=', 5.0});
    lp.add_row({{{2, 1.0}, {3, 1.0}}, '=', 5.0});
    lp.add_row({{{0, 1.0}, {2, 1.0}}, '=', 4.0});
    lp.add_row({{{1, 1.0}, {3, 1.0}}, '=', 6.0});
    return lp;
}

void check_kkt(const LinearProgram& lp, const LpSolution& sol, double tol = 1e-7) {
    REQUIRE(sol.status == LpStatus::optimal);
    REQUIRE((int)sol.x.size() == lp.num_vars);
    REQUIRE(sol.y.size() == lp.rows.size());
    // primal feasibility
    for (int j = 0; j < lp.num_vars; ++j) {
        CHECK(sol.x[j] >= lp.lo[j] - tol);
        CHECK(sol.x[j] <= lp.up[j] + tol);
    }
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        double ax = 0;
        for (auto& [j, v] : lp.rows[r].a) ax += v * sol.x[j];
        if (lp.rows[r].sense == '=')
            CHECK(std::abs(ax - lp.rows[r].rhs) < tol);
        else
            CHECK(ax <= lp.rows[r].rhs + tol);
        // dual sign and complementary slackness on inequalities
        if (lp.rows[r].sense == '<') {
            CHECK(sol.y[r] >= -1e-9);
            CHECK(sol.y[r] * (lp.rows[r].rhs - ax) < 1e-5);
        }
    }
    // stationarity: reduced cost d_j = c_j + sum_r y_r a_rj must vanish for
    // interior x_j, be >= 0 at lower bounds, <= 0 at upper bounds (min problem)
    for (int j = 0; j < lp.num_vars; ++j) {
        double d = lp.c[j];
        for (size_t r = 0; r < lp.rows.size(); ++r)
            for (auto& [jj, v] : lp.rows[r].a)
                if (jj == j) d += sol.y[r] * v;
        bool at_lo = sol.x[j] < lp.lo[j] + 1e-7;
        bool at_up = sol.x[j] > lp.up[j] - 1e-7;
        if (at_lo && !at_up)
            CHECK(d >= -1e-6);
        else if (at_up && !at_lo)
            CHECK(d <= 1e-6);
        else if (!at_lo && !at_up)
            CHECK(std::abs(d) < 1e-6);
    }
}

}  // namespace

TEST_CASE("bounded knapsack optimum with duals") {
    LinearProgram lp = knapsack_lp();
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-11.0).epsilon(1e-9));
    CHECK(sol.x[0] == doctest::Approx(3.0));
    CHECK(sol.x[1] == doctest::Approx(1.0));
    // the joint constraint is tight and worth 2 per unit (y = -2 in the
    // stationarity convention c + y*a = 0 => -2 + y = 0 on the free margin)
    CHECK(sol.y[0] == doctest::Approx(2.0).epsilon(1e-9));
    check_kkt(lp, sol);
}

TEST_CASE("transport equalities") {
    LinearProgram lp = transport_lp();
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(12.0).epsilon(1e-9));
    check_kkt(lp, sol);
}

TEST_CASE("infeasible and unbounded detection") {
    LinearProgram bad;
    bad.add_var(0.0, 0.0, 1.0);
    bad.add_row({{{0, 1.0}}, '<', -0.5});
    CHECK(lp_solve(bad).status == LpStatus::infeasible);
    CHECK_FALSE(lp_feasible(bad));

    LinearProgram contradictory;
    contradictory.add_var(0.0, 0.0, kInf);
    contradictory.add_var(0.0, 0.0, kInf);
    contradictory.add_row({{{0, 1.0}, {1, 1.0}}, '=', 1.0});
    contradictory.add_row({{{0, 1.0}, {1, 1.0}}, '=', 2.0});
    CHECK(lp_solve(contradictory).status == LpStatus::infeasible);

    LinearProgram unbounded;
    unbounded.add_var(-1.0, 0.0, kInf);
    unbounded.add_row({{{0, -1.0}}, '<', 0.0});
    CHECK(lp_solve(unbounded).status == LpStatus::unbounded);

    LinearProgram free_unbounded;  // free variable, no rows
    free_unbounded.add_var(1.0, -kInf, kInf);
    CHECK(lp_solve(free_unbounded).status == LpStatus::unbounded);
}

TEST_CASE("free variables take either sign") {
    LinearProgram lp;
    lp.add_var(1.0, -kInf, kInf, "z");
    lp.add_row({{{0, 1.0}}, '<', 5.0});
    lp.add_row({{{0, -1.0}}, '<', 3.0});  // z >= -3
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(-3.0));
    check_kkt(lp, sol);

    lp.c[0] = -1.0;
    sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(5.0));
}

TEST_CASE("negative lower bounds and equality mix") {
    // min x + 2y st x + y = 1, x - y <= 0.25, -2 <= x <= 2, 0 <= y <= 2
    // substitute y = 1 - x: objective 2 - x, minimized at largest x;
    // x - (1-x) <= 0.25 -> x <= 0.625
    LinearProgram lp;
    lp.add_var(1.0, -2.0, 2.0, "x");
    lp.add_var(2.0, 0.0, 2.0, "y");
    lp.add_row({{{0, 1.0}, {1, 1.0}}, '=', 1.0});
    lp.add_row({{{0, 1.0}, {1, -1.0}}, '<', 0.25});
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(0.625));
    CHECK(sol.x[1] == doctest::Approx(0.375));
    check_kkt(lp, sol);
}

TEST_CASE("duplicate variable coefficients in one row accumulate") {
    LinearProgram lp;
    lp.add_var(-1.0, 0.0, 10.0);
    lp.add_row({{{0, 0.5}, {0, 0.5}}, '<', 3.0});  // effectively x <= 3
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(3.0));
}

TEST_CASE("badly scaled rows still solve") {
    LinearProgram lp;
    lp.add_var(-1.0, 0.0, kInf, "x");
    lp.add_var(-1.0, 0.0, kInf, "y");
    lp.add_row({{{0, 1e-6}, {1, 1e-6}}, '<', 4e-6});
    lp.add_row({{{0, 1e5}}, '<', 3e5});
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-4.0).epsilon(1e-7));
    check_kkt(lp, sol);
}

TEST_CASE("random dense LPs satisfy KKT") {
    Rng rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + int(rng.uniform() * 5);
        int m = 1 + int(rng.uniform() * 6);
        LinearProgram lp;
        for (int j = 0; j < n; ++j) {
            double lo = rng.uniform() < 0.3 ? -1.0 - rng.uniform() : 0.0;
            double up = rng.uniform() < 0.3 ? kInf : lo + 1.0 + 2.0 * rng.uniform();
            lp.add_var(rng.uniform() * 2 - 1, lo, up);
        }
        for (int r = 0; r < m; ++r) {
            SparseRow row;
            for (int j = 0; j < n; ++j)
                if (rng.uniform() < 0.7) row.a.push_back({j, rng.uniform() * 4 - 2});
            row.sense = rng.uniform() < 0.35 ? '=' : '<';
            // choose rhs so that the zero-clamped midpoint is often feasible
            row.rhs = rng.uniform() * 4 - (row.sense == '<' ? 0.5 : 2.0);
            if (row.a.empty()) continue;
            lp.rows.push_back(std::move(row));
        }
        LpSolution sol = lp_solve(lp);
        REQUIRE(sol.status != LpStatus::numerical_failure);
        if (sol.status == LpStatus::optimal) {
            ++solved;
            check_kkt(lp, sol);
        }
    }
    CHECK(solved > 50);  // a decent share of random instances is solvable
}

TEST_CASE("random LPs with known feasible point never report infeasible") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + int(rng.uniform() * 4);
        int m = 1 + int(rng.uniform() * 5);
        VecD x0(n);
        LinearProgram lp;
        for (int j = 0; j < n; ++j) {
            x0[j] = rng.uniform() * 2 - 1;
            lp.add_var(rng.uniform() * 2 - 1, -2.0, 2.0);
        }
        for (int r = 0; r < m; ++r) {
            SparseRow row;
            double ax = 0;
            for (int j = 0; j < n; ++j)
                if (rng.uniform() < 0.8) {
                    double v = rng.uniform() * 4 - 2;
                    row.a.push_back({j, v});
                    ax += v * x0[j];
                }
            if (row.a.empty()) continue;
            bool eq = rng.uniform() < 0.4;
            row.sense = eq ? '=' : '<';
            row.rhs = eq ? ax : ax + rng.uniform();
            lp.rows.push_back(std::move(row));
        }
        LpSolution sol = lp_solve(lp);
        REQUIRE(sol.status == LpStatus::optimal);  // bounded box + feasible
        check_kkt(lp, sol);
        VecD pt;
        CHECK(lp_feasible(lp, &pt));
        REQUIRE((int)pt.size() == n);
        for (size_t r = 0; r < lp.rows.size(); ++r) {
            double ax = 0;
            for (auto& [j, v] : lp.rows[r].a) ax += v * pt[j];
            if (lp.rows[r].sense == '=')
                CHECK(std::abs(ax - lp.rows[r].rhs) < 1e-6);
            else
                CHECK(ax < lp.rows[r].rhs + 1e-6);
        }
    }
}

TEST_CASE("objective value matches optimal duals on a degenerate LP") {
    // degenerate: two identical constraints
    LinearProgram lp;
    lp.add_var(-1.0, 0.0, kInf, "x");
    lp.add_row({{{0, 1.0}}, '<', 2.0});
    lp.add_row({{{0, 1.0}}, '<', 2.0});
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(2.0));
    // duals split arbitrarily but must sum to 1 for stationarity
    CHECK(sol.y[0] + sol.y[1] == doctest::Approx(1.0).epsilon(1e-9));
    // one of the two tight rows necessarily carries a zero multiplier
    CHECK_FALSE(sol.strict_complementarity);
}

TEST_CASE("lp_dump is readable and complete") {
    LinearProgram lp = knapsack_lp();
    std::string dump = lp_dump(lp);
    CHECK(dump.find("min:") != std::string::npos);
    CHECK(dump.find("x") != std::string::npos);
    CHECK(dump.find("<=") != std::string::npos);
    CHECK(dump.find("4") != std::string::npos);
}

TEST_CASE("add_row validates variable indices") {
    LinearProgram lp;
    lp.add_var(0.0, 0.0, 1.0);
    CHECK_THROWS(lp.add_row({{{3, 1.0}}, '<', 0.0}));
    CHECK_THROWS(lp.add_row({{{0, 1.0}}, '>', 0.0}));
}
