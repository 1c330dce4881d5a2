#pragma once

#include <optional>

#include "stabeq/common.hpp"

namespace stabeq {

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

const char* lp_status_name(LpStatus s);

struct SparseRow {
    std::vector<std::pair<int, double>> a;  // (variable, coefficient)
    char sense = '<';                       // '<' (a'x <= rhs) or '=' (a'x == rhs)
    double rhs = 0.0;
};

// min c'x  s.t. rows,  lo <= x <= up  (+-kInf for unbounded sides)
struct LinearProgram {
    int num_vars = 0;
    VecD c, lo, up;
    std::vector<SparseRow> rows;
    std::vector<std::string> var_names;  // optional, used by lp_dump

    int add_var(double cost, double lb, double ub, const std::string& name = "");
    void add_row(SparseRow row);
};

struct LpSolution {
    LpStatus status = LpStatus::numerical_failure;
    VecD x;
    double objective = 0.0;
    // Row multipliers with the convention L(x) = c'x + sum_r y[r] (a_r'x - rhs_r)
    // stationary at the optimum; y[r] >= 0 on '<' rows, free on '=' rows, and
    // y[r] = 0 whenever row r is slack (complementary slackness).
    VecD y;
    int iterations = 0;
    // true when the final basis is primal nondegenerate (every basic variable
    // strictly inside its bounds), which makes y unique; when false the
    // multipliers may be one of several and envelope derivatives can fail
    bool strict_complementarity = true;
};

// Primal feasibility of reported solutions, in the units of each original row.
constexpr double kLpFeasTol = 1e-7;

LpSolution lp_solve(const LinearProgram& lp);

// Phase-1 feasibility test; fills *point with a feasible point when found.
bool lp_feasible(const LinearProgram& lp, VecD* point = nullptr);

// Plain-text dump (format documented in README): one objective line, one
// constraint per line, then bounds.
std::string lp_dump(const LinearProgram& lp);

}  // namespace stabeq
