// Dense linear programming in standard form: minimize c.x subject to
// A x = b, x >= 0. The solver returns the primal vertex, the objective,
// and the dual multipliers of the final basis, so complementary
// slackness holds between the reported primal and duals.

#pragma once

#include <vector>

#include "sitedft/errors.hpp"

namespace sitedft {

struct LinearProgram {
  std::vector<double> objective;                       // length n
  std::vector<std::vector<double>> constraint_matrix;  // m rows of length n
  std::vector<double> rhs;                             // length m

  int rows() const { return static_cast<int>(rhs.size()); }
  int cols() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> primal;   // length n, meaningful only when Optimal
  double objective_value = 0.0;
  std::vector<double> duals;    // length m, meaningful only when Optimal
};

// Throws InvalidConfiguration unless 1 <= m <= n and all entries are
// finite with consistent shapes.
void validate_lp(const LinearProgram& lp);

// Two-phase dense tableau simplex with Bland's anti-cycling rule.
// Infeasible and Unbounded are reported in the result status; a forced
// pivot below 1e-12 throws NumericalBreakdown.
LpSolution solve_lp(const LinearProgram& lp);

// The same pivoting rules in exact rational arithmetic, with every
// tolerance collapsed to an exact comparison. Inputs are converted
// exactly from their binary double values; results are rounded back.
// Used by tests to adjudicate degenerate ties.
LpSolution solve_lp_exact(const LinearProgram& lp);

// Brute-force ground truth: enumerates every basis, solves the square
// system, and keeps the best feasible vertex (first hit wins ties).
// Unboundedness is not detectable this way, so callers supply bounded
// programs. Guarded by n <= 24 and C(n, m) <= 5e6; throws
// ProblemTooLarge beyond either bound.
LpSolution verify_by_vertex_enumeration(const LinearProgram& lp);

}  // namespace sitedft
