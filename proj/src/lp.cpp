#include "sitedft/lp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sitedft/detail/simplex.hpp"

namespace sitedft {

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::vector<double> flatten(const LinearProgram& lp) {
  const int m = lp.rows();
  const int n = lp.cols();
  std::vector<double> a(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a[i * n + j] = lp.constraint_matrix[i][j];
  }
  return a;
}

LpStatus to_status(detail::RawStatus status) {
  switch (status) {
    case detail::RawStatus::Optimal:
      return LpStatus::Optimal;
    case detail::RawStatus::Infeasible:
      return LpStatus::Infeasible;
    default:
      return LpStatus::Unbounded;
  }
}

// Solves the square system B x = r in place by Gaussian elimination
// with partial pivoting. Returns false when the smallest usable pivot
// falls below the threshold.
bool solve_square(std::vector<double>& b_matrix, std::vector<double>& r,
                  int m, double pivot_threshold) {
  for (int col = 0; col < m; ++col) {
    int pivot_row = col;
    double best = std::abs(b_matrix[col * m + col]);
    for (int i = col + 1; i < m; ++i) {
      const double candidate = std::abs(b_matrix[i * m + col]);
      if (candidate > best) {
        best = candidate;
        pivot_row = i;
      }
    }
    if (best < pivot_threshold) return false;
    if (pivot_row != col) {
      for (int j = col; j < m; ++j) {
        std::swap(b_matrix[col * m + j], b_matrix[pivot_row * m + j]);
      }
      std::swap(r[col], r[pivot_row]);
    }
    const double pivot = b_matrix[col * m + col];
    for (int i = col + 1; i < m; ++i) {
      const double factor = b_matrix[i * m + col] / pivot;
      if (factor == 0.0) continue;
      for (int j = col; j < m; ++j) {
        b_matrix[i * m + j] -= factor * b_matrix[col * m + j];
      }
      r[i] -= factor * r[col];
    }
  }
  for (int col = m - 1; col >= 0; --col) {
    double value = r[col];
    for (int j = col + 1; j < m; ++j) {
      value -= b_matrix[col * m + j] * r[j];
    }
    r[col] = value / b_matrix[col * m + col];
  }
  return true;
}

double binomial_bound(int n, int m) {
  double result = 1.0;
  for (int i = 0; i < m; ++i) {
    result *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (result > 1e18) return result;
  }
  return result;
}

}  // namespace

void validate_lp(const LinearProgram& lp) {
  const int m = lp.rows();
  const int n = lp.cols();
  if (m < 1 || n < 1 || m > n) {
    throw InvalidConfiguration("linear program needs 1 <= rows <= columns, got " +
                               std::to_string(m) + " rows and " +
                               std::to_string(n) + " columns");
  }
  if (static_cast<int>(lp.constraint_matrix.size()) != m) {
    throw InvalidConfiguration("constraint matrix row count does not match rhs");
  }
  for (const auto& row : lp.constraint_matrix) {
    if (static_cast<int>(row.size()) != n) {
      throw InvalidConfiguration("constraint matrix row length does not match objective");
    }
    for (double entry : row) {
      if (!std::isfinite(entry)) {
        throw InvalidConfiguration("constraint matrix entries must be finite");
      }
    }
  }
  for (double entry : lp.objective) {
    if (!std::isfinite(entry)) {
      throw InvalidConfiguration("objective entries must be finite");
    }
  }
  for (double entry : lp.rhs) {
    if (!std::isfinite(entry)) {
      throw InvalidConfiguration("rhs entries must be finite");
    }
  }
}

LpSolution solve_lp(const LinearProgram& lp) {
  validate_lp(lp);
  const auto raw = detail::simplex_solve<double>(
      lp.rows(), lp.cols(), lp.objective, flatten(lp), lp.rhs,
      detail::kFloatTolerances);
  LpSolution solution;
  solution.status = to_status(raw.status);
  if (solution.status == LpStatus::Optimal) {
    solution.primal = raw.primal;
    solution.objective_value = raw.objective;
    solution.duals = raw.duals;
  }
  return solution;
}

LpSolution solve_lp_exact(const LinearProgram& lp) {
  validate_lp(lp);
  const int m = lp.rows();
  const int n = lp.cols();
  std::vector<Rational> c(n), b(m);
  std::vector<Rational> a(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j) c[j] = Rational(lp.objective[j]);
  for (int i = 0; i < m; ++i) {
    b[i] = Rational(lp.rhs[i]);
    for (int j = 0; j < n; ++j) {
      a[i * n + j] = Rational(lp.constraint_matrix[i][j]);
    }
  }
  const auto raw = detail::simplex_solve<Rational>(m, n, c, a, b,
                                                   detail::kExactTolerances);
  LpSolution solution;
  solution.status = to_status(raw.status);
  if (solution.status == LpStatus::Optimal) {
    solution.primal.resize(n);
    solution.duals.resize(m);
    for (int j = 0; j < n; ++j) {
      solution.primal[j] = raw.primal[j].convert_to<double>();
    }
    for (int i = 0; i < m; ++i) {
      solution.duals[i] = raw.duals[i].convert_to<double>();
    }
    solution.objective_value = raw.objective.convert_to<double>();
  }
  return solution;
}

LpSolution verify_by_vertex_enumeration(const LinearProgram& lp) {
  validate_lp(lp);
  const int m = lp.rows();
  const int n = lp.cols();
  if (n > 24 || binomial_bound(n, m) > 5e6) {
    throw ProblemTooLarge("vertex enumeration guard exceeded for " +
                          std::to_string(n) + " columns and " +
                          std::to_string(m) + " rows");
  }

  std::vector<int> indices(m);
  for (int i = 0; i < m; ++i) indices[i] = i;

  bool found = false;
  double best_objective = 0.0;
  std::vector<int> best_basis;
  std::vector<double> best_values;

  std::vector<double> basis_matrix(static_cast<std::size_t>(m) * m);
  std::vector<double> values(m);
  for (;;) {
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        basis_matrix[i * m + k] = lp.constraint_matrix[i][indices[k]];
      }
      values[i] = lp.rhs[i];
    }
    if (solve_square(basis_matrix, values, m, 1e-12)) {
      bool feasible = true;
      for (double value : values) {
        if (value < -1e-9) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        double objective = 0.0;
        for (int k = 0; k < m; ++k) {
          objective += lp.objective[indices[k]] * values[k];
        }
        if (!found || objective < best_objective - 1e-12) {
          found = true;
          best_objective = objective;
          best_basis = indices;
          best_values = values;
        }
      }
    }

    // Next combination in lexicographic order.
    int position = m - 1;
    while (position >= 0 && indices[position] == n - m + position) --position;
    if (position < 0) break;
    ++indices[position];
    for (int i = position + 1; i < m; ++i) indices[i] = indices[i - 1] + 1;
  }

  LpSolution solution;
  if (!found) {
    solution.status = LpStatus::Infeasible;
    return solution;
  }
  solution.status = LpStatus::Optimal;
  solution.primal.assign(n, 0.0);
  for (int k = 0; k < m; ++k) solution.primal[best_basis[k]] = best_values[k];
  solution.objective_value = best_objective;

  // Duals of the winning basis: solve B^T y = c_B.
  std::vector<double> transpose(static_cast<std::size_t>(m) * m);
  std::vector<double> cost(m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      transpose[k * m + i] = lp.constraint_matrix[i][best_basis[k]];
    }
  }
  for (int k = 0; k < m; ++k) cost[k] = lp.objective[best_basis[k]];
  solution.duals.assign(m, 0.0);
  if (solve_square(transpose, cost, m, 1e-12)) {
    solution.duals = cost;
  }
  return solution;
}

}  // namespace sitedft
