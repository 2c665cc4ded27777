// Two-phase dense tableau simplex, templated on the scalar type. The
// float instantiation uses the tolerances below; the rational
// instantiation runs the identical pivoting with every tolerance at
// zero, so ties resolve exactly.
//
// Standard form: minimize c.x subject to A x = b, x >= 0. Rows with
// negative right-hand side are negated up front and the flip is undone
// when the duals are extracted. Artificial columns stay in the tableau
// through phase 2 but are never eligible to enter, so a redundant row
// keeps its artificial basic at level zero and contributes a zero dual.
//
// Pivoting is Bland's rule throughout: the entering column is the
// lowest-index structural column with reduced cost below -entering;
// the leaving row minimizes the ratio over rows with entries above
// pivot, with ties inside ratio_tie broken toward the smallest basis
// label. A column that admits only pivots at or below the pivot
// tolerance while containing a positive entry aborts the solve.

#pragma once

#include <string>
#include <vector>

#include "sitedft/errors.hpp"

namespace sitedft::detail {

struct Tolerances {
  double entering;     // reduced cost must fall below -entering to enter
  double pivot;        // ratio-test rows need an entry above this
  double ratio_tie;    // rows within this of the best ratio are tied
  double feasibility;  // phase-1 optimum above this means infeasible
};

inline constexpr Tolerances kFloatTolerances{1e-10, 1e-12, 1e-10, 1e-8};
inline constexpr Tolerances kExactTolerances{0.0, 0.0, 0.0, 0.0};

enum class RawStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct RawSolution {
  RawStatus status = RawStatus::Optimal;
  std::vector<Scalar> primal;  // length n, meaningful only when Optimal
  Scalar objective{};
  std::vector<Scalar> duals;  // length m, meaningful only when Optimal
};

template <typename Scalar>
class SimplexTableau {
 public:
  SimplexTableau(int m, int n, const std::vector<Scalar>& c,
                 const std::vector<Scalar>& a, const std::vector<Scalar>& b,
                 const Tolerances& tol)
      : m_(m), n_(n), width_(n + m + 1), tol_(tol), c_(c),
        tab_(static_cast<std::size_t>(m) * (n + m + 1), Scalar(0)),
        basis_(m), sign_(m, 1),
        z1_(n + m + 1, Scalar(0)), z2_(n + m + 1, Scalar(0)) {
    for (int i = 0; i < m_; ++i) {
      Scalar rhs = b[i];
      if (rhs < Scalar(0)) {
        sign_[i] = -1;
        rhs = -rhs;
        for (int j = 0; j < n_; ++j) at(i, j) = -a[i * n_ + j];
      } else {
        for (int j = 0; j < n_; ++j) at(i, j) = a[i * n_ + j];
      }
      at(i, n_ + i) = Scalar(1);
      at(i, n_ + m_) = rhs;
      basis_[i] = n_ + i;
    }
    // Phase-1 cost row: reduced costs of minimize sum(artificials) with
    // the all-artificial basis; the last slot holds minus the objective.
    for (int j = 0; j < n_ + m_; ++j) {
      z1_[j] = (j >= n_) ? Scalar(1) : Scalar(0);
      for (int i = 0; i < m_; ++i) z1_[j] -= at(i, j);
    }
    for (int i = 0; i < m_; ++i) z1_[n_ + m_] -= at(i, n_ + m_);
    // Phase-2 cost row: artificials cost zero, so the initial reduced
    // costs are the structural costs themselves.
    for (int j = 0; j < n_; ++j) z2_[j] = c_[j];
  }

  RawSolution<Scalar> solve() {
    run_phase(z1_);
    // Phase-1 objective is minus the stored slot.
    if (-z1_[n_ + m_] > Scalar(tol_.feasibility)) {
      RawSolution<Scalar> result;
      result.status = RawStatus::Infeasible;
      return result;
    }
    drive_artificials_out();
    const bool bounded = run_phase(z2_);
    RawSolution<Scalar> result;
    if (!bounded) {
      result.status = RawStatus::Unbounded;
      return result;
    }
    result.status = RawStatus::Optimal;
    result.primal.assign(n_, Scalar(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) result.primal[basis_[i]] = at(i, n_ + m_);
    }
    result.objective = Scalar(0);
    for (int j = 0; j < n_; ++j) {
      result.objective += c_[j] * result.primal[j];
    }
    result.duals.assign(m_, Scalar(0));
    for (int i = 0; i < m_; ++i) {
      Scalar y = -z2_[n_ + i];
      if (sign_[i] < 0) y = -y;
      result.duals[i] = y;
    }
    return result;
  }

 private:
  Scalar& at(int i, int j) {
    return tab_[static_cast<std::size_t>(i) * width_ + j];
  }

  // Runs Bland iterations against the given cost row. Returns false
  // when an entering column proves the phase objective unbounded.
  bool run_phase(std::vector<Scalar>& cost) {
    const long max_pivots = 1000 + 50L * (m_ + n_);
    for (long pivots = 0;; ++pivots) {
      if (pivots > max_pivots) {
        throw NumericalBreakdown("simplex exceeded " +
                                 std::to_string(max_pivots) + " pivots");
      }
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (cost[j] < Scalar(-tol_.entering)) {
          col = j;
          break;
        }
      }
      if (col < 0) return true;

      int row = -1;
      Scalar best_ratio(0);
      bool has_positive = false;
      bool has_eligible = false;
      for (int i = 0; i < m_; ++i) {
        const Scalar& entry = at(i, col);
        if (entry > Scalar(0)) has_positive = true;
        if (!(entry > Scalar(tol_.pivot))) continue;
        has_eligible = true;
        const Scalar ratio = at(i, n_ + m_) / entry;
        if (row < 0 || ratio < best_ratio) {
          best_ratio = ratio;
          row = i;
        }
      }
      if (!has_eligible) {
        if (has_positive) {
          throw NumericalBreakdown(
              "entering column admits only pivots below tolerance");
        }
        return false;
      }
      // Rows tied with the best ratio hand the pivot to the smallest
      // basis label.
      for (int i = 0; i < m_; ++i) {
        if (i == row) continue;
        const Scalar& entry = at(i, col);
        if (!(entry > Scalar(tol_.pivot))) continue;
        const Scalar ratio = at(i, n_ + m_) / entry;
        if (ratio <= best_ratio + Scalar(tol_.ratio_tie) &&
            basis_[i] < basis_[row]) {
          row = i;
        }
      }
      pivot(row, col);
    }
  }

  // Phase-2 pivots must never raise a basic artificial above zero, so
  // every artificial left basic by phase 1 is exchanged here for a
  // structural column. A row whose structural entries all vanish is a
  // redundant constraint; its artificial stays basic at level zero and
  // its dual multiplier stays zero.
  void drive_artificials_out() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      Scalar best(0);
      for (int j = 0; j < n_; ++j) {
        Scalar entry = at(i, j);
        if (entry < Scalar(0)) entry = -entry;
        if (entry > best) {
          best = entry;
          col = j;
        }
      }
      if (col >= 0 && best > Scalar(tol_.pivot)) pivot(i, col);
    }
  }

  void pivot(int row, int col) {
    const Scalar pivot_value = at(row, col);
    const Scalar magnitude =
        pivot_value < Scalar(0) ? -pivot_value : pivot_value;
    if (!(magnitude > Scalar(tol_.pivot))) {
      throw NumericalBreakdown("pivot below tolerance");
    }
    for (int j = 0; j < width_; ++j) at(row, j) /= pivot_value;
    at(row, col) = Scalar(1);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Scalar factor = at(i, col);
      if (factor == Scalar(0)) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = Scalar(0);
    }
    eliminate(z1_, row, col);
    eliminate(z2_, row, col);
    basis_[row] = col;
  }

  void eliminate(std::vector<Scalar>& cost, int row, int col) {
    const Scalar factor = cost[col];
    if (factor == Scalar(0)) return;
    for (int j = 0; j < width_; ++j) cost[j] -= factor * at(row, j);
    cost[col] = Scalar(0);
  }

  int m_;
  int n_;
  int width_;
  Tolerances tol_;
  std::vector<Scalar> c_;
  std::vector<Scalar> tab_;
  std::vector<int> basis_;
  std::vector<int> sign_;
  std::vector<Scalar> z1_;
  std::vector<Scalar> z2_;
};

template <typename Scalar>
RawSolution<Scalar> simplex_solve(int m, int n, const std::vector<Scalar>& c,
                                  const std::vector<Scalar>& a,
                                  const std::vector<Scalar>& b,
                                  const Tolerances& tol) {
  SimplexTableau<Scalar> tableau(m, n, c, a, b, tol);
  return tableau.solve();
}

}  // namespace sitedft::detail
