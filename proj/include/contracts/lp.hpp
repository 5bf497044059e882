#ifndef CONTRACTS_LP_HPP
#define CONTRACTS_LP_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "contracts/errors.hpp"
#include "contracts/scalar.hpp"

namespace contracts::lp {

/// Linear program
///     min  objective . x
///     s.t. rows[i] . x >= rhs[i]   for every i,
///          x[j] >= 0               unless free_cols[j] is set.
/// `free_cols` may be empty (all variables nonnegative).
template <class S>
struct LpProblem {
  std::vector<std::vector<S>> rows;
  std::vector<S> rhs;
  std::vector<S> objective;
  std::vector<bool> free_cols;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(objective.size()); }
  bool is_free(int j) const {
    return j < static_cast<int>(free_cols.size()) && free_cols[j];
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Every status comes with a certificate that `verify_solution` can check
/// independently of the solver:
///   Optimal    x (primal optimizer) and duals y with  y >= 0,  A^T y <= c
///              (with equality on free columns) and  b.y = c.x = value.
///   Infeasible farkas y with  y >= 0,  A^T y <= 0 (= 0 on free columns)
///              and  b.y > 0.
///   Unbounded  a feasible point x and a ray d with  d >= 0 on nonnegative
///              columns,  A d >= 0  and  c.d < 0.
template <class S>
struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  S value{};
  std::vector<S> x;
  std::vector<S> duals;
  std::vector<S> farkas;
  std::vector<S> ray;
  long pivots = 0;
};

template <class S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  S sum(0);
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

/// Checks the certificate carried by `solution` against `problem` and throws
/// InternalError on any violation.  With exact scalars this is a proof; the
/// solver calls it automatically in exact mode.
template <class S>
void verify_solution(const LpProblem<S>& problem, const LpSolution<S>& solution,
                     const Num<S>& num = {});

/// Dense two-phase simplex.  Deterministic: largest-coefficient entering rule
/// with lowest-index ties, lowest-basis-index leaving ties, and a switch to
/// Bland's rule after a run of degenerate pivots so cycling cannot occur.
template <class S>
LpSolution<S> solve(const LpProblem<S>& problem, const Num<S>& num = {});

// ---------------------------------------------------------------------------

namespace detail {

constexpr int kDegenerateLimit = 30;

template <class S>
class Simplex {
 public:
  Simplex(const LpProblem<S>& problem, const Num<S>& num) : p_(problem), num_(num) {
    const int given = static_cast<int>(p_.free_cols.size());
    if (given != 0 && given != p_.num_cols()) {
      throw InternalError("LP free-column mask length mismatch");
    }
    for (int i = 0; i < p_.num_rows(); ++i) {
      if (static_cast<int>(p_.rows[i].size()) != p_.num_cols()) {
        throw InternalError("LP row length mismatch");
      }
    }
    if (static_cast<int>(p_.rhs.size()) != p_.num_rows()) {
      throw InternalError("LP rhs length mismatch");
    }
  }

  LpSolution<S> run() {
    build_tableau();
    LpSolution<S> solution;
    solution.pivots = 0;

    int unused = -1;
    if (!optimize(n_struct_ + m_ + n_art_, &unused)) {
      throw InternalError("phase-1 objective cannot be unbounded");
    }
    // Current phase-1 objective is -cost_rhs.
    if (num_.sgn(tab_[m_][total_]) < 0) {
      solution.status = LpStatus::Infeasible;
      solution.farkas = extract_row_duals();
      solution.pivots = pivots_;
      return solution;
    }
    drive_out_artificials();
    install_phase2_costs();

    int enter = -1;
    const bool optimal = optimize(n_struct_ + m_, &enter);
    solution.x = extract_primal();
    solution.pivots = pivots_;
    if (optimal) {
      solution.status = LpStatus::Optimal;
      solution.value = dot(p_.objective, solution.x);
      solution.duals = extract_row_duals();
    } else {
      solution.status = LpStatus::Unbounded;
      solution.ray = extract_ray(enter);
    }
    return solution;
  }

 private:
  // Tableau columns: split structural variables (a free x[j] becomes
  // x+[j] - x-[j]), then one surplus per row, then artificials for rows with
  // positive right-hand side; the last column is the right-hand side.
  // Rows with rhs <= 0 are stored negated so their surplus starts basic.
  void build_tableau() {
    const int n = p_.num_cols();
    m_ = p_.num_rows();
    plus_col_.assign(n, -1);
    minus_col_.assign(n, -1);
    int col = 0;
    for (int j = 0; j < n; ++j) {
      plus_col_[j] = col++;
      if (p_.is_free(j)) minus_col_[j] = col++;
    }
    n_struct_ = col;

    negated_.assign(m_, false);
    art_col_.assign(m_, -1);
    n_art_ = 0;
    for (int i = 0; i < m_; ++i) {
      if (num_.sgn(p_.rhs[i]) <= 0) {
        negated_[i] = true;
      } else {
        art_col_[i] = n_struct_ + m_ + n_art_++;
      }
    }
    total_ = n_struct_ + m_ + n_art_;

    tab_.assign(m_ + 1, std::vector<S>(total_ + 1, S(0)));
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      auto& row = tab_[i];
      for (int j = 0; j < n; ++j) {
        const S& a = p_.rows[i][j];
        row[plus_col_[j]] = negated_[i] ? -a : a;
        if (minus_col_[j] >= 0) row[minus_col_[j]] = negated_[i] ? a : -a;
      }
      // Surplus: A_i x - s_i = b_i, negated rows flip every sign.
      row[n_struct_ + i] = negated_[i] ? S(1) : S(-1);
      row[total_] = negated_[i] ? -p_.rhs[i] : p_.rhs[i];
      if (negated_[i]) {
        basis_[i] = n_struct_ + i;
      } else {
        row[art_col_[i]] = S(1);
        basis_[i] = art_col_[i];
      }
    }
    // Phase-1 costs: one per artificial; subtract their rows to zero the
    // basic columns of the cost row.
    auto& cost = tab_[m_];
    for (int i = 0; i < m_; ++i) {
      if (art_col_[i] < 0) continue;
      for (int c = 0; c <= total_; ++c) cost[c] -= tab_[i][c];
      cost[art_col_[i]] += S(1);
    }
  }

  void pivot(int prow, int pcol) {
    auto& prow_ref = tab_[prow];
    const S inv = prow_ref[pcol];
    for (auto& v : prow_ref) v /= inv;
    prow_ref[pcol] = S(1);
    for (int r = 0; r <= m_; ++r) {
      if (r == prow) continue;
      const S factor = tab_[r][pcol];
      if (factor == S(0)) continue;
      auto& target = tab_[r];
      for (int c = 0; c <= total_; ++c) {
        if (prow_ref[c] == S(0)) continue;
        target[c] -= factor * prow_ref[c];
      }
      target[pcol] = S(0);
    }
    basis_[prow] = pcol;
    ++pivots_;
    if (pivots_ > pivot_cap()) {
      throw InternalError("simplex exceeded the pivot cap; this indicates a solver bug");
    }
  }

  long pivot_cap() const { return 10000L + 200L * static_cast<long>(m_ + total_ + 1); }

  /// Runs simplex over columns [0, limit).  Returns true at optimality;
  /// false when unbounded, with the entering column in *blocked_col.
  bool optimize(int limit, int* blocked_col) {
    for (;;) {
      const auto& cost = tab_[m_];
      int enter = -1;
      if (bland_) {
        for (int j = 0; j < limit; ++j) {
          if (num_.sgn(cost[j]) < 0) {
            enter = j;
            break;
          }
        }
      } else {
        for (int j = 0; j < limit; ++j) {
          if (num_.sgn(cost[j]) < 0 && (enter < 0 || num_.lt(cost[j], cost[enter]))) enter = j;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      S best_ratio(0);
      for (int r = 0; r < m_; ++r) {
        if (num_.sgn(tab_[r][enter]) <= 0) continue;
        const S ratio = tab_[r][total_] / tab_[r][enter];
        if (leave < 0 || num_.lt(ratio, best_ratio) ||
            (num_.eq(ratio, best_ratio) && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        *blocked_col = enter;
        return false;
      }
      const S before = tab_[m_][total_];
      pivot(leave, enter);
      if (num_.eq(tab_[m_][total_], before)) {
        if (++degenerate_streak_ >= kDegenerateLimit) bland_ = true;
      } else {
        degenerate_streak_ = 0;
      }
    }
  }

  // At a zero phase-1 optimum every basic artificial sits at value zero and
  // some surplus or structural entry of its row is nonzero (each original
  // row owns a surplus column, so rows cannot be linearly dependent), so a
  // degenerate pivot removes it.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_struct_ + m_) continue;
      int pcol = -1;
      for (int j = 0; j < n_struct_ + m_; ++j) {
        if (!num_.is_zero(tab_[r][j])) {
          pcol = j;
          break;
        }
      }
      if (pcol < 0) {
        throw InternalError("cannot remove artificial from the basis");
      }
      pivot(r, pcol);
    }
  }

  void install_phase2_costs() {
    auto& cost = tab_[m_];
    for (auto& v : cost) v = S(0);
    for (int j = 0; j < p_.num_cols(); ++j) {
      cost[plus_col_[j]] = p_.objective[j];
      if (minus_col_[j] >= 0) cost[minus_col_[j]] = -p_.objective[j];
    }
    for (int r = 0; r < m_; ++r) {
      const S factor = cost[basis_[r]];
      if (factor == S(0)) continue;
      for (int c = 0; c <= total_; ++c) cost[c] -= factor * tab_[r][c];
      cost[basis_[r]] = S(0);
    }
  }

  std::vector<S> extract_primal() const {
    std::vector<S> full(total_, S(0));
    for (int r = 0; r < m_; ++r) full[basis_[r]] = tab_[r][total_];
    std::vector<S> x(p_.num_cols(), S(0));
    for (int j = 0; j < p_.num_cols(); ++j) {
      x[j] = full[plus_col_[j]];
      if (minus_col_[j] >= 0) x[j] -= full[minus_col_[j]];
    }
    return x;
  }

  /// Row duals read off the phase cost row: the reduced cost of row i's
  /// surplus column equals the dual of original row i under either storage
  /// sign.
  std::vector<S> extract_row_duals() const {
    std::vector<S> y;
    y.reserve(m_);
    for (int i = 0; i < m_; ++i) y.push_back(tab_[m_][n_struct_ + i]);
    return y;
  }

  std::vector<S> extract_ray(int enter) const {
    std::vector<S> full(total_, S(0));
    full[enter] = S(1);
    for (int r = 0; r < m_; ++r) full[basis_[r]] -= tab_[r][enter];
    std::vector<S> d(p_.num_cols(), S(0));
    for (int j = 0; j < p_.num_cols(); ++j) {
      d[j] = full[plus_col_[j]];
      if (minus_col_[j] >= 0) d[j] -= full[minus_col_[j]];
    }
    return d;
  }

  const LpProblem<S>& p_;
  Num<S> num_;
  int m_ = 0;
  int n_struct_ = 0;
  int n_art_ = 0;
  int total_ = 0;
  std::vector<int> plus_col_;
  std::vector<int> minus_col_;
  std::vector<bool> negated_;
  std::vector<int> art_col_;
  std::vector<std::vector<S>> tab_;
  std::vector<int> basis_;
  bool bland_ = false;
  int degenerate_streak_ = 0;
  long pivots_ = 0;
};

}  // namespace detail

template <class S>
void verify_solution(const LpProblem<S>& problem, const LpSolution<S>& solution,
                     const Num<S>& num) {
  const int m = problem.num_rows();
  const int n = problem.num_cols();
  const auto fail = [](const std::string& what) {
    throw InternalError("LP certificate check failed: " + what);
  };
  const auto check_primal_feasible = [&](const std::vector<S>& x) {
    if (static_cast<int>(x.size()) != n) fail("primal point has wrong dimension");
    for (int j = 0; j < n; ++j) {
      if (!problem.is_free(j) && num.sgn(x[j]) < 0) fail("primal point has a negative entry");
    }
    for (int i = 0; i < m; ++i) {
      if (num.lt(dot(problem.rows[i], x), problem.rhs[i])) {
        fail("primal point violates row " + std::to_string(i));
      }
    }
  };
  const auto check_dual_cone = [&](const std::vector<S>& y, bool against_objective) {
    if (static_cast<int>(y.size()) != m) fail("dual vector has wrong dimension");
    for (int i = 0; i < m; ++i) {
      if (num.sgn(y[i]) < 0) fail("dual vector has a negative entry");
    }
    for (int j = 0; j < n; ++j) {
      S aty(0);
      for (int i = 0; i < m; ++i) aty += problem.rows[i][j] * y[i];
      const S bound = against_objective ? problem.objective[j] : S(0);
      if (problem.is_free(j)) {
        if (!num.eq(aty, bound)) fail("dual vector misses a free-column equality");
      } else if (num.lt(bound, aty)) {
        fail("dual vector violates column " + std::to_string(j));
      }
    }
  };

  switch (solution.status) {
    case LpStatus::Optimal: {
      check_primal_feasible(solution.x);
      if (!num.eq(dot(problem.objective, solution.x), solution.value)) {
        fail("objective value does not match the optimizer");
      }
      check_dual_cone(solution.duals, /*against_objective=*/true);
      if (!num.eq(dot(problem.rhs, solution.duals), solution.value)) {
        fail("strong duality does not hold");
      }
      return;
    }
    case LpStatus::Infeasible: {
      check_dual_cone(solution.farkas, /*against_objective=*/false);
      if (num.sgn(dot(problem.rhs, solution.farkas)) <= 0) {
        fail("infeasibility certificate has nonpositive value");
      }
      return;
    }
    case LpStatus::Unbounded: {
      check_primal_feasible(solution.x);
      if (static_cast<int>(solution.ray.size()) != n) fail("ray has wrong dimension");
      for (int j = 0; j < n; ++j) {
        if (!problem.is_free(j) && num.sgn(solution.ray[j]) < 0) {
          fail("ray has a negative entry");
        }
      }
      for (int i = 0; i < m; ++i) {
        if (num.sgn(dot(problem.rows[i], solution.ray)) < 0) {
          fail("ray leaves the feasible cone at row " + std::to_string(i));
        }
      }
      if (num.sgn(dot(problem.objective, solution.ray)) >= 0) {
        fail("ray does not improve the objective");
      }
      return;
    }
  }
  fail("unknown status");
}

template <class S>
LpSolution<S> solve(const LpProblem<S>& problem, const Num<S>& num) {
  detail::Simplex<S> simplex(problem, num);
  LpSolution<S> solution = simplex.run();
  if constexpr (Num<S>::exact) {
    verify_solution(problem, solution, num);
  }
  return solution;
}

}  // namespace contracts::lp

#endif  // CONTRACTS_LP_HPP
