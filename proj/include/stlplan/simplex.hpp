#pragma once

#include <cstdint>
#include <vector>

#include "stlplan/milp.hpp"

namespace stlplan::milp {

enum class LpStatus { Optimal, Infeasible, IterLimit };

// Bounded-variable simplex over a dense tableau (structural + one logical
// column per row; rows pre-scaled to unit max coefficient). Two pivoting
// modes share the tableau:
//   - primal, phase 1 (composite infeasibility costs) + phase 2, Dantzig
//     pricing with a Bland fallback on stalls;
//   - dual, for re-solves after bound changes: bound edits never disturb
//     reduced costs, so the basis stays dual-feasible and branch-and-bound
//     nodes re-optimize in a few pivots.
// All tie-breaking is by index; runs are deterministic.
class SimplexSolver {
public:
  SimplexSolver(const Model& m, const LpOptions& opts = {});

  // Logical basis, every nonbasic structural at the bound its cost prefers
  // (dual-feasible cold start).
  void reset();

  // Override the bounds of structural variable j; keeps dual feasibility.
  void set_bounds(int j, double lo, double hi);
  double lower(int j) const { return lo_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return hi_[static_cast<std::size_t>(j)]; }

  LpStatus solve_primal();
  LpStatus solve_dual();
  // Warm re-solve for branch-and-bound: refresh the basic values and reduced
  // costs from the tableau (undoing incremental drift), run the dual method,
  // then a primal cleanup pass so the final basis is optimal in both senses.
  LpStatus reoptimize();

  // Structural variable values / objective of the current basis (valid after
  // a solve returned Optimal).
  double value(int j) const;
  std::vector<double> values() const;
  double objective() const;

  // Reduced cost of structural variable j under the current basis.
  double reduced_cost(int j) const { return d_[static_cast<std::size_t>(j)]; }
  // -1 nonbasic at lower, +1 nonbasic at upper, 0 basic.
  int bound_side(int j) const {
    switch (status_[static_cast<std::size_t>(j)]) {
      case St::AtLower: return -1;
      case St::AtUpper: return 1;
      default: return 0;
    }
  }

  std::int64_t pivots() const { return pivots_; }
  std::size_t rows() const { return m_; }
  std::size_t structurals() const { return n_; }

private:
  enum class St : unsigned char { Basic, AtLower, AtUpper };

  double* row(std::size_t i) { return tab_.data() + i * total_; }
  const double* row(std::size_t i) const { return tab_.data() + i * total_; }

  double nonbasic_value(std::size_t j) const;
  void compute_beta();
  void compute_reduced_costs();
  double primal_infeasibility(std::size_t i) const;
  void pivot(std::size_t r, std::size_t q);
  void apply_nonbasic_shift(std::size_t j, double delta);

  LpStatus primal_phase1();
  LpStatus primal_phase2();

  const Model& model_;
  LpOptions opts_;
  std::size_t n_ = 0;      // structural columns
  std::size_t m_ = 0;      // rows (= logical columns)
  std::size_t total_ = 0;  // n_ + m_

  std::vector<double> tab_;     // m_ x total_, row-major; basic columns are unit
  std::vector<double> lo_, hi_;  // per column
  std::vector<double> cost_;    // per column (logicals 0)
  std::vector<double> d_;       // reduced costs per column
  std::vector<double> beta_;    // values of basic variables per row
  std::vector<int> basis_;      // column basic in row i
  std::vector<int> in_basis_;   // row of column j, or -1
  std::vector<St> status_;

  std::int64_t pivots_ = 0;
  bool costs_valid_ = false;
};

}  // namespace stlplan::milp
