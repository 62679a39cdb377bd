#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stlplan::milp {

enum class VarKind { Continuous, Binary };

// Reporting category. Segment variables are the trajectory decision
// variables (control points, per-segment velocity/acceleration/robustness);
// literals are satisfaction indicators; selectors are the disjunction
// binaries.
enum class VarCategory { Segment, Literal, Selector, Other };

enum class Sense { LE, EQ, GE };

struct Variable {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  VarKind kind = VarKind::Continuous;
  VarCategory category = VarCategory::Other;
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

struct ConstraintViolation {
  int row = -1;
  std::string name;
  double amount = 0.0;  // on the max-coefficient-normalized row
};

// Solver-agnostic mixed-integer linear model. All variables carry finite
// bounds; binaries live in [0,1].
class Model {
public:
  int add_variable(std::string name, double lo, double hi, VarKind kind,
                   VarCategory category = VarCategory::Other);
  int add_constraint(std::string name, std::vector<std::pair<int, double>> coeffs,
                     Sense sense, double rhs);

  void set_objective_coeff(int var, double coeff);
  void add_objective_coeff(int var, double coeff);
  void set_objective_constant(double c) { obj_constant_ = c; }

  void set_bounds(int var, double lo, double hi);

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  std::size_t num_binaries() const;
  std::size_t num_continuous() const;
  std::size_t count_category(VarCategory c) const;

  const Variable& variable(int j) const { return vars_[static_cast<std::size_t>(j)]; }
  const Constraint& constraint(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  double objective_coeff(int j) const { return obj_[static_cast<std::size_t>(j)]; }
  double objective_constant() const { return obj_constant_; }

  std::optional<int> find_variable(const std::string& name) const;

  double objective_value(const std::vector<double>& x) const;
  // Worst violated constraint or variable bound (normalized rows), if any
  // exceeds tol.
  std::optional<ConstraintViolation> check_assignment(const std::vector<double>& x,
                                                      double tol) const;

private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double obj_constant_ = 0.0;
  std::map<std::string, int> var_index_;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Limit };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Limit;
  std::vector<double> values;  // one per model variable when status != Infeasible
  double objective = 0.0;
  double gap = 0.0;           // |incumbent - bound| / max(1, |incumbent|)
  double best_bound = 0.0;
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;
  double wall_seconds = 0.0;
  // (node index, incumbent objective) every time the incumbent improves.
  std::vector<std::pair<std::int64_t, double>> incumbent_history;
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  std::int64_t max_pivots = 2'000'000;
};

struct BnbOptions {
  double gap_tol = 1e-6;  // relative
  double int_tol = 1e-6;
  std::int64_t node_limit = -1;    // < 0: unlimited
  double time_limit_seconds = -1;  // < 0: unlimited
  bool diving = true;              // rounding dives for early incumbents
  int branch_rule = 0;             // 0: most fractional, 1: lowest-index fractional
  std::int64_t log_interval = 0;   // print progress every n nodes (0 = quiet)
  LpOptions lp;
};

// Solve the LP relaxation (integrality dropped) with the bounded-variable
// primal simplex.
Solution solve_lp(const Model& m, const LpOptions& opts = {});

// Exact branch-and-bound over the LP core: most-fractional branching,
// best-bound node selection, ties by lowest variable index.
Solution branch_and_bound(const Model& m, const BnbOptions& opts = {});

}  // namespace stlplan::milp
