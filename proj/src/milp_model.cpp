#include "stlplan/milp.hpp"

#include <algorithm>
#include <cmath>

#include "stlplan/errors.hpp"

namespace stlplan::milp {

int Model::add_variable(std::string name, double lo, double hi, VarKind kind,
                        VarCategory category) {
  if (name.empty()) throw input_error("variable needs a name");
  if (var_index_.count(name)) throw input_error("duplicate variable name '" + name + "'");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw input_error("variable '" + name + "' needs finite bounds with lo <= hi");
  if (kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
    throw input_error("binary variable '" + name + "' must have bounds within [0,1]");
  const int idx = static_cast<int>(vars_.size());
  var_index_.emplace(name, idx);
  vars_.push_back({std::move(name), lo, hi, kind, category});
  obj_.push_back(0.0);
  return idx;
}

int Model::add_constraint(std::string name, std::vector<std::pair<int, double>> coeffs,
                          Sense sense, double rhs) {
  for (const auto& [j, v] : coeffs) {
    if (j < 0 || j >= static_cast<int>(vars_.size()))
      throw input_error("constraint '" + name + "' references an undeclared variable");
    if (!std::isfinite(v)) throw input_error("constraint '" + name + "' has a non-finite coefficient");
  }
  if (!std::isfinite(rhs)) throw input_error("constraint '" + name + "' has a non-finite rhs");
  const int idx = static_cast<int>(rows_.size());
  rows_.push_back({std::move(name), std::move(coeffs), sense, rhs});
  return idx;
}

void Model::set_objective_coeff(int var, double coeff) {
  obj_[static_cast<std::size_t>(var)] = coeff;
}

void Model::add_objective_coeff(int var, double coeff) {
  obj_[static_cast<std::size_t>(var)] += coeff;
}

void Model::set_bounds(int var, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw input_error("bounds must be finite with lo <= hi");
  vars_[static_cast<std::size_t>(var)].lo = lo;
  vars_[static_cast<std::size_t>(var)].hi = hi;
}

std::size_t Model::num_binaries() const {
  std::size_t c = 0;
  for (const auto& v : vars_) c += v.kind == VarKind::Binary;
  return c;
}

std::size_t Model::num_continuous() const { return vars_.size() - num_binaries(); }

std::size_t Model::count_category(VarCategory cat) const {
  std::size_t c = 0;
  for (const auto& v : vars_) c += v.category == cat;
  return c;
}

std::optional<int> Model::find_variable(const std::string& name) const {
  auto it = var_index_.find(name);
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

double Model::objective_value(const std::vector<double>& x) const {
  double z = obj_constant_;
  for (std::size_t j = 0; j < obj_.size(); ++j) z += obj_[j] * x[j];
  return z;
}

std::optional<ConstraintViolation> Model::check_assignment(const std::vector<double>& x,
                                                           double tol) const {
  if (x.size() != vars_.size()) throw input_error("assignment size mismatch");
  ConstraintViolation worst;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const double below = vars_[j].lo - x[j];
    const double above = x[j] - vars_[j].hi;
    const double v = std::max(below, above);
    if (v > worst.amount) worst = {-1, "bound:" + vars_[j].name, v};
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Constraint& c = rows_[i];
    double act = 0.0;
    double scale = 0.0;
    for (const auto& [j, a] : c.coeffs) {
      act += a * x[static_cast<std::size_t>(j)];
      scale = std::max(scale, std::abs(a));
    }
    if (scale == 0.0) scale = 1.0;
    double v = 0.0;
    switch (c.sense) {
      case Sense::LE: v = act - c.rhs; break;
      case Sense::GE: v = c.rhs - act; break;
      case Sense::EQ: v = std::abs(act - c.rhs); break;
    }
    v /= scale;
    if (v > worst.amount) worst = {static_cast<int>(i), c.name, v};
  }
  if (worst.amount > tol) return worst;
  return std::nullopt;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
  }
  return "unknown";
}

}  // namespace stlplan::milp
