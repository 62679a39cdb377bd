#include "stlplan/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stlplan/errors.hpp"
#include "stlplan/kernels.hpp"

namespace stlplan::milp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-9;
constexpr double kDegenerateStep = 1e-11;
constexpr int kBlandTrigger = 1000;
}  // namespace

SimplexSolver::SimplexSolver(const Model& m, const LpOptions& opts) : model_(m), opts_(opts) {
  n_ = m.num_variables();
  m_ = m.num_constraints();
  total_ = n_ + m_;
  tab_.assign(m_ * total_, 0.0);
  lo_.resize(total_);
  hi_.resize(total_);
  cost_.assign(total_, 0.0);
  d_.assign(total_, 0.0);
  beta_.assign(m_, 0.0);
  basis_.assign(m_, -1);
  in_basis_.assign(total_, -1);
  status_.assign(total_, St::AtLower);

  for (std::size_t j = 0; j < n_; ++j) {
    const Variable& v = m.variable(static_cast<int>(j));
    lo_[j] = v.lo;
    hi_[j] = v.hi;
    cost_[j] = m.objective_coeff(static_cast<int>(j));
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const Constraint& c = m.constraint(static_cast<int>(i));
    double scale = 0.0;
    for (const auto& [j, a] : c.coeffs) scale = std::max(scale, std::abs(a));
    if (scale == 0.0) scale = 1.0;
    const double s = 1.0 / scale;
    double* tr = row(i);
    for (const auto& [j, a] : c.coeffs) tr[static_cast<std::size_t>(j)] += s * a;
    tr[n_ + i] = 1.0;  // logical: sum(s*a*x) + y = 0, y = -scaled activity
    const double srhs = s * c.rhs;
    switch (c.sense) {
      case Sense::LE:
        lo_[n_ + i] = -srhs;
        hi_[n_ + i] = kInf;
        break;
      case Sense::GE:
        lo_[n_ + i] = -kInf;
        hi_[n_ + i] = -srhs;
        break;
      case Sense::EQ:
        lo_[n_ + i] = -srhs;
        hi_[n_ + i] = -srhs;
        break;
    }
  }
  reset();
}

void SimplexSolver::reset() {
  // Rebuild the initial tableau only if pivots have altered it.
  if (pivots_ > 0) {
    std::fill(tab_.begin(), tab_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Constraint& c = model_.constraint(static_cast<int>(i));
      double scale = 0.0;
      for (const auto& [j, a] : c.coeffs) scale = std::max(scale, std::abs(a));
      if (scale == 0.0) scale = 1.0;
      const double s = 1.0 / scale;
      double* tr = row(i);
      for (const auto& [j, a] : c.coeffs) tr[static_cast<std::size_t>(j)] += s * a;
      tr[n_ + i] = 1.0;
    }
  }
  std::fill(in_basis_.begin(), in_basis_.end(), -1);
  for (std::size_t j = 0; j < n_; ++j) {
    // Cost-aligned bound choice keeps the initial reduced costs dual-feasible.
    if (cost_[j] < 0.0 && std::isfinite(hi_[j]))
      status_[j] = St::AtUpper;
    else
      status_[j] = St::AtLower;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    basis_[static_cast<std::size_t>(i)] = static_cast<int>(n_ + i);
    in_basis_[n_ + i] = static_cast<int>(i);
    status_[n_ + i] = St::Basic;
  }
  compute_beta();
  d_ = cost_;
  costs_valid_ = true;
}

double SimplexSolver::nonbasic_value(std::size_t j) const {
  return status_[j] == St::AtUpper ? hi_[j] : lo_[j];
}

void SimplexSolver::compute_beta() {
  // beta = -sum over nonbasic columns of T[:,j] * value(j). With the logical
  // basis the tableau columns are the scaled model columns, so walk the
  // sparse rows instead of the dense tableau.
  std::fill(beta_.begin(), beta_.end(), 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const double* tr = row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (status_[j] == St::Basic) continue;
      const double v = nonbasic_value(j);
      if (v != 0.0) acc += tr[j] * v;
    }
    const int b = basis_[i];
    // Row of the basic variable contributes T[i][b]*x_b = x_b; solve for it.
    beta_[i] = -acc / tr[static_cast<std::size_t>(b)];
  }
}

void SimplexSolver::compute_reduced_costs() {
  d_ = cost_;
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = cost_[static_cast<std::size_t>(basis_[i])];
    if (cb != 0.0) kern::axpy(-cb, row(i), d_.data(), total_);
  }
  for (std::size_t i = 0; i < m_; ++i) d_[static_cast<std::size_t>(basis_[i])] = 0.0;
  costs_valid_ = true;
}

double SimplexSolver::primal_infeasibility(std::size_t i) const {
  const std::size_t b = static_cast<std::size_t>(basis_[i]);
  if (beta_[i] < lo_[b]) return lo_[b] - beta_[i];
  if (beta_[i] > hi_[b]) return beta_[i] - hi_[b];
  return 0.0;
}

void SimplexSolver::pivot(std::size_t r, std::size_t q) {
  double* pr = row(r);
  const double piv = pr[q];
  const double inv = 1.0 / piv;
  for (std::size_t j = 0; j < total_; ++j) pr[j] *= inv;
  pr[q] = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* ti = row(i);
    const double f = ti[q];
    if (f != 0.0) {
      kern::axpy(-f, pr, ti, total_);
      ti[q] = 0.0;
    }
  }
  if (costs_valid_) {
    const double f = d_[q];
    if (f != 0.0) {
      kern::axpy(-f, pr, d_.data(), total_);
      d_[q] = 0.0;
    }
  }
  const int leaving = basis_[r];
  in_basis_[static_cast<std::size_t>(leaving)] = -1;
  basis_[r] = static_cast<int>(q);
  in_basis_[q] = static_cast<int>(r);
  status_[q] = St::Basic;
  ++pivots_;
}

void SimplexSolver::apply_nonbasic_shift(std::size_t j, double delta) {
  if (delta == 0.0) return;
  for (std::size_t i = 0; i < m_; ++i) beta_[i] -= row(i)[j] * delta;
}

void SimplexSolver::set_bounds(int jj, double lo, double hi) {
  const auto j = static_cast<std::size_t>(jj);
  const double old_value = status_[j] == St::Basic ? 0.0 : nonbasic_value(j);
  lo_[j] = lo;
  hi_[j] = hi;
  if (status_[j] == St::Basic) return;  // violation handled by the next dual solve
  if (status_[j] == St::AtUpper && !std::isfinite(hi)) status_[j] = St::AtLower;
  const double new_value = nonbasic_value(j);
  apply_nonbasic_shift(j, new_value - old_value);
}

double SimplexSolver::value(int jj) const {
  const auto j = static_cast<std::size_t>(jj);
  if (status_[j] == St::Basic) return beta_[static_cast<std::size_t>(in_basis_[j])];
  return nonbasic_value(j);
}

std::vector<double> SimplexSolver::values() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = value(static_cast<int>(j));
  return x;
}

double SimplexSolver::objective() const {
  double z = model_.objective_constant();
  for (std::size_t j = 0; j < n_; ++j)
    if (cost_[j] != 0.0) z += cost_[j] * value(static_cast<int>(j));
  return z;
}

// --------------------------------------------------------------- primal ---

LpStatus SimplexSolver::primal_phase1() {
  std::int64_t stall = 0;
  std::vector<double> dir(total_);
  while (true) {
    if (pivots_ >= opts_.max_pivots) return LpStatus::IterLimit;
    double worst_infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      worst_infeas = std::max(worst_infeas, primal_infeasibility(i));
    if (worst_infeas <= opts_.feas_tol) return LpStatus::Optimal;

    // dF/dx_j per unit increase.
    std::fill(dir.begin(), dir.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = static_cast<std::size_t>(basis_[i]);
      if (beta_[i] < lo_[b] - opts_.feas_tol)
        kern::axpy(1.0, row(i), dir.data(), total_);
      else if (beta_[i] > hi_[b] + opts_.feas_tol)
        kern::axpy(-1.0, row(i), dir.data(), total_);
    }

    const bool bland = stall > kBlandTrigger;
    std::size_t q = total_;
    int sigma = 0;
    double best = opts_.opt_tol;
    for (std::size_t j = 0; j < total_; ++j) {
      if (status_[j] == St::Basic || lo_[j] == hi_[j]) continue;
      const double D = dir[j];
      int s = 0;
      if (status_[j] == St::AtLower && D < -opts_.opt_tol)
        s = 1;
      else if (status_[j] == St::AtUpper && D > opts_.opt_tol)
        s = -1;
      if (!s) continue;
      if (bland) {
        q = j;
        sigma = s;
        break;
      }
      if (std::abs(D) > best) {
        best = std::abs(D);
        q = j;
        sigma = s;
      }
    }
    if (q == total_) return LpStatus::Infeasible;  // stuck with residual infeasibility

    // Ratio test: block at the first slope change (an infeasible basic
    // reaching its near bound, or a feasible basic reaching a bound).
    double limit = std::isfinite(hi_[q]) && std::isfinite(lo_[q]) ? hi_[q] - lo_[q] : kInf;
    std::size_t block_row = m_;
    double block_pivot = 0.0;
    bool block_to_lower = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const double t = row(i)[q];
      if (std::abs(t) <= kPivotTol) continue;
      const double g = -static_cast<double>(sigma) * t;
      const std::size_t b = static_cast<std::size_t>(basis_[i]);
      double step = kInf;
      bool to_lower = false;
      if (beta_[i] < lo_[b] - opts_.feas_tol) {
        if (g > 0.0) {
          step = (lo_[b] - beta_[i]) / g;
          to_lower = true;
        }
      } else if (beta_[i] > hi_[b] + opts_.feas_tol) {
        if (g < 0.0) step = (hi_[b] - beta_[i]) / g;
      } else {
        if (g > 0.0 && std::isfinite(hi_[b])) {
          step = (hi_[b] - beta_[i]) / g;
        } else if (g < 0.0 && std::isfinite(lo_[b])) {
          step = (lo_[b] - beta_[i]) / g;
          to_lower = true;
        }
      }
      if (step == kInf) continue;
      if (step < -1e-12) step = 0.0;
      if (step < limit - kRatioTieTol ||
          (step < limit + kRatioTieTol &&
           (block_row == m_ || std::abs(t) > std::abs(block_pivot)))) {
        limit = step;
        block_row = i;
        block_pivot = t;
        block_to_lower = to_lower;
      }
    }
    if (!std::isfinite(limit)) return LpStatus::Infeasible;  // should not happen

    stall = limit <= kDegenerateStep ? stall + 1 : 0;
    const double delta = std::max(limit, 0.0) * static_cast<double>(sigma);
    if (block_row == m_) {
      // bound flip
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= row(i)[q] * delta;
      status_[q] = status_[q] == St::AtLower ? St::AtUpper : St::AtLower;
      continue;
    }
    const double enter_value = nonbasic_value(q) + delta;
    for (std::size_t i = 0; i < m_; ++i)
      if (i != block_row) beta_[i] -= row(i)[q] * delta;
    const std::size_t leaving = static_cast<std::size_t>(basis_[block_row]);
    pivot(block_row, q);  // keeps d_ consistent for phase 2
    status_[leaving] = block_to_lower ? St::AtLower : St::AtUpper;
    beta_[block_row] = enter_value;
  }
}

LpStatus SimplexSolver::primal_phase2() {
  if (!costs_valid_) compute_reduced_costs();
  std::int64_t stall = 0;
  while (true) {
    if (pivots_ >= opts_.max_pivots) return LpStatus::IterLimit;
    const bool bland = stall > kBlandTrigger;
    std::size_t q = total_;
    int sigma = 0;
    double best = opts_.opt_tol;
    for (std::size_t j = 0; j < total_; ++j) {
      if (status_[j] == St::Basic || lo_[j] == hi_[j]) continue;
      int s = 0;
      if (status_[j] == St::AtLower && d_[j] < -opts_.opt_tol)
        s = 1;
      else if (status_[j] == St::AtUpper && d_[j] > opts_.opt_tol)
        s = -1;
      if (!s) continue;
      if (bland) {
        q = j;
        sigma = s;
        break;
      }
      if (std::abs(d_[j]) > best) {
        best = std::abs(d_[j]);
        q = j;
        sigma = s;
      }
    }
    if (q == total_) return LpStatus::Optimal;

    double limit = std::isfinite(hi_[q]) && std::isfinite(lo_[q]) ? hi_[q] - lo_[q] : kInf;
    std::size_t block_row = m_;
    double block_pivot = 0.0;
    bool block_to_lower = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const double t = row(i)[q];
      if (std::abs(t) <= kPivotTol) continue;
      const double g = -static_cast<double>(sigma) * t;
      const std::size_t b = static_cast<std::size_t>(basis_[i]);
      double step = kInf;
      bool to_lower = false;
      if (g > 0.0 && std::isfinite(hi_[b])) {
        step = (hi_[b] - beta_[i]) / g;
      } else if (g < 0.0 && std::isfinite(lo_[b])) {
        step = (lo_[b] - beta_[i]) / g;
        to_lower = true;
      }
      if (step == kInf) continue;
      if (step < -1e-12) step = 0.0;
      if (step < limit - kRatioTieTol ||
          (step < limit + kRatioTieTol &&
           (block_row == m_ || std::abs(t) > std::abs(block_pivot)))) {
        limit = step;
        block_row = i;
        block_pivot = t;
        block_to_lower = to_lower;
      }
    }
    if (!std::isfinite(limit)) return LpStatus::Infeasible;  // unbounded ray; finite boxes prevent this

    stall = limit <= kDegenerateStep ? stall + 1 : 0;
    const double delta = std::max(limit, 0.0) * static_cast<double>(sigma);
    if (block_row == m_) {
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= row(i)[q] * delta;
      status_[q] = status_[q] == St::AtLower ? St::AtUpper : St::AtLower;
      continue;
    }
    const double enter_value = nonbasic_value(q) + delta;
    for (std::size_t i = 0; i < m_; ++i)
      if (i != block_row) beta_[i] -= row(i)[q] * delta;
    const std::size_t leaving = static_cast<std::size_t>(basis_[block_row]);
    pivot(block_row, q);
    status_[leaving] = block_to_lower ? St::AtLower : St::AtUpper;
    beta_[block_row] = enter_value;
  }
}

LpStatus SimplexSolver::solve_primal() {
  const LpStatus p1 = primal_phase1();
  if (p1 != LpStatus::Optimal) return p1;
  if (!costs_valid_) compute_reduced_costs();
  return primal_phase2();
}

LpStatus SimplexSolver::reoptimize() {
  compute_beta();
  compute_reduced_costs();
  const LpStatus dual = solve_dual();
  if (dual != LpStatus::Optimal) return dual;
  compute_reduced_costs();
  return primal_phase2();
}

// ----------------------------------------------------------------- dual ---

LpStatus SimplexSolver::solve_dual() {
  if (!costs_valid_) compute_reduced_costs();
  std::int64_t stall = 0;
  while (true) {
    if (pivots_ >= opts_.max_pivots) return LpStatus::IterLimit;

    std::size_t r = m_;
    double worst = opts_.feas_tol;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = primal_infeasibility(i);
      if (v > worst) {
        worst = v;
        r = i;
      }
    }
    if (r == m_) return LpStatus::Optimal;

    const std::size_t leaving = static_cast<std::size_t>(basis_[r]);
    const bool below = beta_[r] < lo_[leaving];
    const double target = below ? lo_[leaving] : hi_[leaving];

    const bool bland = stall > kBlandTrigger;
    const double* tr = row(r);
    std::size_t q = total_;
    double best_ratio = kInf;
    double best_pivot = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (status_[j] == St::Basic || lo_[j] == hi_[j]) continue;
      const double t = tr[j];
      if (std::abs(t) <= kPivotTol) continue;
      bool eligible;
      if (below)
        eligible = (status_[j] == St::AtLower) ? (t < 0.0) : (t > 0.0);
      else
        eligible = (status_[j] == St::AtLower) ? (t > 0.0) : (t < 0.0);
      if (!eligible) continue;
      const double ratio = std::abs(d_[j]) / std::abs(t);
      if (bland) {
        q = j;
        best_pivot = t;
        break;
      }
      if (ratio < best_ratio - kRatioTieTol ||
          (ratio < best_ratio + kRatioTieTol && std::abs(t) > std::abs(best_pivot))) {
        best_ratio = ratio;
        best_pivot = t;
        q = j;
      }
    }
    if (q == total_) return LpStatus::Infeasible;

    stall = (best_ratio <= kDegenerateStep && !bland) ? stall + 1 : 0;

    const double delta = (beta_[r] - target) / best_pivot;
    const double enter_value = nonbasic_value(q) + delta;
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) beta_[i] -= row(i)[q] * delta;
    pivot(r, q);
    status_[leaving] = below ? St::AtLower : St::AtUpper;
    beta_[r] = enter_value;
  }
}

}  // namespace stlplan::milp
