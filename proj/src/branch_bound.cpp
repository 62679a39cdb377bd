#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "stlplan/milp.hpp"
#include "stlplan/simplex.hpp"

namespace stlplan::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Solution solve_lp(const Model& m, const LpOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SimplexSolver solver(m, opts);
  const LpStatus st = solver.solve_primal();
  Solution sol;
  sol.pivots = solver.pivots();
  sol.wall_seconds = elapsed_seconds(start);
  switch (st) {
    case LpStatus::Infeasible:
      sol.status = SolveStatus::Infeasible;
      return sol;
    case LpStatus::IterLimit:
      sol.status = SolveStatus::Limit;
      return sol;
    case LpStatus::Optimal:
      break;
  }
  sol.status = SolveStatus::Optimal;
  sol.values = solver.values();
  sol.objective = m.objective_value(sol.values);
  sol.best_bound = sol.objective;
  sol.gap = 0.0;
  return sol;
}

namespace {

struct Node {
  double bound = -kInf;
  std::int64_t id = 0;
  int parent = -1;
  int depth = 0;
  int var = -1;     // branching variable (fixed at this node)
  int fix = 0;      // value the variable is fixed to
};

struct NodeOrder {
  const std::vector<Node>* nodes;
  bool operator()(std::int64_t a, std::int64_t b) const {
    const Node& na = (*nodes)[static_cast<std::size_t>(a)];
    const Node& nb = (*nodes)[static_cast<std::size_t>(b)];
    if (na.bound != nb.bound) return na.bound > nb.bound;  // min-heap on bound
    if (na.depth != nb.depth) return na.depth < nb.depth;  // deeper first: warmer basis
    return na.id > nb.id;
  }
};

class BranchAndBound {
public:
  BranchAndBound(const Model& m, const BnbOptions& opts)
      : model_(m), opts_(opts), solver_(m, opts.lp) {
    for (std::size_t j = 0; j < m.num_variables(); ++j)
      if (m.variable(static_cast<int>(j)).kind == VarKind::Binary)
        binaries_.push_back(static_cast<int>(j));
  }

  Solution run() {
    const auto start = std::chrono::steady_clock::now();
    Solution sol;

    const LpStatus root = solver_.reoptimize();
    ++nodes_processed_;
    if (root == LpStatus::Infeasible) {
      finish(sol, SolveStatus::Infeasible, start);
      return sol;
    }
    if (root == LpStatus::IterLimit) {
      finish(sol, SolveStatus::Limit, start);
      return sol;
    }
    root_bound_ = solver_.objective();
    best_open_bound_ = root_bound_;
    save_root_costs();

    if (try_incumbent()) {
      // Root LP already integral.
      finish(sol, SolveStatus::Optimal, start);
      sol.best_bound = root_bound_;
      sol.gap = 0.0;
      return sol;
    }
    const int root_branch_var = most_fractional();
    if (opts_.diving) dive();

    nodes_.push_back({root_bound_, 0, -1, 0, -1, 0});
    std::priority_queue<std::int64_t, std::vector<std::int64_t>, NodeOrder> open{
        NodeOrder{&nodes_}};
    branch(0, root_bound_, root_branch_var);
    for (std::int64_t c : pending_children_) open.push(c);
    pending_children_.clear();

    SolveStatus final_status = SolveStatus::Optimal;
    while (!open.empty()) {
      if (opts_.node_limit >= 0 && nodes_processed_ >= opts_.node_limit) {
        final_status = SolveStatus::Limit;
        break;
      }
      if (opts_.time_limit_seconds >= 0 && elapsed_seconds(start) > opts_.time_limit_seconds) {
        final_status = SolveStatus::Limit;
        break;
      }
      const std::int64_t id = open.top();
      open.pop();
      const double node_bound = nodes_[static_cast<std::size_t>(id)].bound;
      best_open_bound_ = node_bound;
      if (opts_.log_interval > 0 && nodes_processed_ % opts_.log_interval == 0) {
        std::fprintf(stderr,
                     "[bnb] node %lld  open %zu  bound %.6f  incumbent %s  rescued %lld  "
                     "infeasible %lld  %.1fs\n",
                     static_cast<long long>(nodes_processed_), open.size(), node_bound,
                     incumbent_set_ ? std::to_string(incumbent_obj_).c_str() : "-",
                     static_cast<long long>(rescued_nodes_),
                     static_cast<long long>(confirmed_infeasible_), elapsed_seconds(start));
      }
      if (node_bound >= prune_threshold()) {
        // Best-bound order: every remaining node is at least as bad.
        best_open_bound_ = incumbent_set_ ? std::min(node_bound, incumbent_obj_) : node_bound;
        break;
      }

      if (!apply_node(id)) continue;  // conflicts with a proven global fixing
      LpStatus st = solver_.reoptimize();
      ++nodes_processed_;
      if (st == LpStatus::Infeasible) {
        // Warm bases accumulate round-off; never prune a subtree on a stale
        // state. Rebuild from the initial tableau and re-solve cold.
        solver_.reset();
        reapply_all_bounds();
        st = solver_.reoptimize();
        if (st == LpStatus::Infeasible) ++confirmed_infeasible_;
        else ++rescued_nodes_;
      }
      if (st == LpStatus::IterLimit) {
        final_status = SolveStatus::Limit;
        break;
      }
      if (st == LpStatus::Infeasible) continue;
      const double obj = solver_.objective();
      if (obj >= prune_threshold()) continue;
      if (try_incumbent()) continue;
      const int branch_var = most_fractional();
      if (opts_.diving && !incumbent_set_ && nodes_processed_ % 50 == 0) {
        dive();
        apply_node(id);
        if (solver_.reoptimize() != LpStatus::Optimal) continue;
      }
      branch(id, obj, branch_var);
      for (std::int64_t c : pending_children_) open.push(c);
      pending_children_.clear();
    }
    if (open.empty() && final_status == SolveStatus::Optimal)
      best_open_bound_ = incumbent_set_ ? incumbent_obj_ : kInf;

    if (!incumbent_set_) {
      finish(sol, final_status == SolveStatus::Optimal ? SolveStatus::Infeasible : SolveStatus::Limit,
             start);
      return sol;
    }
    finish(sol,
           final_status == SolveStatus::Optimal ? SolveStatus::Optimal : SolveStatus::Feasible,
           start);
    return sol;
  }

private:
  double prune_threshold() const {
    if (!incumbent_set_) return kInf;
    return incumbent_obj_ - opts_.gap_tol * std::max(1.0, std::abs(incumbent_obj_));
  }

  void save_root_costs() {
    root_costs_.resize(binaries_.size());
    root_sides_.resize(binaries_.size());
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      root_costs_[k] = solver_.reduced_cost(binaries_[k]);
      root_sides_[k] = solver_.bound_side(binaries_[k]);
    }
  }

  // Fix binaries whose root reduced cost proves they cannot move in any
  // solution better than the incumbent.
  void reduced_cost_fixing() {
    const double slack = prune_threshold() - root_bound_;
    if (!(slack < kInf)) return;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      const int j = binaries_[k];
      if (global_fix_.count(j)) continue;
      if (root_sides_[k] == -1 && root_costs_[k] > slack)
        global_fix_[j] = 0;
      else if (root_sides_[k] == 1 && -root_costs_[k] > slack)
        global_fix_[j] = 1;
    }
  }

  // Push the currently applied fixings into a freshly reset solver.
  void reapply_all_bounds() {
    for (const auto& [j, val] : applied_) solver_.set_bounds(j, val, val);
  }

  // Returns false when a path fixing contradicts a reduced-cost fixing; the
  // node is then provably worse than the incumbent and can be dropped.
  bool apply_node(std::int64_t id) {
    std::map<int, int> target;
    for (std::int64_t cur = id; cur > 0;
         cur = nodes_[static_cast<std::size_t>(cur)].parent) {
      const Node& nd = nodes_[static_cast<std::size_t>(cur)];
      target.emplace(nd.var, nd.fix);  // a variable appears at most once per path
    }
    for (const auto& [j, v] : global_fix_) {
      auto it = target.find(j);
      if (it == target.end())
        target.emplace(j, v);
      else if (it->second != v)
        return false;
    }
    // Clear overrides not in the target, then apply the target.
    for (auto it = applied_.begin(); it != applied_.end();) {
      if (!target.count(it->first)) {
        const Variable& v = model_.variable(it->first);
        solver_.set_bounds(it->first, v.lo, v.hi);
        it = applied_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& [j, val] : target) {
      auto it = applied_.find(j);
      if (it != applied_.end() && it->second == val) continue;
      solver_.set_bounds(j, val, val);
      applied_[j] = val;
    }
    return true;
  }

  // Branching variable choice; -1 if integral.
  int most_fractional() const {
    int best = -1;
    double best_score = opts_.int_tol;
    for (int j : binaries_) {
      const double v = solver_.value(j);
      const double f = v - std::floor(v);
      const double score = std::min(f, 1.0 - f);
      if (score <= opts_.int_tol) continue;
      if (opts_.branch_rule == 1) return j;  // lowest index (temporal order)
      if (score > best_score + 1e-12) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  bool try_incumbent() {
    if (most_fractional() != -1) return false;
    std::vector<double> x = solver_.values();
    for (int j : binaries_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    const double obj = model_.objective_value(x);
    if (!incumbent_set_ || obj < incumbent_obj_ - 1e-12) {
      incumbent_set_ = true;
      incumbent_obj_ = obj;
      incumbent_ = std::move(x);
      history_.emplace_back(nodes_processed_, obj);
      reduced_cost_fixing();
    }
    return true;
  }

  void branch(std::int64_t id, double obj, int j) {
    if (j < 0) return;
    // keep child bounds monotone under residual round-off
    const double bound = std::max(obj, nodes_[static_cast<std::size_t>(id)].bound);
    const int depth = nodes_[static_cast<std::size_t>(id)].depth + 1;
    for (int fix = 0; fix < 2; ++fix) {
      nodes_.push_back({bound, static_cast<std::int64_t>(nodes_.size()), static_cast<int>(id),
                        depth, j, fix});
      pending_children_.push_back(nodes_.back().id);
    }
  }

  // Dive from the current LP state for an early incumbent. Fixing the most
  // saturated fractional binary to 1 steadily satisfies the covering rows
  // that dominate these models; plain nearest-rounding tends to strand them.
  void dive() {
    std::vector<int> touched;
    for (std::size_t depth = 0; depth <= binaries_.size(); ++depth) {
      int j = -1;
      double best = opts_.int_tol;
      for (int b : binaries_) {
        const double v = solver_.value(b);
        const double f = v - std::floor(v);
        const double frac = std::min(f, 1.0 - f);
        if (frac <= opts_.int_tol) continue;
        if (v > best + 1e-12) {
          best = v;
          j = b;
        }
      }
      if (j < 0) {
        const bool found = try_incumbent();
        if (opts_.log_interval > 0)
          std::fprintf(stderr, "[dive] integral after %zu fixes: %s\n", touched.size(),
                       found && incumbent_set_ ? "incumbent" : "no");
        break;
      }
      solver_.set_bounds(j, 1.0, 1.0);
      touched.push_back(j);
      if (solver_.reoptimize() != LpStatus::Optimal) {
        if (opts_.log_interval > 0)
          std::fprintf(stderr, "[dive] infeasible after %zu fixes (last var %d)\n",
                       touched.size(), j);
        break;
      }
      if (incumbent_set_ && solver_.objective() >= prune_threshold()) break;
    }
    for (int j : touched) {
      auto it = applied_.find(j);
      if (it != applied_.end()) {
        solver_.set_bounds(j, it->second, it->second);
      } else {
        const Variable& v = model_.variable(j);
        solver_.set_bounds(j, v.lo, v.hi);
      }
    }
  }

  void finish(Solution& sol, SolveStatus status, std::chrono::steady_clock::time_point start) {
    sol.status = status;
    sol.nodes = nodes_processed_;
    sol.pivots = solver_.pivots();
    sol.wall_seconds = elapsed_seconds(start);
    sol.incumbent_history = history_;
    if (incumbent_set_) {
      sol.values = incumbent_;
      sol.objective = incumbent_obj_;
      sol.best_bound = std::min(best_open_bound_, incumbent_obj_);
      sol.gap = std::abs(incumbent_obj_ - sol.best_bound) /
                std::max(1.0, std::abs(incumbent_obj_));
    } else {
      sol.best_bound = best_open_bound_;
    }
  }

  const Model& model_;
  BnbOptions opts_;
  SimplexSolver solver_;
  std::vector<int> binaries_;

  std::vector<Node> nodes_;
  std::vector<std::int64_t> pending_children_;
  std::map<int, int> applied_;     // currently applied branching fixings
  std::map<int, int> global_fix_;  // reduced-cost fixings (valid tree-wide)

  std::vector<double> root_costs_;
  std::vector<int> root_sides_;
  double root_bound_ = -kInf;
  double best_open_bound_ = -kInf;

  bool incumbent_set_ = false;
  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_;
  std::vector<std::pair<std::int64_t, double>> history_;
  std::int64_t nodes_processed_ = 0;
  std::int64_t rescued_nodes_ = 0;
  std::int64_t confirmed_infeasible_ = 0;
};

}  // namespace

Solution branch_and_bound(const Model& m, const BnbOptions& opts) {
  return BranchAndBound(m, opts).run();
}

}  // namespace stlplan::milp
