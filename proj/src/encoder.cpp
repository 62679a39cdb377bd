#include "stlplan/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "stlplan/errors.hpp"

namespace stlplan::encoder {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIdxTol = 1e-9;

std::string axis_name(std::size_t ax) {
  static const char* names = "xyzw";
  if (ax < 4) return std::string(1, names[ax]);
  return "q" + std::to_string(ax);
}
}  // namespace

PlanConfig PlanConfig::from_scenario(const scenarios::Scenario& s) {
  PlanConfig c;
  c.segments = s.segments;
  c.degree = s.degree;
  c.horizon = s.horizon;
  c.rho_star = s.rho_star;
  c.rho_max = s.rho_max;
  c.lambda = s.lambda;
  c.weight_velocity = s.weight_velocity;
  c.weight_accel = s.weight_accel;
  c.v_max = s.v_max;
  c.a_max = s.a_max;
  c.start = s.start;
  return c;
}

double RhoProfile::min_rho() const {
  double v = kInf;
  for (std::size_t k = 0; k < size(); ++k) v = std::min(v, rho(k));
  return v;
}

double RhoProfile::max_rho() const {
  double v = -kInf;
  for (std::size_t k = 0; k < size(); ++k) v = std::max(v, rho(k));
  return v;
}

Encoder::Encoder(const scenarios::Scenario& sc, const PlanConfig& cfg) : sc_(sc), cfg_(cfg) {
  n_segments_ = cfg.segments;
  degree_ = cfg.degree;
  dim_ = sc.workspace.dim;
  if (n_segments_ < 1) throw input_error("segment count must be at least 1");
  if (degree_ < 3) throw input_error("degree must be at least 3 for C2 continuity");
  if (!(cfg.horizon > 0.0)) throw input_error("horizon must be positive");
  if (!(cfg.rho_star > 0.0)) throw input_error("rho_star must be positive");
  if (cfg.lambda < 0.0 || cfg.weight_velocity < 0.0 || cfg.weight_accel < 0.0)
    throw input_error("objective weights must be non-negative");
  if (cfg.v_max.size() != dim_ || cfg.a_max.size() != dim_)
    throw input_error("v_max/a_max dimension must match the workspace");
  for (std::size_t ax = 0; ax < dim_; ++ax)
    if (!(cfg.v_max[ax] > 0.0) || !(cfg.a_max[ax] > 0.0))
      throw input_error("v_max and a_max must be positive in every axis");
  if (cfg.start.size() != dim_) throw input_error("start position dimension mismatch");
  if (!sc.workspace.contains(cfg.start, 1e-9))
    throw input_error("start position lies outside the workspace");
  for (const auto& [name, poly] : sc.regions)
    if (poly.dim() != dim_)
      throw input_error("region '" + name + "' dimension does not match the workspace");
  dt_ = cfg.horizon / static_cast<double>(n_segments_);

  nnf_ = stl::to_nnf(sc.formula);
  const double fh = stl::formula_horizon(nnf_);
  if (fh > cfg.horizon + 1e-9) {
    const std::string msg = "formula horizon " + std::to_string(fh) +
                            " exceeds the planning horizon " + std::to_string(cfg.horizon);
    if (cfg.allow_short_horizon)
      warnings_.push_back(msg);
    else
      throw input_error(msg);
  }

  compute_clearance_caps();

  const int n = degree_;
  seg_.resize(static_cast<std::size_t>(n_segments_));
  for (int k = 0; k < n_segments_; ++k) {
    SegmentVarIndices& sv = seg_[static_cast<std::size_t>(k)];
    sv.control.resize(static_cast<std::size_t>(n + 1) * dim_);
    for (int i = 0; i <= n; ++i)
      for (std::size_t ax = 0; ax < dim_; ++ax)
        sv.control[static_cast<std::size_t>(i) * dim_ + ax] = model_.add_variable(
            "c" + std::to_string(k) + "_" + std::to_string(i) + "_" + axis_name(ax),
            axis_lo(ax), axis_hi(ax), milp::VarKind::Continuous, milp::VarCategory::Segment);
    sv.vel.resize(dim_);
    sv.acc.resize(dim_);
    for (std::size_t ax = 0; ax < dim_; ++ax)
      sv.vel[ax] = model_.add_variable("v" + std::to_string(k) + "_" + axis_name(ax), 0.0,
                                       cfg.v_max[ax], milp::VarKind::Continuous,
                                       milp::VarCategory::Segment);
    for (std::size_t ax = 0; ax < dim_; ++ax)
      sv.acc[ax] = model_.add_variable("a" + std::to_string(k) + "_" + axis_name(ax), 0.0,
                                       cfg.a_max[ax], milp::VarKind::Continuous,
                                       milp::VarCategory::Segment);
    const double cap = clearance_cap_[static_cast<std::size_t>(k)];
    if (cap < cfg.rho_star) {
      // A statically required predicate cannot reach the demanded clearance
      // anywhere in the workspace; surface it in the solver.
      sv.clearance = model_.add_variable("r" + std::to_string(k), 0.0,
                                         std::max(cap, 0.0), milp::VarKind::Continuous,
                                         milp::VarCategory::Segment);
      model_.add_constraint("unreachable_clearance" + std::to_string(k), {}, milp::Sense::GE,
                            1.0);
    } else {
      sv.clearance = model_.add_variable("r" + std::to_string(k), cfg.rho_star, cap,
                                         milp::VarKind::Continuous, milp::VarCategory::Segment);
    }
    sv.excursion = model_.add_variable("e" + std::to_string(k), 0.0,
                                       std::max(clearance_cap_[static_cast<std::size_t>(k)] -
                                                    cfg.rho_star,
                                                0.0),
                                       milp::VarKind::Continuous, milp::VarCategory::Segment);
    // rho_k = r_k - eps_k >= rho_star
    model_.add_constraint(
        "rho" + std::to_string(k),
        {{sv.clearance, 1.0}, {sv.excursion, -1.0}}, milp::Sense::GE, cfg.rho_star);
  }

  // Start pins.
  const SegmentVarIndices& s0 = seg_.front();
  for (std::size_t ax = 0; ax < dim_; ++ax)
    model_.set_bounds(s0.control[ax], cfg.start[ax], cfg.start[ax]);
  if (cfg.pin_start_velocity)
    for (std::size_t ax = 0; ax < dim_; ++ax)
      model_.set_bounds(s0.control[dim_ + ax], cfg.start[ax], cfg.start[ax]);
  if (cfg.pin_start_acceleration) {
    for (std::size_t ax = 0; ax < dim_; ++ax) {
      if (cfg.pin_start_velocity) {
        model_.set_bounds(s0.control[2 * dim_ + ax], cfg.start[ax], cfg.start[ax]);
      } else {
        model_.add_constraint("start_acc_" + axis_name(ax),
                              {{s0.control[2 * dim_ + ax], 1.0},
                               {s0.control[dim_ + ax], -2.0},
                               {s0.control[ax], 1.0}},
                              milp::Sense::EQ, 0.0);
      }
    }
  }
  if (cfg.pin_end_velocity) {
    const SegmentVarIndices& sl = seg_.back();
    const std::size_t n_idx = static_cast<std::size_t>(degree_) * dim_;
    for (std::size_t ax = 0; ax < dim_; ++ax)
      model_.add_constraint("end_vel_" + axis_name(ax),
                            {{sl.control[n_idx + ax], 1.0},
                             {sl.control[n_idx - dim_ + ax], -1.0}},
                            milp::Sense::EQ, 0.0);
  }
}

double Encoder::axis_lo(std::size_t ax) const { return sc_.workspace.lo[ax]; }
double Encoder::axis_hi(std::size_t ax) const { return sc_.workspace.hi[ax]; }

double Encoder::var_min(int var, double coeff) const {
  const milp::Variable& v = model_.variable(var);
  return coeff >= 0.0 ? coeff * v.lo : coeff * v.hi;
}

// Exact worst violation of coeffs.x >= rhs over the variable box.
double Encoder::big_m_for(const LinearCondition& c) const {
  double lo = 0.0;
  for (const auto& [j, a] : c.coeffs) lo += var_min(j, a);
  return std::max(0.0, c.rhs - lo);
}

void Encoder::add_relaxed(const LinearCondition& c, const SatLiteral& z,
                          const std::string& name) {
  if (z.is_false) return;  // permanently relaxed
  if (z.is_true) {
    model_.add_constraint(name, c.coeffs, milp::Sense::GE, c.rhs);
    return;
  }
  const double m = big_m_for(c);
  std::vector<std::pair<int, double>> coeffs = c.coeffs;
  coeffs.emplace_back(z.var, -m);
  model_.add_constraint(name, std::move(coeffs), milp::Sense::GE, c.rhs - m);
}

SatLiteral Encoder::new_literal(const std::string& tag) {
  const int var = model_.add_variable("z" + std::to_string(lit_counter_++) + "_" + tag, 0.0,
                                      1.0, milp::VarKind::Continuous, milp::VarCategory::Literal);
  return SatLiteral::of(var);
}

void Encoder::force_true(SatLiteral& lit) {
  if (lit.is_true) return;
  if (lit.is_false) {
    model_.add_constraint("contradiction" + std::to_string(row_counter_++), {}, milp::Sense::GE,
                          1.0);
    return;
  }
  model_.set_bounds(lit.var, 1.0, 1.0);
}

SatLiteral Encoder::conjunction(const std::vector<SatLiteral>& lits, bool forced,
                                const std::string& tag) {
  std::vector<SatLiteral> vars;
  for (const SatLiteral& l : lits) {
    if (l.is_false) {
      if (forced) {
        SatLiteral f = SatLiteral::fixed(false);
        force_true(f);
      }
      return SatLiteral::fixed(false);
    }
    if (!l.is_true) vars.push_back(l);
  }
  if (forced) {
    // Children were already encoded forced; nothing further to emit.
    for (SatLiteral& l : vars) force_true(l);
    return SatLiteral::fixed(true);
  }
  if (vars.empty()) return SatLiteral::fixed(true);
  if (vars.size() == 1) return vars[0];
  SatLiteral z = new_literal(tag);
  for (const SatLiteral& l : vars)
    model_.add_constraint("imp" + std::to_string(row_counter_++),
                          {{z.var, 1.0}, {l.var, -1.0}}, milp::Sense::LE, 0.0);
  return z;
}

SatLiteral Encoder::disjunction(const std::vector<SatLiteral>& lits, bool forced,
                                const std::string& tag) {
  std::vector<SatLiteral> alive;
  for (const SatLiteral& l : lits) {
    if (l.is_true) return SatLiteral::fixed(true);
    if (!l.is_false) alive.push_back(l);
  }
  if (alive.empty()) {
    SatLiteral f = SatLiteral::fixed(false);
    if (forced) force_true(f);
    return f;
  }
  if (alive.size() == 1) {
    if (forced) force_true(alive[0]);
    return alive[0];
  }
  std::vector<std::pair<int, double>> cover;
  for (std::size_t c = 0; c < alive.size(); ++c) {
    const int s = model_.add_variable("s" + std::to_string(lit_counter_++) + "_" + tag, 0.0, 1.0,
                                      milp::VarKind::Binary, milp::VarCategory::Selector);
    model_.add_constraint("sel" + std::to_string(row_counter_++),
                          {{s, 1.0}, {alive[c].var, -1.0}}, milp::Sense::LE, 0.0);
    cover.emplace_back(s, 1.0);
  }
  if (forced) {
    model_.add_constraint("cover" + std::to_string(row_counter_++), std::move(cover),
                          milp::Sense::GE, 1.0);
    return SatLiteral::fixed(true);
  }
  SatLiteral z = new_literal(tag);
  cover.emplace_back(z.var, -1.0);
  model_.add_constraint("cover" + std::to_string(row_counter_++), std::move(cover),
                        milp::Sense::GE, 0.0);
  return z;
}

SatLiteral Encoder::apply_big_m(const std::vector<std::vector<LinearCondition>>& groups,
                                bool forced, const std::string& tag) {
  if (groups.empty()) {
    SatLiteral f = SatLiteral::fixed(false);
    if (forced) force_true(f);
    return f;
  }
  if (groups.size() == 1) {
    if (forced) {
      for (const LinearCondition& c : groups[0])
        model_.add_constraint(tag + "_" + std::to_string(row_counter_++), c.coeffs,
                              milp::Sense::GE, c.rhs);
      return SatLiteral::fixed(true);
    }
    SatLiteral z = new_literal(tag);
    for (const LinearCondition& c : groups[0])
      add_relaxed(c, z, tag + "_" + std::to_string(row_counter_++));
    return z;
  }
  std::vector<std::pair<int, double>> cover;
  for (const auto& group : groups) {
    const int s = model_.add_variable("s" + std::to_string(lit_counter_++) + "_" + tag, 0.0, 1.0,
                                      milp::VarKind::Binary, milp::VarCategory::Selector);
    const SatLiteral sl = SatLiteral::of(s);
    for (const LinearCondition& c : group)
      add_relaxed(c, sl, tag + "_" + std::to_string(row_counter_++));
    cover.emplace_back(s, 1.0);
  }
  if (forced) {
    model_.add_constraint("cover" + std::to_string(row_counter_++), std::move(cover),
                          milp::Sense::GE, 1.0);
    return SatLiteral::fixed(true);
  }
  SatLiteral z = new_literal(tag);
  cover.emplace_back(z.var, -1.0);
  model_.add_constraint("cover" + std::to_string(row_counter_++), std::move(cover),
                        milp::Sense::GE, 0.0);
  return z;
}

SatLiteral Encoder::caps_literal(int k, bool forced) {
  auto it = caps_.find(k);
  if (it != caps_.end()) {
    if (forced) force_true(it->second);
    return it->second;
  }
  SatLiteral z = forced ? SatLiteral::fixed(true) : new_literal("cap" + std::to_string(k));
  emit_caps_rows(k, z);
  caps_.emplace(k, z);
  return z;
}

// Shared per-segment group: first/last control edge caps and the per-axis
// excursion cap linking eps_k to a_k.
void Encoder::emit_caps_rows(int k, const SatLiteral& z) {
  const SegmentVarIndices& sv = seg_[static_cast<std::size_t>(k)];
  const int n = degree_;
  const double edge = dt_ * dt_ / (2.0 * static_cast<double>(n));
  const double exc = 8.0 / (3.0 * std::sqrt(static_cast<double>(dim_)) * dt_ * dt_);
  const std::string base = "cap" + std::to_string(k) + "_";
  for (int jj : {1, n}) {
    for (std::size_t ax = 0; ax < dim_; ++ax) {
      const int cj = sv.control[static_cast<std::size_t>(jj) * dim_ + ax];
      const int cp = sv.control[static_cast<std::size_t>(jj - 1) * dim_ + ax];
      for (double sign : {1.0, -1.0}) {
        LinearCondition c;
        c.coeffs = {{sv.acc[ax], edge}, {cj, -sign}, {cp, sign}};
        c.rhs = 0.0;
        add_relaxed(c, z, base + std::to_string(row_counter_++));
      }
    }
  }
  for (std::size_t ax = 0; ax < dim_; ++ax) {
    LinearCondition c;
    c.coeffs = {{sv.excursion, exc}, {sv.acc[ax], -1.0}};
    c.rhs = 0.0;
    add_relaxed(c, z, base + std::to_string(row_counter_++));
  }
}

const geometry::Polytope& Encoder::region(const std::string& name) const {
  auto it = sc_.regions.find(name);
  if (it == sc_.regions.end()) throw input_error("unknown region '" + name + "'");
  return it->second;
}

bool Encoder::outside_row_viable(const geometry::Polytope& p, std::size_t i) const {
  // Can any workspace point sit at clearance >= rho_star beyond face i?
  std::vector<double> hn = p.unit_row(i);
  return sc_.workspace.support(hn) - p.unit_offset(i) >= cfg_.rho_star - 1e-12;
}

double Encoder::inside_clearance_cap(const geometry::Polytope& p) const {
  double cap = kInf;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::vector<double> neg = p.unit_row(i);
    for (double& v : neg) v = -v;
    cap = std::min(cap, p.unit_offset(i) + sc_.workspace.support(neg));
  }
  return cap;
}

double Encoder::outside_clearance_cap(const geometry::Polytope& p) const {
  double cap = -kInf;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    if (!outside_row_viable(p, i)) continue;
    cap = std::max(cap, sc_.workspace.support(p.unit_row(i)) - p.unit_offset(i));
  }
  return cap;
}

std::pair<int, int> Encoder::cover_window(int k, const stl::TimeInterval& iv) const {
  const int lo = k + static_cast<int>(std::floor(iv.a / dt_ + kIdxTol));
  const int hi =
      std::min(k + 1 + static_cast<int>(std::floor(iv.b / dt_ + kIdxTol)), n_segments_ - 1);
  return {lo, hi};
}

std::pair<int, int> Encoder::witness_window(int k, const stl::TimeInterval& iv) const {
  const int lo = k + static_cast<int>(std::ceil(iv.a / dt_ - kIdxTol));
  const int hi = std::min(k + static_cast<int>(std::floor(iv.b / dt_ + kIdxTol)),
                          n_segments_ - 1);
  return {lo, hi};
}

std::pair<int, int> Encoder::until_window(int k, const stl::TimeInterval& iv) const {
  const int lo = k + 1 + static_cast<int>(std::ceil(iv.a / dt_ - kIdxTol));
  const int hi = std::min(k + static_cast<int>(std::floor(iv.b / dt_ + kIdxTol)),
                          n_segments_ - 1);
  return {lo, hi};
}

void Encoder::compute_clearance_caps() {
  const double base = cfg_.rho_max > 0.0 ? cfg_.rho_max : sc_.workspace.diameter();
  clearance_cap_.assign(static_cast<std::size_t>(n_segments_), base);
  std::set<std::pair<const stl::Formula*, int>> visited;

  // Collect predicates that every feasible plan must honor (reached from the
  // root through conjunctions and Always windows only).
  auto walk = [&](auto&& self, const stl::Formula& f, int k) -> void {
    if (k >= n_segments_) return;
    if (!visited.emplace(&f, k).second) return;
    switch (f.kind) {
      case stl::Kind::Pred:
      case stl::Kind::NegPred: {
        const geometry::Polytope& p = region(f.region);
        const double cap = f.kind == stl::Kind::Pred ? inside_clearance_cap(p)
                                                     : outside_clearance_cap(p);
        auto& c = clearance_cap_[static_cast<std::size_t>(k)];
        if (cap > -kInf) c = std::min(c, cap);
        break;
      }
      case stl::Kind::And:
        for (const auto& ch : f.children) self(self, *ch, k);
        break;
      case stl::Kind::Always: {
        auto [lo, hi] = cover_window(k, f.interval);
        for (int j = lo; j <= hi && j < n_segments_; ++j) self(self, *f.children[0], j);
        break;
      }
      default:
        break;  // disjunctive structure: nothing is statically required
    }
  };
  walk(walk, *nnf_, 0);
}

SatLiteral Encoder::encode_predicate(int k, const std::string& region_name, bool inside,
                                     bool forced) {
  if (k < 0 || k >= n_segments_) throw input_error("segment index out of range");
  const geometry::Polytope& p = region(region_name);
  const SegmentVarIndices& sv = seg_[static_cast<std::size_t>(k)];
  const int n = degree_;
  const std::string tag =
      (inside ? "in_" : "out_") + region_name + "_k" + std::to_string(k);

  SatLiteral lit;
  if (inside) {
    std::vector<LinearCondition> group;
    for (int jj : {0, n}) {
      for (std::size_t i = 0; i < p.rows(); ++i) {
        LinearCondition c;
        const auto hn = p.unit_row(i);
        for (std::size_t ax = 0; ax < dim_; ++ax)
          c.coeffs.emplace_back(sv.control[static_cast<std::size_t>(jj) * dim_ + ax], -hn[ax]);
        c.coeffs.emplace_back(sv.clearance, -1.0);
        c.rhs = -p.unit_offset(i);
        group.push_back(std::move(c));
      }
    }
    lit = apply_big_m({group}, forced, tag);
  } else {
    std::vector<std::vector<LinearCondition>> groups;
    for (std::size_t i = 0; i < p.rows(); ++i) {
      if (!outside_row_viable(p, i)) continue;
      std::vector<LinearCondition> group;
      const auto hn = p.unit_row(i);
      for (int jj : {0, n}) {
        LinearCondition c;
        for (std::size_t ax = 0; ax < dim_; ++ax)
          c.coeffs.emplace_back(sv.control[static_cast<std::size_t>(jj) * dim_ + ax], hn[ax]);
        c.coeffs.emplace_back(sv.clearance, -1.0);
        c.rhs = p.unit_offset(i);
        group.push_back(std::move(c));
      }
      groups.push_back(std::move(group));
    }
    lit = apply_big_m(groups, forced, tag);
  }

  SatLiteral caps = caps_literal(k, forced || lit.is_true);
  if (!lit.constant() && !caps.constant())
    model_.add_constraint("impcap" + std::to_string(row_counter_++),
                          {{lit.var, 1.0}, {caps.var, -1.0}}, milp::Sense::LE, 0.0);
  return lit;
}

SatLiteral Encoder::encode_formula(const stl::FormulaPtr& f, int k, bool forced) {
  if (!f) throw input_error("null formula");
  if (!stl::is_nnf(*f))
    throw input_error("formula must be in negation normal form before encoding");
  if (k < 0 || k >= n_segments_) throw input_error("segment index out of range");
  const MemoKey key{f.get(), k};
  if (auto it = memo_.find(key); it != memo_.end()) {
    if (forced) force_true(it->second);
    return it->second;
  }

  SatLiteral lit;
  switch (f->kind) {
    case stl::Kind::True:
      lit = SatLiteral::fixed(true);
      break;
    case stl::Kind::Pred:
      lit = encode_predicate(k, f->region, true, forced);
      break;
    case stl::Kind::NegPred:
      lit = encode_predicate(k, f->region, false, forced);
      break;
    case stl::Kind::And: {
      std::vector<SatLiteral> parts;
      parts.reserve(f->children.size());
      for (const auto& ch : f->children) parts.push_back(encode_formula(ch, k, forced));
      lit = conjunction(parts, forced, "and_k" + std::to_string(k));
      break;
    }
    case stl::Kind::Or: {
      std::vector<SatLiteral> parts;
      parts.reserve(f->children.size());
      for (const auto& ch : f->children) parts.push_back(encode_formula(ch, k, false));
      lit = disjunction(parts, forced, "or_k" + std::to_string(k));
      break;
    }
    case stl::Kind::Always: {
      auto [lo, hi] = cover_window(k, f->interval);
      if (lo >= n_segments_) {
        warnings_.push_back("empty Always window at segment " + std::to_string(k) +
                            "; treated as vacuously true");
        lit = SatLiteral::fixed(true);
        break;
      }
      std::vector<SatLiteral> parts;
      for (int j = lo; j <= hi; ++j) parts.push_back(encode_formula(f->children[0], j, forced));
      lit = conjunction(parts, forced, "alw_k" + std::to_string(k));
      break;
    }
    case stl::Kind::Eventually: {
      auto [lo, hi] = witness_window(k, f->interval);
      if (lo > hi) {
        lit = SatLiteral::fixed(false);
        if (forced) {
          warnings_.push_back("Eventually at segment " + std::to_string(k) +
                              " admits no witness segment inside the horizon");
          force_true(lit);
        }
        break;
      }
      std::vector<SatLiteral> parts;
      for (int j = lo; j <= hi; ++j) parts.push_back(encode_formula(f->children[0], j, false));
      lit = disjunction(parts, forced, "evt_k" + std::to_string(k));
      break;
    }
    case stl::Kind::Until: {
      auto [lo, hi] = until_window(k, f->interval);
      if (lo > hi) {
        lit = SatLiteral::fixed(false);
        if (forced) {
          warnings_.push_back("Until at segment " + std::to_string(k) +
                              " admits no witness segment inside the horizon");
          force_true(lit);
        }
        break;
      }
      std::vector<SatLiteral> branches;
      for (int kp = std::max(lo, k); kp <= hi; ++kp) {
        std::vector<SatLiteral> parts;
        parts.push_back(encode_formula(f->children[1], kp, false));
        for (int kpp = k; kpp < kp; ++kpp)
          parts.push_back(encode_formula(f->children[0], kpp, false));
        branches.push_back(
            conjunction(parts, false, "untb" + std::to_string(kp) + "_k" + std::to_string(k)));
      }
      lit = disjunction(branches, forced, "unt_k" + std::to_string(k));
      break;
    }
    case stl::Kind::Not:
      throw input_error("unreachable: NNF has no negation nodes");
  }
  memo_.emplace(key, lit);
  return lit;
}

int Encoder::encode_continuity() {
  const int n = degree_;
  int count = 0;
  for (int k = 0; k + 1 < n_segments_; ++k) {
    const SegmentVarIndices& a = seg_[static_cast<std::size_t>(k)];
    const SegmentVarIndices& b = seg_[static_cast<std::size_t>(k + 1)];
    const std::string base = "ct" + std::to_string(k) + "_";
    for (std::size_t ax = 0; ax < dim_; ++ax) {
      const auto c = [&](const SegmentVarIndices& s, int i) {
        return s.control[static_cast<std::size_t>(i) * dim_ + ax];
      };
      model_.add_constraint(base + "p_" + axis_name(ax),
                            {{c(a, n), 1.0}, {c(b, 0), -1.0}}, milp::Sense::EQ, 0.0);
      model_.add_constraint(base + "v_" + axis_name(ax),
                            {{c(a, n), 1.0}, {c(a, n - 1), -1.0}, {c(b, 1), -1.0}, {c(b, 0), 1.0}},
                            milp::Sense::EQ, 0.0);
      model_.add_constraint(base + "a_" + axis_name(ax),
                            {{c(a, n), 1.0},
                             {c(a, n - 1), -2.0},
                             {c(a, n - 2), 1.0},
                             {c(b, 2), -1.0},
                             {c(b, 1), 2.0},
                             {c(b, 0), -1.0}},
                            milp::Sense::EQ, 0.0);
      count += 3;
    }
  }
  return count;
}

int Encoder::encode_dynamics() {
  const int n = degree_;
  int count = 0;
  const double vstep = dt_ / static_cast<double>(n);
  const double astep = dt_ * dt_ / static_cast<double>(n * (n - 1));
  for (int k = 0; k < n_segments_; ++k) {
    const SegmentVarIndices& sv = seg_[static_cast<std::size_t>(k)];
    const std::string base = "dyn" + std::to_string(k) + "_";
    for (std::size_t ax = 0; ax < dim_; ++ax) {
      const auto c = [&](int i) { return sv.control[static_cast<std::size_t>(i) * dim_ + ax]; };
      for (int i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
          model_.add_constraint(
              base + "v" + std::to_string(i) + "_" + axis_name(ax) + (sign > 0 ? "p" : "m"),
              {{sv.vel[ax], vstep}, {c(i + 1), -sign}, {c(i), sign}}, milp::Sense::GE, 0.0);
          ++count;
        }
      }
      for (int i = 0; i + 2 <= n; ++i) {
        for (double sign : {1.0, -1.0}) {
          model_.add_constraint(
              base + "a" + std::to_string(i) + "_" + axis_name(ax) + (sign > 0 ? "p" : "m"),
              {{sv.acc[ax], astep}, {c(i + 2), -sign}, {c(i + 1), 2.0 * sign}, {c(i), -sign}},
              milp::Sense::GE, 0.0);
          ++count;
        }
      }
    }
  }
  return count;
}

void Encoder::require(const SatLiteral& lit) {
  SatLiteral l = lit;
  force_true(l);
}

void Encoder::encode_objective() {
  for (int k = 0; k < n_segments_; ++k) {
    const SegmentVarIndices& sv = seg_[static_cast<std::size_t>(k)];
    model_.add_objective_coeff(sv.clearance, -cfg_.lambda);
    model_.add_objective_coeff(sv.excursion, cfg_.lambda);
    for (std::size_t ax = 0; ax < dim_; ++ax) {
      model_.add_objective_coeff(sv.vel[ax], cfg_.weight_velocity);
      model_.add_objective_coeff(sv.acc[ax], cfg_.weight_accel);
    }
  }
}

const std::vector<std::string>& Encoder::build() {
  if (built_) return warnings_;
  encode_continuity();
  encode_dynamics();
  SatLiteral root = encode_formula(nnf_, 0, true);
  require(root);
  encode_objective();
  built_ = true;
  return warnings_;
}

EncodedModel build(const scenarios::Scenario& sc, const PlanConfig& cfg) {
  Encoder enc(sc, cfg);
  enc.build();
  EncodedModel em;
  em.segments = enc.segments();
  em.degree = enc.degree();
  em.dim = enc.dim();
  em.dt = enc.dt();
  em.seg = enc.segment_vars();
  em.warnings = enc.warnings();
  em.model = std::move(enc.model());
  return em;
}

DecodedPlan decode(const EncodedModel& em, const std::vector<double>& values) {
  if (values.size() != em.model.num_variables())
    throw input_error("solution size does not match the model");
  std::vector<bezier::Segment> segs;
  segs.reserve(static_cast<std::size_t>(em.segments));
  RhoProfile rho;
  rho.dt = em.dt;
  for (int k = 0; k < em.segments; ++k) {
    const SegmentVarIndices& sv = em.seg[static_cast<std::size_t>(k)];
    std::vector<double> controls(sv.control.size());
    for (std::size_t idx = 0; idx < sv.control.size(); ++idx)
      controls[idx] = values[static_cast<std::size_t>(sv.control[idx])];
    segs.emplace_back(em.degree, em.dim, std::move(controls),
                      static_cast<double>(k) * em.dt, em.dt);
    rho.clearance.push_back(values[static_cast<std::size_t>(sv.clearance)]);
    rho.excursion.push_back(values[static_cast<std::size_t>(sv.excursion)]);
  }
  return {bezier::Trajectory(std::move(segs)), std::move(rho)};
}

}  // namespace stlplan::encoder
