#pragma once

#include <map>
#include <string>
#include <vector>

#include "stlplan/bezier.hpp"
#include "stlplan/milp.hpp"
#include "stlplan/scenarios.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::encoder {

struct PlanConfig {
  int segments = 15;   // N
  int degree = 5;      // n >= 3 (continuity needs second differences)
  double horizon = 15; // T seconds; dt = T / N
  double rho_star = 0.5;
  double rho_max = 0.0;  // 0: workspace diameter
  double lambda = 1.0;
  double weight_velocity = 0.1;  // per-axis peak-velocity penalty
  double weight_accel = 0.1;     // per-axis peak-acceleration penalty
  std::vector<double> v_max;
  std::vector<double> a_max;
  std::vector<double> start;
  bool pin_start_velocity = true;      // rest start: c_{0,1} = c_{0,0}
  bool pin_start_acceleration = true;  // rest start: zero second difference
  bool pin_end_velocity = false;
  bool allow_short_horizon = false;  // downgrade the horizon check to a warning

  static PlanConfig from_scenario(const scenarios::Scenario& s);
};

// A satisfaction literal: either a model variable in [0,1], or a constant
// folded away during encoding.
struct SatLiteral {
  int var = -1;
  bool is_true = false;
  bool is_false = false;

  static SatLiteral fixed(bool v) { return {-1, v, !v}; }
  static SatLiteral of(int var) { return {var, false, false}; }
  bool constant() const { return is_true || is_false; }
};

// One linear condition coeffs . x >= rhs, used for Big-M groups.
struct LinearCondition {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

struct SegmentVarIndices {
  std::vector<int> control;  // (n+1) x d, index i*d+ax
  std::vector<int> vel;      // d
  std::vector<int> acc;      // d
  int clearance = -1;        // r_k
  int excursion = -1;        // eps_k
};

// Compiles a scenario into a mixed-integer linear model. Build order:
// segment variables and pins at construction, then continuity, dynamics,
// formula, objective (build() runs all of them).
class Encoder {
public:
  Encoder(const scenarios::Scenario& sc, const PlanConfig& cfg);

  int encode_continuity();  // number of equality rows added
  int encode_dynamics();    // number of inequality rows added

  // polarity: true = inside the region, false = outside.
  SatLiteral encode_predicate(int k, const std::string& region, bool inside,
                              bool forced = false);

  // f must be in negation normal form.
  SatLiteral encode_formula(const stl::FormulaPtr& f, int k, bool forced = false);

  // Disjunction over conjunction groups; each group's conditions are relaxed
  // by (1-z)M with M the exact worst violation over the variable box.
  SatLiteral apply_big_m(const std::vector<std::vector<LinearCondition>>& groups,
                         bool forced, const std::string& tag);

  void require(const SatLiteral& lit);  // pin a literal true
  void encode_objective();

  // Full pipeline on the scenario's formula; returns warnings emitted.
  const std::vector<std::string>& build();

  milp::Model& model() { return model_; }
  const milp::Model& model() const { return model_; }
  const std::vector<SegmentVarIndices>& segment_vars() const { return seg_; }
  double dt() const { return dt_; }
  int segments() const { return n_segments_; }
  int degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  struct MemoKey {
    const stl::Formula* node;
    int k;
    bool operator<(const MemoKey& o) const {
      return node != o.node ? node < o.node : k < o.k;
    }
  };

  double axis_lo(std::size_t ax) const;
  double axis_hi(std::size_t ax) const;
  double var_min(int var, double coeff) const;
  double big_m_for(const LinearCondition& c) const;
  void add_relaxed(const LinearCondition& c, const SatLiteral& z, const std::string& name);
  SatLiteral new_literal(const std::string& tag);
  SatLiteral conjunction(const std::vector<SatLiteral>& lits, bool forced,
                         const std::string& tag);
  SatLiteral disjunction(const std::vector<SatLiteral>& lits, bool forced,
                         const std::string& tag);
  void force_true(SatLiteral& lit);
  SatLiteral caps_literal(int k, bool forced);
  void emit_caps_rows(int k, const SatLiteral& z);
  // Segments whose union covers (t + I) for every t in segment k (Always).
  std::pair<int, int> cover_window(int k, const stl::TimeInterval& iv) const;
  // Segments that intersect (t + I) for every t in segment k (Eventually).
  std::pair<int, int> witness_window(int k, const stl::TimeInterval& iv) const;
  // Segments whose start joint lies in (t + I) for every t in segment k
  // (Until: the witness is the joint t_{k'}, so the hold part can stop at
  // segment k'-1 and still cover the closed prefix).
  std::pair<int, int> until_window(int k, const stl::TimeInterval& iv) const;
  void compute_clearance_caps();
  double inside_clearance_cap(const geometry::Polytope& p) const;
  double outside_clearance_cap(const geometry::Polytope& p) const;
  bool outside_row_viable(const geometry::Polytope& p, std::size_t i) const;
  const geometry::Polytope& region(const std::string& name) const;

  const scenarios::Scenario& sc_;
  PlanConfig cfg_;
  milp::Model model_;
  int n_segments_;
  int degree_;
  std::size_t dim_;
  double dt_;
  std::vector<SegmentVarIndices> seg_;
  std::vector<double> clearance_cap_;  // per-segment upper bound on r_k

  std::map<MemoKey, SatLiteral> memo_;
  std::map<int, SatLiteral> caps_;  // per-segment shared cap group literal
  stl::FormulaPtr nnf_;
  std::vector<std::string> warnings_;
  int lit_counter_ = 0;
  int row_counter_ = 0;
  bool built_ = false;
};

struct EncodedModel {
  milp::Model model;
  int segments = 0;
  int degree = 0;
  std::size_t dim = 0;
  double dt = 0.0;
  std::vector<SegmentVarIndices> seg;
  std::vector<std::string> warnings;
};

struct RhoProfile {
  double dt = 0.0;
  std::vector<double> clearance;  // r_k
  std::vector<double> excursion;  // eps_k

  std::size_t size() const { return clearance.size(); }
  double rho(std::size_t k) const { return clearance[k] - excursion[k]; }
  double min_rho() const;
  double max_rho() const;
};

struct DecodedPlan {
  bezier::Trajectory trajectory;
  RhoProfile rho;
};

EncodedModel build(const scenarios::Scenario& sc, const PlanConfig& cfg);
DecodedPlan decode(const EncodedModel& em, const std::vector<double>& values);

}  // namespace stlplan::encoder
