#include <cmath>
#include <set>

#include "doctest.h"
#include "stlplan/encoder.hpp"
#include "stlplan/errors.hpp"
#include "stlplan/milp.hpp"
#include "stlplan/scenarios.hpp"

using namespace stlplan;
using encoder::Encoder;
using encoder::LinearCondition;
using encoder::PlanConfig;
using encoder::SatLiteral;

namespace {

scenarios::Scenario tiny_scenario(const std::string& formula) {
  scenarios::Scenario s;
  s.name = "tiny";
  s.workspace = geometry::Workspace({0.0, 0.0}, {10.0, 10.0});
  s.regions.emplace("R", geometry::Polytope::box({4.0, 4.0}, {7.0, 7.0}));
  s.regions.emplace("Obs", geometry::Polytope::box({4.0, 1.0}, {6.0, 2.5}));
  s.formula_text = formula;
  s.formula = stl::parse(formula);
  s.horizon = 10.0;
  s.segments = 10;
  s.degree = 5;
  s.rho_star = 0.3;
  s.v_max = {3.0, 3.0};
  s.a_max = {5.0, 5.0};
  s.start = {1.0, 1.0};
  return s;
}

PlanConfig config_for(const scenarios::Scenario& s) { return PlanConfig::from_scenario(s); }

// Independent count of the binaries the encoding should introduce, by the
// same memoized recursion over the formula tree.
struct BinaryCountOracle {
  const scenarios::Scenario& sc;
  int segments;
  double dt;
  std::set<std::pair<const stl::Formula*, int>> seen;

  int viable_rows(const geometry::Polytope& p) const {
    int v = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
      if (sc.workspace.support(p.unit_row(i)) - p.unit_offset(i) >= sc.rho_star - 1e-12) ++v;
    return v;
  }

  std::pair<int, int> cover_window(int k, const stl::TimeInterval& iv) const {
    const int lo = k + static_cast<int>(std::floor(iv.a / dt + 1e-9));
    const int hi = std::min(k + 1 + static_cast<int>(std::floor(iv.b / dt + 1e-9)), segments - 1);
    return {lo, hi};
  }
  std::pair<int, int> witness_window(int k, const stl::TimeInterval& iv) const {
    const int lo = k + static_cast<int>(std::ceil(iv.a / dt - 1e-9));
    const int hi = std::min(k + static_cast<int>(std::floor(iv.b / dt + 1e-9)), segments - 1);
    return {lo, hi};
  }
  std::pair<int, int> until_window(int k, const stl::TimeInterval& iv) const {
    const int lo = k + 1 + static_cast<int>(std::ceil(iv.a / dt - 1e-9));
    const int hi = std::min(k + static_cast<int>(std::floor(iv.b / dt + 1e-9)), segments - 1);
    return {lo, hi};
  }

  long count(const stl::Formula& f, int k) {
    if (!seen.emplace(&f, k).second) return 0;
    switch (f.kind) {
      case stl::Kind::True:
        return 0;
      case stl::Kind::Pred:
        return 0;
      case stl::Kind::NegPred: {
        const int v = viable_rows(sc.regions.at(f.region));
        return v >= 2 ? v : 0;
      }
      case stl::Kind::And: {
        long total = 0;
        for (const auto& c : f.children) total += count(*c, k);
        return total;
      }
      case stl::Kind::Or: {
        long total = f.children.size() >= 2 ? static_cast<long>(f.children.size()) : 0;
        for (const auto& c : f.children) total += count(*c, k);
        return total;
      }
      case stl::Kind::Always: {
        auto [lo, hi] = cover_window(k, f.interval);
        long total = 0;
        for (int j = lo; j <= hi && j < segments; ++j) total += count(*f.children[0], j);
        return total;
      }
      case stl::Kind::Eventually: {
        auto [lo, hi] = witness_window(k, f.interval);
        if (lo > hi) return 0;
        long total = (hi - lo + 1) >= 2 ? (hi - lo + 1) : 0;
        for (int j = lo; j <= hi; ++j) total += count(*f.children[0], j);
        return total;
      }
      case stl::Kind::Until: {
        auto [lo, hi] = until_window(k, f.interval);
        if (lo > hi) return 0;
        const int branches = hi - std::max(lo, k) + 1;
        long total = branches >= 2 ? branches : 0;
        for (int kp = std::max(lo, k); kp <= hi; ++kp) {
          total += count(*f.children[1], kp);
          for (int kpp = k; kpp < kp; ++kpp) total += count(*f.children[0], kpp);
        }
        return total;
      }
      case stl::Kind::Not:
        return 0;
    }
    return 0;
  }
};

}  // namespace

TEST_CASE("continuity constraint counts") {
  {
    scenarios::Scenario s = tiny_scenario("True");
    s.segments = 2;
    s.horizon = 2.0;
    Encoder enc(s, config_for(s));
    CHECK(enc.encode_continuity() == 6);  // 3 * d * (N-1)
  }
  {
    scenarios::Scenario s = tiny_scenario("True");
    s.segments = 1;
    s.horizon = 1.0;
    Encoder enc(s, config_for(s));
    CHECK(enc.encode_continuity() == 0);
  }
}

TEST_CASE("dynamics constraint counts for one segment") {
  scenarios::Scenario s = tiny_scenario("True");
  s.segments = 1;
  s.horizon = 1.0;
  Encoder enc(s, config_for(s));
  const std::size_t before = enc.model().num_constraints();
  const int added = enc.encode_dynamics();
  CHECK(added == 36);  // 2*2*5 velocity + 2*2*4 acceleration
  CHECK(enc.model().num_constraints() - before == 36);
}

TEST_CASE("a stationary point satisfies dynamics and caps") {
  scenarios::Scenario s = tiny_scenario("True");
  Encoder enc(s, config_for(s));
  enc.encode_continuity();
  enc.encode_dynamics();
  enc.encode_objective();
  const milp::Solution sol = milp::solve_lp(enc.model());
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(!enc.model().check_assignment(sol.values, 1e-6));
}

TEST_CASE("forced inside-predicate yields end control margins at least r") {
  scenarios::Scenario s = tiny_scenario("True");
  s.segments = 1;
  s.horizon = 1.0;
  s.start = {5.0, 5.0};  // inside R so the pinned start is satisfiable
  Encoder enc(s, config_for(s));
  enc.encode_dynamics();
  enc.encode_predicate(0, "R", true, true);
  enc.encode_objective();  // maximizes r - eps
  const milp::Solution sol = milp::solve_lp(enc.model());
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  const auto& sv = enc.segment_vars()[0];
  const double r = sol.values[static_cast<std::size_t>(sv.clearance)];
  const geometry::Polytope& region = s.regions.at("R");
  for (int jj : {0, 5}) {
    std::vector<double> pt{sol.values[static_cast<std::size_t>(sv.control[jj * 2])],
                           sol.values[static_cast<std::size_t>(sv.control[jj * 2 + 1])]};
    CHECK(region.normalized_margin(pt) >= r - 1e-6);
  }
  CHECK(r >= s.rho_star);
}

TEST_CASE("outside encoding of an interior box introduces exactly Row(H) binaries") {
  scenarios::Scenario s = tiny_scenario("True");
  Encoder enc(s, config_for(s));
  const std::size_t before = enc.model().num_binaries();
  enc.encode_predicate(2, "Obs", false, false);
  CHECK(enc.model().num_binaries() - before == 4);
}

TEST_CASE("eventually over m segments introduces m binaries and one cover row") {
  scenarios::Scenario s = tiny_scenario("F[0,3] R");
  Encoder enc(s, config_for(s));
  const std::size_t rows_before = enc.model().num_constraints();
  const std::size_t bin_before = enc.model().num_binaries();
  enc.encode_formula(s.formula, 0, false);
  // sound witness window [0, 3]: four witnesses
  CHECK(enc.model().num_binaries() - bin_before == 4);
  std::size_t covers = 0;
  for (std::size_t i = rows_before; i < enc.model().num_constraints(); ++i)
    if (enc.model().constraint(static_cast<int>(i)).name.rfind("cover", 0) == 0) ++covers;
  CHECK(covers == 1);
}

TEST_CASE("memoized literals are identical") {
  scenarios::Scenario s = tiny_scenario("F[0,3] R");
  Encoder enc(s, config_for(s));
  const SatLiteral a = enc.encode_formula(s.formula, 0, false);
  const std::size_t vars = enc.model().num_variables();
  const SatLiteral b = enc.encode_formula(s.formula, 0, false);
  CHECK(a.var == b.var);
  CHECK(enc.model().num_variables() == vars);  // nothing new was created
}

TEST_CASE("apply_big_m group shapes") {
  scenarios::Scenario s = tiny_scenario("True");
  s.segments = 1;
  s.horizon = 1.0;
  Encoder enc(s, config_for(s));
  const auto& sv = enc.segment_vars()[0];
  LinearCondition c1{{{sv.control[0], 1.0}}, 2.0};   // c_{0,0,x} >= 2
  LinearCondition c2{{{sv.control[0], -1.0}}, -8.0}; // c_{0,0,x} <= 8

  const std::size_t bin0 = enc.model().num_binaries();
  const std::size_t rows0 = enc.model().num_constraints();
  SatLiteral single = enc.apply_big_m({{c1, c2}}, true, "hardgrp");
  CHECK(single.is_true);
  CHECK(enc.model().num_binaries() == bin0);  // zero binaries
  CHECK(enc.model().num_constraints() == rows0 + 2);

  SatLiteral both = enc.apply_big_m({{c1}, {c2}}, true, "twogrp");
  CHECK(both.is_true);
  CHECK(enc.model().num_binaries() == bin0 + 2);
}

TEST_CASE("big-M relaxations are inactive at every box vertex when unselected") {
  scenarios::Scenario s = tiny_scenario("True");
  s.segments = 1;
  s.horizon = 1.0;
  Encoder enc(s, config_for(s));
  const auto& sv = enc.segment_vars()[0];
  // conditions over two control coordinates
  LinearCondition c1{{{sv.control[4], 1.0}, {sv.control[5], 2.0}}, 12.0};
  LinearCondition c2{{{sv.control[4], -3.0}, {sv.control[5], 1.0}}, 4.0};
  const std::size_t rows0 = enc.model().num_constraints();
  enc.apply_big_m({{c1}, {c2}}, false, "vtx");
  const milp::Model& m = enc.model();
  for (std::size_t i = rows0; i < m.num_constraints(); ++i) {
    const milp::Constraint& row = m.constraint(static_cast<int>(i));
    if (row.name.rfind("vtx", 0) != 0) continue;
    // evaluate at all vertices of the bounds box of the referenced variables,
    // with every selector/literal at zero
    std::vector<int> vars;
    for (const auto& [j, a] : row.coeffs)
      if (m.variable(j).kind == milp::VarKind::Continuous &&
          m.variable(j).category == milp::VarCategory::Segment)
        vars.push_back(j);
    const std::size_t combos = std::size_t{1} << vars.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      double act = 0.0;
      for (const auto& [j, a] : row.coeffs) {
        const auto it = std::find(vars.begin(), vars.end(), j);
        if (it == vars.end()) continue;  // selector at 0
        const auto bit = static_cast<std::size_t>(it - vars.begin());
        const milp::Variable& v = m.variable(j);
        act += a * ((mask >> bit) & 1 ? v.hi : v.lo);
      }
      CHECK(act >= row.rhs - 1e-9);
    }
  }
}

TEST_CASE("objective with zero lambda admits a near-zero stationary optimum") {
  scenarios::Scenario s = tiny_scenario("True");
  s.lambda = 0.0;
  encoder::EncodedModel em = encoder::build(s, config_for(s));
  const milp::Solution sol = milp::branch_and_bound(em.model);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("build on True produces no satisfaction constraints and is feasible") {
  scenarios::Scenario s = tiny_scenario("True");
  encoder::EncodedModel em = encoder::build(s, config_for(s));
  CHECK(em.model.num_binaries() == 0);
  const milp::Solution sol = milp::branch_and_bound(em.model);
  CHECK(sol.status == milp::SolveStatus::Optimal);
}

TEST_CASE("continuous segment-variable count matches the closed form") {
  scenarios::Scenario s = tiny_scenario("G[0,10] !Obs & F[0,8] G[0,2] R");
  encoder::EncodedModel em = encoder::build(s, config_for(s));
  const std::size_t d = 2, n = 5, N = 10;
  CHECK(em.model.count_category(milp::VarCategory::Segment) == N * (d * (n + 1) + 2 * d + 2));
}

TEST_CASE("binary count grows linearly in the segment count") {
  std::vector<std::size_t> counts;
  for (int n_seg : {10, 20, 40}) {
    scenarios::Scenario s = tiny_scenario("G[0,10] !Obs & F[0,8] G[0,2] R");
    s.segments = n_seg;
    encoder::EncodedModel em = encoder::build(s, config_for(s));
    counts.push_back(em.model.num_binaries());
  }
  // fit the origin-offset line b = a*N + c through the two extremes
  const double slope = static_cast<double>(counts[2] - counts[0]) / 30.0;
  const double icept = static_cast<double>(counts[0]) - slope * 10.0;
  const double predicted = slope * 20.0 + icept;
  CHECK(std::abs(predicted - static_cast<double>(counts[1])) / static_cast<double>(counts[1]) <
        0.05);
}

TEST_CASE("door-puzzle binary count matches the symbolic oracle") {
  scenarios::Scenario s = scenarios::builtin("door-puzzle");
  encoder::EncodedModel em = encoder::build(s, PlanConfig::from_scenario(s));
  BinaryCountOracle oracle{s, s.segments, s.horizon / s.segments, {}};
  const long expect = oracle.count(*stl::to_nnf(s.formula), 0);
  CHECK(static_cast<long>(em.model.num_binaries()) == expect);
}

TEST_CASE("horizon violations error unless overridden") {
  scenarios::Scenario s = tiny_scenario("F[0,20] R");
  CHECK_THROWS_AS(Encoder(s, config_for(s)), input_error);
  PlanConfig cfg = config_for(s);
  cfg.allow_short_horizon = true;
  Encoder enc(s, cfg);
  CHECK(enc.warnings().size() == 1);
}

TEST_CASE("unknown region names fail") {
  scenarios::Scenario s = tiny_scenario("True");
  Encoder enc(s, config_for(s));
  CHECK_THROWS_AS(enc.encode_predicate(0, "nope", true, false), input_error);
}
