#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "stlplan/errors.hpp"
#include "stlplan/milp.hpp"
#include "stlplan/verifier.hpp"

using namespace stlplan;
using verifier::VerificationReport;
using verifier::VerifyOptions;

namespace {

scenarios::Scenario simple_scenario(const std::string& formula, double rho_star) {
  scenarios::Scenario s;
  s.name = "verif";
  s.workspace = geometry::Workspace({0.0, 0.0}, {10.0, 10.0});
  s.regions.emplace("Goal", geometry::Polytope::box({4.0, 4.0}, {7.0, 7.0}));
  s.regions.emplace("Obs", geometry::Polytope::box({4.0, 1.0}, {7.0, 3.0}));
  s.formula_text = formula;
  s.formula = stl::parse(formula);
  s.horizon = 8.0;
  s.segments = 8;
  s.rho_star = rho_star;
  s.v_max = {3.0, 3.0};
  s.a_max = {5.0, 5.0};
  s.start = {5.5, 5.5};
  return s;
}

bezier::Trajectory constant_trajectory(const std::vector<double>& p, std::size_t n_seg,
                                       double dt, int degree = 5) {
  std::vector<bezier::Segment> segs;
  for (std::size_t k = 0; k < n_seg; ++k) {
    std::vector<double> ctrl;
    for (int i = 0; i <= degree; ++i) ctrl.insert(ctrl.end(), p.begin(), p.end());
    segs.emplace_back(degree, p.size(), std::move(ctrl), static_cast<double>(k) * dt, dt);
  }
  return bezier::Trajectory(std::move(segs));
}

// constant-velocity straight line, exactly C2 across joints
bezier::Trajectory line_trajectory(const std::vector<double>& from,
                                   const std::vector<double>& to, std::size_t n_seg,
                                   double dt, int degree = 5) {
  const std::size_t d = from.size();
  std::vector<bezier::Segment> segs;
  const double total = static_cast<double>(n_seg * static_cast<std::size_t>(degree));
  std::size_t step = 0;
  for (std::size_t k = 0; k < n_seg; ++k) {
    std::vector<double> ctrl;
    for (int i = 0; i <= degree; ++i) {
      const double f = static_cast<double>(step + static_cast<std::size_t>(i)) / total;
      for (std::size_t ax = 0; ax < d; ++ax)
        ctrl.push_back(from[ax] + f * (to[ax] - from[ax]));
    }
    step += static_cast<std::size_t>(degree);
    segs.emplace_back(degree, d, std::move(ctrl), static_cast<double>(k) * dt, dt);
  }
  return bezier::Trajectory(std::move(segs));
}

encoder::RhoProfile constant_profile(double r, double eps, std::size_t n, double dt) {
  encoder::RhoProfile rho;
  rho.dt = dt;
  rho.clearance.assign(n, r);
  rho.excursion.assign(n, eps);
  return rho;
}

}  // namespace

TEST_CASE("stationary trajectory inside the goal passes with the center margin") {
  const scenarios::Scenario s = simple_scenario("G[0,8] Goal", 0.5);
  const auto y = constant_trajectory({5.5, 5.5}, 8, 1.0);
  const double margin = s.regions.at("Goal").normalized_margin({5.5, 5.5});
  const auto rho = constant_profile(margin, 0.0, 8, 1.0);
  const VerificationReport rep = verifier::verify_trajectory(y, s, rho, {});
  CHECK(rep.pass);
  CHECK(rep.stl_margin == doctest::Approx(margin));
  CHECK(rep.continuity_position == doctest::Approx(0.0));
}

TEST_CASE("grazing below the claimed tube radius fails the margin check by name") {
  const scenarios::Scenario s = simple_scenario("G[0,8] !Obs", 0.30);
  // constant position 0.29 above the obstacle's top face (y = 3)
  const auto y = constant_trajectory({5.5, 3.29}, 8, 1.0);
  const auto rho = constant_profile(0.30, 0.0, 8, 1.0);
  const VerificationReport rep = verifier::verify_trajectory(y, s, rho, {});
  CHECK(!rep.pass);
  bool margin_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "stl_margin") margin_failed = !c.pass;
  CHECK(margin_failed);
}

TEST_CASE("zero-radius tube passes trivially") {
  const scenarios::Scenario s = simple_scenario("G[0,8] !Obs", 0.30);
  const auto y = line_trajectory({1.0, 5.0}, {9.0, 5.0}, 8, 1.0);
  const auto rho = constant_profile(0.5, 0.5, 8, 1.0);  // rho = 0 everywhere
  CHECK(verifier::tube_test(y, rho, s, 50, 42, 200) == 0);
}

TEST_CASE("tube inflated past the true clearance is falsified") {
  const scenarios::Scenario s = simple_scenario("G[0,8] !Obs", 0.30);
  // straight pass 0.5 above the obstacle top face: true clearance 0.5
  const auto y = line_trajectory({1.0, 3.5}, {9.0, 3.5}, 8, 1.0);
  const auto rho = constant_profile(1.0, 0.0, 8, 1.0);  // claims a 1.0 tube
  const int failures = verifier::tube_test(y, rho, s, 200, 42, 300);
  CHECK(failures > 0);
}

TEST_CASE("honest tube radius survives the same perturbations") {
  const scenarios::Scenario s = simple_scenario("G[0,8] !Obs", 0.30);
  const auto y = line_trajectory({1.0, 3.5}, {9.0, 3.5}, 8, 1.0);
  const auto rho = constant_profile(0.49, 0.0, 8, 1.0);
  CHECK(verifier::tube_test(y, rho, s, 200, 42, 300) == 0);
}

TEST_CASE("degenerate segment: containment slack approaches the full margin") {
  const geometry::Polytope region = geometry::Polytope::box({0.0, 0.0}, {10.0, 10.0});
  std::vector<double> ctrl;
  for (int i = 0; i <= 5; ++i) {
    ctrl.push_back(5.0);
    ctrl.push_back(5.0);
  }
  const bezier::Segment seg(5, 2, std::move(ctrl), 0.0, 1.0);
  const auto res = verifier::check_proposition1(seg, region, 0.01, 0.0, {0.0, 0.0}, true);
  REQUIRE(res.precondition_ok);
  CHECK(res.pass);
  CHECK(res.margin_slack == doctest::Approx(5.0 - 0.01));
}

TEST_CASE("straight segment at clearance r keeps slack eps") {
  const geometry::Polytope region = geometry::Polytope::box({0.0, 0.0}, {10.0, 10.0});
  // horizontal chord at y = 2: margin 2 w.r.t. the bottom face
  const double r = 2.0;
  const int n = 5;
  const double len = 0.5;
  std::vector<double> ctrl;
  for (int i = 0; i <= n; ++i) {
    ctrl.push_back(3.0 + len * i / n);
    ctrl.push_back(2.0);
  }
  const bezier::Segment seg(n, 2, std::move(ctrl), 0.0, 1.0);
  // a large enough to cover the chord steps, eps above its floor
  const std::vector<double> a{2.0 * n * (len / n), 2.0 * n * (len / n)};
  const double eps = 3.0 * std::sqrt(2.0) / 8.0 * a[0] * 1.1;
  const auto res = verifier::check_proposition1(seg, region, r, eps, a, true);
  REQUIRE(res.precondition_ok);
  CHECK(res.pass);
  CHECK(res.margin_slack == doctest::Approx(eps).epsilon(1e-9));
}

TEST_CASE("random constraint-satisfying segments never violate the containment bound") {
  std::mt19937 rng(131);
  const geometry::Polytope region = geometry::Polytope::box({3.0, 3.0}, {8.0, 8.0});
  int inside_count = 0, outside_count = 0;
  while (inside_count < 20) {
    auto s = oracles::sample_feasible_segment(rng, region, true, 0, {3.2, 3.2}, {7.8, 7.8});
    if (!s) continue;
    const auto res =
        verifier::check_proposition1(s->segment, region, s->clearance, s->excursion, s->accel, true);
    REQUIRE(res.precondition_ok);
    CHECK(res.pass);
    ++inside_count;
  }
  while (outside_count < 20) {
    // row 0 is x <= 8: points beyond it lie to the right
    auto s = oracles::sample_feasible_segment(rng, region, false, 0, {8.2, 0.2}, {9.8, 9.8});
    if (!s) continue;
    const auto res = verifier::check_proposition1(s->segment, region, s->clearance, s->excursion,
                                                  s->accel, false);
    REQUIRE(res.precondition_ok);
    CHECK(res.pass);
    ++outside_count;
  }
}

TEST_CASE("precondition violations are reported distinctly") {
  const geometry::Polytope region = geometry::Polytope::box({0.0, 0.0}, {10.0, 10.0});
  // controls jump far beyond any edge cap for a = 0
  std::vector<double> ctrl{5, 5, 6.5, 5, 6.5, 5, 6.5, 5, 6.5, 5, 6.5, 5};
  const bezier::Segment seg(5, 2, std::move(ctrl), 0.0, 1.0);
  const auto res = verifier::check_proposition1(seg, region, 0.5, 0.0, {0.0, 0.0}, true);
  CHECK(!res.precondition_ok);
  CHECK(!res.precondition_detail.empty());
}

TEST_CASE("sampled margin tightens as the resolution grows") {
  const scenarios::Scenario s = simple_scenario("G[0,8] !Obs", 0.30);
  // a pass that dips toward the obstacle mid-flight
  auto y = line_trajectory({1.0, 3.4}, {9.0, 3.9}, 8, 1.0);
  const auto rho = constant_profile(0.3, 0.0, 8, 1.0);
  auto margin_at = [&](int res) {
    VerifyOptions o;
    o.resolution = res;
    return verifier::verify_trajectory(y, s, rho, o).stl_margin;
  };
  const double m100 = margin_at(100);
  const double m300 = margin_at(300);
  const double m1000 = margin_at(1000);
  CHECK(m300 <= m100 + 1e-12);   // nested grids
  CHECK(m1000 <= m100 + 1e-12);  // nested grids
  CHECK(m1000 <= m300 + 1e-3);   // non-nested, Lipschitz slack
}

TEST_CASE("resolution below 100 is rejected") {
  const scenarios::Scenario s = simple_scenario("G[0,8] Goal", 0.5);
  const auto y = constant_trajectory({5.5, 5.5}, 8, 1.0);
  const auto rho = constant_profile(1.0, 0.0, 8, 1.0);
  VerifyOptions o;
  o.resolution = 50;
  CHECK_THROWS_AS(verifier::verify_trajectory(y, s, rho, o), input_error);
}

TEST_CASE("report serializes to valid JSON") {
  const scenarios::Scenario s = simple_scenario("G[0,8] Goal", 0.5);
  const auto y = constant_trajectory({5.5, 5.5}, 8, 1.0);
  const auto rho = constant_profile(1.0, 0.0, 8, 1.0);
  VerifyOptions o;
  o.tube_trials = 5;
  const VerificationReport rep = verifier::verify_trajectory(y, s, rho, o);
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j.contains("pass"));
  CHECK(j["tube"]["trials"] == 5);
  CHECK(j["checks"].is_array());
}

TEST_CASE("worst-case control-point drift reaches at least 90% of the certified bound") {
  // 1-D chain, n = 8: maximize c4 - c0 subject to the edge and
  // second-difference caps, using the in-repo solver as the maximizer.
  using namespace stlplan::milp;
  const int n = 8;
  const double edge = 1.0 / (2.0 * n);          // a = 1, dt = 1
  const double dd = 1.0 / (n * (n - 1.0));
  Model m;
  std::vector<int> c(n + 1);
  for (int i = 0; i <= n; ++i)
    c[static_cast<std::size_t>(i)] = m.add_variable("c" + std::to_string(i), -10.0, 10.0,
                                                    VarKind::Continuous);
  auto abs_pair = [&m](int hi_var, int lo_var, double cap, const std::string& name) {
    m.add_constraint(name + "p", {{hi_var, 1.0}, {lo_var, -1.0}}, Sense::LE, cap);
    m.add_constraint(name + "m", {{hi_var, -1.0}, {lo_var, 1.0}}, Sense::LE, cap);
  };
  abs_pair(c[1], c[0], edge, "edge0");
  abs_pair(c[8], c[7], edge, "edge1");
  for (int i = 0; i + 2 <= n; ++i) {
    const std::string name = "dd" + std::to_string(i);
    m.add_constraint(name + "p",
                     {{c[static_cast<std::size_t>(i + 2)], 1.0},
                      {c[static_cast<std::size_t>(i + 1)], -2.0},
                      {c[static_cast<std::size_t>(i)], 1.0}},
                     Sense::LE, dd);
    m.add_constraint(name + "m",
                     {{c[static_cast<std::size_t>(i + 2)], -1.0},
                      {c[static_cast<std::size_t>(i + 1)], 2.0},
                      {c[static_cast<std::size_t>(i)], -1.0}},
                     Sense::LE, dd);
  }
  m.set_objective_coeff(c[4], -1.0);
  m.set_objective_coeff(c[0], 1.0);
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  const double reach = -s.objective;
  const double bound = 3.0 / 8.0;  // dt^2 |a| (3/8) with a = dt = 1
  CHECK(reach <= bound + 1e-9);
  CHECK(reach >= 0.9 * bound);
}
