#include "stlplan/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "stlplan/errors.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::verifier {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double clamp_for_json(double v) {
  if (v > 1e30) return 1e30;
  if (v < -1e30) return -1e30;
  return v;
}

stl::Trace sample_trace(const bezier::Trajectory& y, int resolution) {
  stl::Trace tr;
  tr.dim = y.dim();
  std::vector<double> times;
  tr.points = y.sample_positions(static_cast<std::size_t>(resolution), &times);
  tr.t0 = times.front();
  tr.dt = y.dt() / static_cast<double>(resolution);
  return tr;
}

// Piecewise-linear under-approximation of the tube radius: the segment value
// at midpoints, the neighbor minimum at joints.
double tube_radius(const encoder::RhoProfile& rho, double t) {
  const double dt = rho.dt;
  const std::size_t n = rho.size();
  const double rel = std::clamp(t / dt, 0.0, static_cast<double>(n));
  const auto k = static_cast<std::size_t>(std::min(std::floor(rel), static_cast<double>(n - 1)));
  const double tau = rel - static_cast<double>(k);
  const double mid = rho.rho(k);
  const double at_start = k == 0 ? mid : std::min(mid, rho.rho(k - 1));
  const double at_end = k + 1 >= n ? mid : std::min(mid, rho.rho(k + 1));
  if (tau < 0.5) return at_start + (mid - at_start) * (tau * 2.0);
  return mid + (at_end - mid) * ((tau - 0.5) * 2.0);
}

}  // namespace

int tube_test(const bezier::Trajectory& y, const encoder::RhoProfile& rho,
              const scenarios::Scenario& sc, int trials, unsigned seed, int resolution) {
  if (trials < 1) throw input_error("tube test needs at least one trial");
  if (rho.size() != y.size()) throw input_error("robustness profile length mismatch");
  const stl::FormulaPtr f = stl::to_nnf(sc.formula);
  std::vector<double> times;
  const std::vector<double> base = y.sample_positions(static_cast<std::size_t>(resolution), &times);
  const std::size_t count = times.size();
  const std::size_t d = y.dim();
  const double horizon = y.horizon();

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 8.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);

  int failures = 0;
  std::vector<double> raw(count * d);
  stl::Trace tr;
  tr.dim = d;
  tr.t0 = times.front();
  tr.dt = y.dt() / static_cast<double>(resolution);
  for (int trial = 0; trial < trials; ++trial) {
    // Per-axis sum of 5 random-phase sinusoids.
    for (std::size_t ax = 0; ax < d; ++ax) {
      double a[5], w[5], p[5];
      for (int h = 0; h < 5; ++h) {
        a[h] = amp(rng);
        w[h] = 2.0 * 3.14159265358979323846 * freq(rng) / horizon;
        p[h] = phase(rng);
      }
      for (std::size_t i = 0; i < count; ++i) {
        double v = 0.0;
        for (int h = 0; h < 5; ++h) v += a[h] * std::sin(w[h] * times[i] + p[h]);
        raw[i * d + ax] = v;
      }
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double s = 0.0;
      for (std::size_t ax = 0; ax < d; ++ax) s += raw[i * d + ax] * raw[i * d + ax];
      peak = std::max(peak, std::sqrt(s));
    }
    if (peak == 0.0) peak = 1.0;
    tr.points = base;
    for (std::size_t i = 0; i < count; ++i) {
      const double scale = tube_radius(rho, times[i]) / peak;
      for (std::size_t ax = 0; ax < d; ++ax) tr.points[i * d + ax] += scale * raw[i * d + ax];
    }
    if (stl::sampled_robustness(f, tr, sc.regions, 0.0) < 0.0) ++failures;
  }
  return failures;
}

GeometricBoundResult check_proposition1(const bezier::Segment& seg,
                                        const geometry::Polytope& region, double r,
                                        double eps, const std::vector<double>& a_peak,
                                        bool inside, int samples) {
  GeometricBoundResult res;
  const int n = seg.degree();
  const std::size_t d = seg.dim();
  if (a_peak.size() != d) throw input_error("a_peak dimension mismatch");
  const double dt = seg.duration();
  const double tol = 1e-9;

  // Precondition: the constraint values the containment argument assumes.
  std::ostringstream why;
  bool pre = true;
  const double edge_cap = dt * dt / (2.0 * n);
  for (int jj : {1, n}) {
    const double* cj = seg.control(static_cast<std::size_t>(jj));
    const double* cp = seg.control(static_cast<std::size_t>(jj - 1));
    for (std::size_t ax = 0; ax < d; ++ax)
      if (std::abs(cj[ax] - cp[ax]) > a_peak[ax] * edge_cap + tol) {
        pre = false;
        why << "edge cap violated at control " << jj << " axis " << ax << "; ";
      }
  }
  const double dd_cap = dt * dt / (static_cast<double>(n) * (n - 1));
  for (int i = 0; i + 2 <= n; ++i) {
    const std::vector<double> dd = seg.second_difference(static_cast<std::size_t>(i));
    for (std::size_t ax = 0; ax < d; ++ax)
      if (std::abs(dd[ax]) > a_peak[ax] * dd_cap + tol) {
        pre = false;
        why << "second-difference cap violated at " << i << " axis " << ax << "; ";
      }
  }
  const double excursion_floor =
      3.0 * std::sqrt(static_cast<double>(d)) * dt * dt / 8.0 *
      *std::max_element(a_peak.begin(), a_peak.end());
  if (eps + tol < excursion_floor) {
    pre = false;
    why << "excursion allowance below 3*sqrt(d)*dt^2*max(a)/8; ";
  }
  std::size_t sep_row = region.rows();
  if (inside) {
    for (int jj : {0, n}) {
      const auto c = seg.control_point(static_cast<std::size_t>(jj));
      if (region.normalized_margin(c) + tol < r) {
        pre = false;
        why << "end control " << jj << " margin below r; ";
      }
    }
  } else {
    for (std::size_t i = 0; i < region.rows(); ++i) {
      const auto c0 = seg.control_point(0);
      const auto cn = seg.control_point(static_cast<std::size_t>(n));
      if (region.halfspace_margin(i, c0) + tol >= r &&
          region.halfspace_margin(i, cn) + tol >= r) {
        sep_row = i;
        break;
      }
    }
    if (sep_row == region.rows()) {
      pre = false;
      why << "no face holds both end controls at clearance r; ";
    }
  }
  res.precondition_ok = pre;
  res.precondition_detail = why.str();
  if (!pre) return res;

  // (i) interior control points stay near an end control point.
  double a_norm = 0.0;
  for (double v : a_peak) a_norm += v * v;
  a_norm = std::sqrt(a_norm);
  const double bound = 3.0 * dt * dt * a_norm / 8.0;
  res.control_point_slack = kInf;
  const auto c0 = seg.control_point(0);
  const auto cn = seg.control_point(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    const auto ci = seg.control_point(static_cast<std::size_t>(i));
    std::vector<double> d0(d), dn(d);
    for (std::size_t ax = 0; ax < d; ++ax) {
      d0[ax] = ci[ax] - c0[ax];
      dn[ax] = ci[ax] - cn[ax];
    }
    const double dist = std::min(vec_norm(d0), vec_norm(dn));
    res.control_point_slack = std::min(res.control_point_slack, bound + 1e-9 - dist);
  }

  // (ii) dense samples stay in the shrunken region / beyond the face.
  res.margin_slack = kInf;
  const double need = r - eps;
  for (int s = 0; s <= samples; ++s) {
    const double tau = static_cast<double>(s) / samples;
    const auto p = seg.evaluate_local(tau);
    const double margin =
        inside ? region.normalized_margin(p) : region.halfspace_margin(sep_row, p);
    res.margin_slack = std::min(res.margin_slack, margin - need);
  }
  res.pass = res.control_point_slack >= 0.0 && res.margin_slack >= -1e-9;
  return res;
}

VerificationReport verify_trajectory(const bezier::Trajectory& y,
                                     const scenarios::Scenario& sc,
                                     const encoder::RhoProfile& rho,
                                     const VerifyOptions& opts) {
  if (opts.resolution < 100)
    throw input_error("verification resolution must be at least 100 samples per segment");
  if (rho.size() != y.size())
    throw input_error("robustness profile does not match the trajectory segment count");
  VerificationReport rep;
  auto add = [&rep](const std::string& name, bool pass, double value, double threshold,
                    std::string detail = "") {
    rep.checks.push_back({name, pass, clamp_for_json(value), threshold, std::move(detail)});
  };

  // Continuity.
  const auto joints = y.continuity_residuals();
  for (const auto& j : joints) {
    rep.continuity_position = std::max(rep.continuity_position, j.position);
    rep.continuity_velocity = std::max(rep.continuity_velocity, j.first_difference);
    rep.continuity_accel = std::max(rep.continuity_accel, j.second_difference);
  }
  add("continuity_position", rep.continuity_position <= 1e-8, rep.continuity_position, 1e-8);
  add("continuity_first_difference", rep.continuity_velocity <= 1e-8, rep.continuity_velocity,
      1e-8);
  add("continuity_second_difference", rep.continuity_accel <= 1e-8, rep.continuity_accel, 1e-8);

  // Dynamics by dense sampling of the derivative curves.
  const std::size_t d = y.dim();
  rep.velocity_peak.assign(d, 0.0);
  rep.accel_peak.assign(d, 0.0);
  {
    std::vector<double> taus(static_cast<std::size_t>(opts.resolution) + 1);
    for (std::size_t i = 0; i < taus.size(); ++i)
      taus[i] = static_cast<double>(i) / static_cast<double>(opts.resolution);
    std::vector<double> vals(taus.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
      const bezier::Segment vel = y.segment(k).derivative();
      const bezier::Segment acc = vel.derivative();
      for (std::size_t ax = 0; ax < d; ++ax) {
        vel.sample_axis(ax, taus.data(), taus.size(), vals.data());
        for (double v : vals) rep.velocity_peak[ax] = std::max(rep.velocity_peak[ax], std::abs(v));
        acc.sample_axis(ax, taus.data(), taus.size(), vals.data());
        for (double v : vals) rep.accel_peak[ax] = std::max(rep.accel_peak[ax], std::abs(v));
      }
    }
  }
  for (std::size_t ax = 0; ax < d; ++ax) {
    add("velocity_axis" + std::to_string(ax), rep.velocity_peak[ax] <= sc.v_max[ax] + 1e-9,
        rep.velocity_peak[ax], sc.v_max[ax]);
    add("accel_axis" + std::to_string(ax), rep.accel_peak[ax] <= sc.a_max[ax] + 1e-9,
        rep.accel_peak[ax], sc.a_max[ax]);
  }

  // Robustness profile floor.
  rep.min_rho = rho.min_rho();
  rep.max_rho = rho.max_rho();
  add("rho_floor", rep.min_rho >= sc.rho_star - 1e-9, rep.min_rho, sc.rho_star);

  // Specification margin of the nominal trajectory.
  const stl::Trace tr = sample_trace(y, opts.resolution);
  rep.stl_margin = stl::sampled_robustness(stl::to_nnf(sc.formula), tr, sc.regions, 0.0);
  add("stl_margin", rep.stl_margin >= rep.min_rho - 1e-6, rep.stl_margin, rep.min_rho,
      "sampled robustness at start vs min segment tube radius");

  if (opts.tube_trials > 0) {
    rep.tube_trials = opts.tube_trials;
    rep.tube_failures = tube_test(y, rho, sc, opts.tube_trials, opts.seed, opts.resolution);
    add("tube", rep.tube_failures == 0, rep.tube_failures, 0,
        "statistical evidence only: sampling cannot certify the universal claim");
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["pass"] = pass;
  j["continuity"] = {{"position", continuity_position},
                     {"first_difference", continuity_velocity},
                     {"second_difference", continuity_accel}};
  j["velocity_peak"] = velocity_peak;
  j["accel_peak"] = accel_peak;
  j["stl_margin"] = clamp_for_json(stl_margin);
  j["rho"] = {{"min", min_rho}, {"max", max_rho}};
  j["tube"] = {{"trials", tube_trials},
               {"failures", tube_failures},
               {"note", "statistical evidence, not proof"}};
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : this->checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["value"] = clamp_for_json(c.value);
    cj["threshold"] = clamp_for_json(c.threshold);
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

}  // namespace stlplan::verifier
