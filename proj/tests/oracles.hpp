#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "stlplan/bezier.hpp"
#include "stlplan/geometry.hpp"
#include "stlplan/milp.hpp"
#include "stlplan/stl.hpp"

namespace oracles {

// ------------------------------------------------------------------ LP ----

// Exhaustive vertex enumeration for small boxed LPs: every basis candidate is
// an intersection of d hyperplanes drawn from constraint boundaries and
// variable bounds.
inline std::optional<std::pair<std::vector<double>, double>> lp_vertex_enum(
    const stlplan::milp::Model& m) {
  const std::size_t d = m.num_variables();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    const auto& c = m.constraint(static_cast<int>(i));
    Plane p{std::vector<double>(d, 0.0), c.rhs};
    for (const auto& [j, v] : c.coeffs) p.a[static_cast<std::size_t>(j)] += v;
    planes.push_back(std::move(p));
  }
  for (std::size_t j = 0; j < d; ++j) {
    Plane lo{std::vector<double>(d, 0.0), m.variable(static_cast<int>(j)).lo};
    lo.a[j] = 1.0;
    planes.push_back(lo);
    Plane hi{std::vector<double>(d, 0.0), m.variable(static_cast<int>(j)).hi};
    hi.a[j] = 1.0;
    planes.push_back(hi);
  }

  const std::size_t n = planes.size();
  std::vector<std::size_t> pick(d);
  std::optional<std::pair<std::vector<double>, double>> best;

  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j < d; ++j)
      if (x[j] < m.variable(static_cast<int>(j)).lo - 1e-7 ||
          x[j] > m.variable(static_cast<int>(j)).hi + 1e-7)
        return false;
    for (std::size_t i = 0; i < m.num_constraints(); ++i) {
      const auto& c = m.constraint(static_cast<int>(i));
      double act = 0.0;
      double scale = 1.0;
      for (const auto& [j, v] : c.coeffs) {
        act += v * x[static_cast<std::size_t>(j)];
        scale = std::max(scale, std::abs(v));
      }
      const double slack = (act - c.rhs) / scale;
      if (c.sense == stlplan::milp::Sense::LE && slack > 1e-7) return false;
      if (c.sense == stlplan::milp::Sense::GE && slack < -1e-7) return false;
      if (c.sense == stlplan::milp::Sense::EQ && std::abs(slack) > 1e-7) return false;
    }
    return true;
  };

  auto solve_system = [&](const std::vector<std::size_t>& rows) -> std::optional<std::vector<double>> {
    std::vector<std::vector<double>> a(d, std::vector<double>(d + 1));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a[r][c] = planes[rows[r]].a[c];
      a[r][d] = planes[rows[r]].b;
    }
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < d; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (std::abs(a[piv][col]) < 1e-10) return std::nullopt;
      std::swap(a[col], a[piv]);
      for (std::size_t r = 0; r < d; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c <= d; ++c) a[r][c] -= f * a[col][c];
      }
    }
    std::vector<double> x(d);
    for (std::size_t r = 0; r < d; ++r) x[r] = a[r][d] / a[r][r];
    return x;
  };

  auto consider = [&](const std::vector<double>& x) {
    if (!feasible(x)) return;
    const double z = m.objective_value(x);
    if (!best || z < best->second) best = {x, z};
  };

  // iterate over all d-subsets
  std::vector<std::size_t> idx(d);
  for (std::size_t j = 0; j < d; ++j) idx[j] = j;
  while (true) {
    if (auto x = solve_system(idx)) consider(*x);
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (idx[k] != n - d + k) break;
      if (k == 0) return best;
    }
    if (idx[k] == n - d + k) return best;
    ++idx[k];
    for (std::size_t j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Mixed random MILP paired with a fully independent oracle: enumerate every
// binary assignment and solve the continuous remainder by vertex enumeration.
inline stlplan::milp::Model random_milp(std::mt19937& rng, std::size_t n_bin,
                                        std::size_t n_cont, std::size_t rows) {
  using namespace stlplan::milp;
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> rhs(1.0, 6.0);
  Model m;
  for (std::size_t j = 0; j < n_bin; ++j)
    m.add_variable("b" + std::to_string(j), 0.0, 1.0, VarKind::Binary);
  for (std::size_t j = 0; j < n_cont; ++j)
    m.add_variable("x" + std::to_string(j), -4.0, 4.0, VarKind::Continuous);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::pair<int, double>> c;
    for (std::size_t j = 0; j < n_bin + n_cont; ++j)
      c.emplace_back(static_cast<int>(j), coef(rng));
    m.add_constraint("r" + std::to_string(i), std::move(c), Sense::LE, rhs(rng));
  }
  for (std::size_t j = 0; j < n_bin + n_cont; ++j)
    m.set_objective_coeff(static_cast<int>(j), coef(rng));
  return m;
}

inline double milp_enumeration_oracle(const stlplan::milp::Model& m, bool* feasible) {
  using namespace stlplan::milp;
  std::vector<int> binaries, conts;
  for (std::size_t j = 0; j < m.num_variables(); ++j) {
    if (m.variable(static_cast<int>(j)).kind == VarKind::Binary)
      binaries.push_back(static_cast<int>(j));
    else
      conts.push_back(static_cast<int>(j));
  }
  double best = 1e100;
  *feasible = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << binaries.size()); ++mask) {
    if (conts.empty()) {
      std::vector<double> x(m.num_variables(), 0.0);
      for (std::size_t b = 0; b < binaries.size(); ++b)
        x[static_cast<std::size_t>(binaries[b])] = (mask >> b) & 1 ? 1.0 : 0.0;
      if (m.check_assignment(x, 1e-9)) continue;
      *feasible = true;
      best = std::min(best, m.objective_value(x));
      continue;
    }
    // project to the continuous variables
    Model proj;
    std::vector<int> map(m.num_variables(), -1);
    for (int j : conts) {
      const Variable& v = m.variable(j);
      map[static_cast<std::size_t>(j)] = proj.add_variable(v.name, v.lo, v.hi, VarKind::Continuous);
      proj.set_objective_coeff(map[static_cast<std::size_t>(j)], m.objective_coeff(j));
    }
    double fixed_obj = 0.0;
    for (std::size_t b = 0; b < binaries.size(); ++b)
      if ((mask >> b) & 1) fixed_obj += m.objective_coeff(binaries[b]);
    bool row_infeasible = false;
    for (std::size_t i = 0; i < m.num_constraints() && !row_infeasible; ++i) {
      const Constraint& c = m.constraint(static_cast<int>(i));
      std::vector<std::pair<int, double>> cc;
      double shift = 0.0;
      for (const auto& [j, a] : c.coeffs) {
        if (map[static_cast<std::size_t>(j)] >= 0) {
          cc.emplace_back(map[static_cast<std::size_t>(j)], a);
        } else {
          const auto b = static_cast<std::size_t>(
              std::find(binaries.begin(), binaries.end(), j) - binaries.begin());
          if ((mask >> b) & 1) shift += a;
        }
      }
      if (cc.empty()) {
        if (c.sense == Sense::LE && shift > c.rhs + 1e-9) row_infeasible = true;
        if (c.sense == Sense::GE && shift < c.rhs - 1e-9) row_infeasible = true;
        if (c.sense == Sense::EQ && std::abs(shift - c.rhs) > 1e-9) row_infeasible = true;
      } else {
        proj.add_constraint(c.name, std::move(cc), c.sense, c.rhs - shift);
      }
    }
    if (row_infeasible) continue;
    const auto r = lp_vertex_enum(proj);
    if (!r) continue;
    *feasible = true;
    best = std::min(best, r->second + fixed_obj);
  }
  return best;
}

// --------------------------------------------------------------- boolean ---

// Brute-force boolean semantics on a sampled trace.
inline bool bool_sat(const stlplan::stl::Formula& f, const stlplan::stl::Trace& tr,
                     const stlplan::stl::RegionMap& regions, std::size_t i) {
  using stlplan::stl::Kind;
  const std::size_t m = tr.count();
  auto window = [&](const stlplan::stl::TimeInterval& iv) {
    const double fi = static_cast<double>(i);
    auto lo = static_cast<std::ptrdiff_t>(std::ceil(fi + iv.a / tr.dt - 1e-6));
    auto hi = static_cast<std::ptrdiff_t>(std::floor(fi + iv.b / tr.dt + 1e-6));
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(m) - 1);
    return std::make_pair(lo, hi);
  };
  switch (f.kind) {
    case Kind::True:
      return true;
    case Kind::Pred:
    case Kind::NegPred: {
      const auto& poly = regions.at(f.region);
      std::vector<double> p(tr.point(i), tr.point(i) + tr.dim);
      const double margin = poly.normalized_margin(p);
      return f.kind == Kind::Pred ? margin >= 0.0 : margin < 0.0;
    }
    case Kind::Not:
      return !bool_sat(*f.children[0], tr, regions, i);
    case Kind::And:
      for (const auto& c : f.children)
        if (!bool_sat(*c, tr, regions, i)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : f.children)
        if (bool_sat(*c, tr, regions, i)) return true;
      return false;
    case Kind::Always: {
      auto [lo, hi] = window(f.interval);
      for (auto j = lo; j <= hi; ++j)
        if (!bool_sat(*f.children[0], tr, regions, static_cast<std::size_t>(j))) return false;
      return true;
    }
    case Kind::Eventually: {
      auto [lo, hi] = window(f.interval);
      for (auto j = lo; j <= hi; ++j)
        if (bool_sat(*f.children[0], tr, regions, static_cast<std::size_t>(j))) return true;
      return false;
    }
    case Kind::Until: {
      auto [lo, hi] = window(f.interval);
      for (auto j = lo; j <= hi; ++j) {
        if (!bool_sat(*f.children[1], tr, regions, static_cast<std::size_t>(j))) continue;
        bool hold = true;
        for (auto l = static_cast<std::ptrdiff_t>(i); l <= j && hold; ++l)
          hold = bool_sat(*f.children[0], tr, regions, static_cast<std::size_t>(l));
        if (hold) return true;
      }
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------------- random ---

// allow_until is cleared under any negation: normalization of !Until needs a
// Release operator and is rejected by design, so generated formulas avoid it.
inline stlplan::stl::FormulaPtr random_formula(std::mt19937& rng,
                                               const std::vector<std::string>& regions,
                                               int depth, bool allow_until = true) {
  using namespace stlplan::stl;
  std::uniform_int_distribution<int> pick_region(0, static_cast<int>(regions.size()) - 1);
  std::uniform_real_distribution<double> t01(0.0, 1.0);
  if (depth <= 0 || t01(rng) < 0.25) {
    const std::string name = regions[static_cast<std::size_t>(pick_region(rng))];
    return t01(rng) < 0.5 ? make_pred(name) : make_neg_pred(name);
  }
  std::uniform_int_distribution<int> kind(0, allow_until ? 5 : 4);
  auto interval = [&]() {
    const double a = std::floor(t01(rng) * 3.0);
    const double b = a + 1.0 + std::floor(t01(rng) * 3.0);
    return TimeInterval{a, b};
  };
  switch (kind(rng)) {
    case 0:
      return make_and({random_formula(rng, regions, depth - 1, allow_until),
                       random_formula(rng, regions, depth - 1, allow_until)});
    case 1:
      return make_or({random_formula(rng, regions, depth - 1, allow_until),
                      random_formula(rng, regions, depth - 1, allow_until)});
    case 2:
      return make_always(interval(), random_formula(rng, regions, depth - 1, allow_until));
    case 3:
      return make_eventually(interval(), random_formula(rng, regions, depth - 1, allow_until));
    case 4:
      return make_not(random_formula(rng, regions, depth - 1, false));
    default:
      return make_until(interval(), random_formula(rng, regions, depth - 1, allow_until),
                        random_formula(rng, regions, depth - 1, allow_until));
  }
}

// Constructive sampler of segments that satisfy the predicate-encoding
// constraint values exactly: control-point increments start and end within
// the edge cap and drift by at most the second-difference cap.
struct FeasibleSegmentSample {
  stlplan::bezier::Segment segment;
  double clearance;               // r
  double excursion;               // eps
  std::vector<double> accel;      // per-axis a
};

inline std::optional<FeasibleSegmentSample> sample_feasible_segment(
    std::mt19937& rng, const stlplan::geometry::Polytope& region, bool inside,
    std::size_t sep_row, const std::vector<double>& box_lo,
    const std::vector<double>& box_hi, double dt = 1.0, int n = 5) {
  const std::size_t d = 2;
  std::uniform_real_distribution<double> ua(0.8, 3.0);
  std::uniform_real_distribution<double> uscale(1.0, 1.25);
  std::uniform_real_distribution<double> ur(0.1, 0.8);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<double> a{ua(rng), ua(rng)};
  const double eps =
      3.0 * std::sqrt(2.0) / 8.0 * std::max(a[0], a[1]) * dt * dt * uscale(rng);
  const double r = eps + ur(rng);

  // increments d0..d4 per axis
  std::vector<std::vector<double>> inc(static_cast<std::size_t>(n), std::vector<double>(d));
  for (std::size_t ax = 0; ax < d; ++ax) {
    const double e = a[ax] * dt * dt / (2.0 * n);
    const double q = a[ax] * dt * dt / (n * (n - 1.0));
    const double d0 = (2.0 * u01(rng) - 1.0) * e;
    const double d4 = (2.0 * u01(rng) - 1.0) * e;
    const double lo2 = std::max(d0, d4) - 2.0 * q;
    const double hi2 = std::min(d0, d4) + 2.0 * q;
    const double d2 = lo2 + (hi2 - lo2) * u01(rng);
    inc[0][ax] = d0;
    inc[1][ax] = 0.5 * (d0 + d2);
    inc[2][ax] = d2;
    inc[3][ax] = 0.5 * (d2 + d4);
    inc[4][ax] = d4;
  }

  // anchor c0 so both end controls satisfy the face clearance
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<double> c0(d);
    for (std::size_t ax = 0; ax < d; ++ax)
      c0[ax] = box_lo[ax] + (box_hi[ax] - box_lo[ax]) * u01(rng);
    std::vector<double> cn = c0;
    for (int i = 0; i < n; ++i)
      for (std::size_t ax = 0; ax < d; ++ax) cn[ax] += inc[static_cast<std::size_t>(i)][ax];
    bool ok;
    if (inside) {
      ok = region.normalized_margin(c0) >= r && region.normalized_margin(cn) >= r;
    } else {
      ok = region.halfspace_margin(sep_row, c0) >= r &&
           region.halfspace_margin(sep_row, cn) >= r;
    }
    if (!ok) continue;
    std::vector<double> controls;
    controls.insert(controls.end(), c0.begin(), c0.end());
    std::vector<double> cur = c0;
    for (int i = 0; i < n; ++i) {
      for (std::size_t ax = 0; ax < d; ++ax) cur[ax] += inc[static_cast<std::size_t>(i)][ax];
      controls.insert(controls.end(), cur.begin(), cur.end());
    }
    return FeasibleSegmentSample{
        stlplan::bezier::Segment(n, d, std::move(controls), 0.0, dt), r, eps, a};
  }
  return std::nullopt;
}

inline stlplan::geometry::Polytope random_polytope(std::mt19937& rng, std::size_t dim,
                                                   std::size_t extra_rows) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> off(0.5, 2.0);
  std::vector<std::vector<double>> h;
  std::vector<double> b;
  // box rows keep it bounded
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<double> up(dim, 0.0), dn(dim, 0.0);
    up[k] = 1.0;
    dn[k] = -1.0;
    h.push_back(up);
    b.push_back(off(rng) + 1.0);
    h.push_back(dn);
    b.push_back(off(rng) + 1.0);
  }
  for (std::size_t r = 0; r < extra_rows; ++r) {
    std::vector<double> row(dim);
    double norm = 0.0;
    for (double& v : row) {
      v = coef(rng);
      norm += v * v;
    }
    if (norm < 1e-3) row[0] = 1.0;
    h.push_back(row);
    b.push_back(off(rng));
  }
  return stlplan::geometry::Polytope(std::move(h), std::move(b));
}

}  // namespace oracles
