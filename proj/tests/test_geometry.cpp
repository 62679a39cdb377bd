#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stlplan/errors.hpp"
#include "stlplan/geometry.hpp"

using namespace stlplan;
using geometry::Polytope;

namespace {
Polytope unit_square() { return Polytope::box({-1.0, -1.0}, {1.0, 1.0}); }

std::vector<double> random_point(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return {d(rng), d(rng)};
}
}  // namespace

TEST_CASE("normalized margin at the center and outside") {
  const Polytope p = unit_square();
  CHECK(p.normalized_margin({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(p.normalized_margin({2.0, 0.0}) == doctest::Approx(-1.0));
}

TEST_CASE("margin equals distance to the boundary for interior points") {
  // Boundary-sampling oracle on a random bounded polytope.
  std::mt19937 rng(5);
  const Polytope p = oracles::random_polytope(rng, 2, 3);
  // find an interior point by sampling
  std::vector<double> x;
  for (int tries = 0; tries < 10000; ++tries) {
    auto c = random_point(rng, -2.5, 2.5);
    if (p.normalized_margin(c) > 0.05) {
      x = c;
      break;
    }
  }
  REQUIRE(!x.empty());
  const double margin = p.normalized_margin(x);
  // dense boundary walk: for many directions, step to the boundary by
  // bisection and record the closest hit
  double best = 1e9;
  for (int k = 0; k < 20000; ++k) {
    const double ang = 2.0 * M_PI * k / 20000.0;
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> q{x[0] + mid * std::cos(ang), x[1] + mid * std::sin(ang)};
      (p.normalized_margin(q) >= 0.0 ? lo : hi) = mid;
    }
    best = std::min(best, lo);
  }
  CHECK(margin == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("shrink identity and direct arithmetic") {
  const Polytope p = unit_square();
  const Polytope same = p.shrink(0.0);
  CHECK(same.normalized_margin({0.3, 0.3}) == doctest::Approx(p.normalized_margin({0.3, 0.3})));
  const Polytope half = p.shrink(0.5);
  CHECK(half.contains({0.4, 0.0}));
  CHECK(!half.contains({0.6, 0.0}, 1e-12));
}

TEST_CASE("shrink membership agrees with the margin test on random points") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> cdist(0.0, 1.0);
  const Polytope p = oracles::random_polytope(rng, 2, 4);
  const double c = cdist(rng);
  const Polytope sh = p.shrink(c);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    CHECK(sh.contains(x, 1e-12) == (p.normalized_margin(x) >= c - 1e-12));
  }
}

TEST_CASE("shrink composes additively") {
  std::mt19937 rng(23);
  const Polytope p = oracles::random_polytope(rng, 2, 3);
  const Polytope a = p.shrink(0.3).shrink(0.45);
  const Polytope b = p.shrink(0.75);
  for (int i = 0; i < 500; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    CHECK(a.contains(x, 1e-9) == b.contains(x, 1e-9));
  }
}

TEST_CASE("halfspace margin examples") {
  const Polytope p = unit_square();
  // row 0 is (1,0) x <= 1
  CHECK(p.halfspace_margin(0, {3.0, 0.0}) == doctest::Approx(2.0));
  CHECK(p.halfspace_margin(0, {1.0, 0.7}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(p.halfspace_margin(99, {0.0, 0.0}), input_error);
}

TEST_CASE("halfspace margin is the negated per-row inside margin") {
  std::mt19937 rng(31);
  const Polytope p = oracles::random_polytope(rng, 2, 4);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      const double inside_row = (p.offset(r) / p.row_norm(r)) -
                                (p.row(r)[0] * x[0] + p.row(r)[1] * x[1]) / p.row_norm(r);
      CHECK(p.halfspace_margin(r, x) == doctest::Approx(-inside_row).epsilon(1e-12));
    }
  }
}

TEST_CASE("margin is concave along segments") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> t01(0.0, 1.0);
  const Polytope p = oracles::random_polytope(rng, 2, 4);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    const auto y = random_point(rng, -3.0, 3.0);
    const double th = t01(rng);
    const std::vector<double> z{th * x[0] + (1 - th) * y[0], th * x[1] + (1 - th) * y[1]};
    CHECK(p.normalized_margin(z) >=
          std::min(p.normalized_margin(x), p.normalized_margin(y)) - 1e-12);
  }
}

TEST_CASE("row scaling does not change the normalized margin") {
  std::mt19937 rng(43);
  const Polytope p = oracles::random_polytope(rng, 2, 3);
  std::vector<std::vector<double>> h;
  std::vector<double> b;
  std::uniform_real_distribution<double> lam(0.1, 9.0);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const double s = lam(rng);
    std::vector<double> row = p.row(i);
    for (double& v : row) v *= s;
    h.push_back(row);
    b.push_back(p.offset(i) * s);
  }
  const Polytope q(std::move(h), std::move(b));
  for (int i = 0; i < 300; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    CHECK(q.normalized_margin(x) == doctest::Approx(p.normalized_margin(x)).epsilon(1e-12));
  }
}

TEST_CASE("dimension mismatches are input errors") {
  const Polytope p = unit_square();
  CHECK_THROWS_AS(p.normalized_margin({1.0, 2.0, 3.0}), input_error);
  CHECK_THROWS_AS(geometry::Workspace({0.0, 0.0}, {1.0}), input_error);
  CHECK_THROWS_AS(Polytope({{0.0, 0.0}}, {1.0}), input_error);  // zero row
}

TEST_CASE("unbounded polytopes are legal") {
  const Polytope half({{1.0, 0.0}}, {2.0});
  CHECK(half.normalized_margin({0.0, 100.0}) == doctest::Approx(2.0));
  CHECK(half.normalized_margin({5.0, 0.0}) == doctest::Approx(-3.0));
}

TEST_CASE("batch margins agree with pointwise margins") {
  std::mt19937 rng(53);
  const Polytope p = oracles::random_polytope(rng, 2, 5);
  std::vector<double> pts;
  for (int i = 0; i < 97; ++i) {
    const auto x = random_point(rng, -3.0, 3.0);
    pts.insert(pts.end(), x.begin(), x.end());
  }
  std::vector<double> out(97);
  geometry::batch_margins(p, pts.data(), 97, out.data());
  for (int i = 0; i < 97; ++i)
    CHECK(out[static_cast<std::size_t>(i)] ==
          doctest::Approx(p.normalized_margin({pts[2 * i], pts[2 * i + 1]})).epsilon(1e-12));
}
