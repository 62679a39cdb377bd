#include <random>
#include <vector>

#include "doctest.h"
#include "stlplan/kernels.hpp"

using namespace stlplan;

namespace {
std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}
}  // namespace

TEST_CASE("a SIMD backend is selectable on this machine or we fall back to scalar") {
  CHECK(kern::scalar_backend() != nullptr);
  const kern::Backend& b = kern::active();
  CHECK(b.name != nullptr);
  CHECK(kern::select("scalar"));
  CHECK(std::string(kern::active().name) == "scalar");
  CHECK(kern::select("auto"));
}

TEST_CASE("axpy matches scalar bitwise across backends") {
  const kern::Backend* simd = kern::simd_backend();
  if (!simd) return;
  std::mt19937 rng(7);
  for (std::size_t n : {1ul, 3ul, 4ul, 17ul, 256ul, 1001ul}) {
    const auto x = random_vec(rng, n);
    auto y1 = random_vec(rng, n);
    auto y2 = y1;
    const double alpha = 0.37;
    kern::scalar_backend()->axpy(alpha, x.data(), y1.data(), n);
    simd->axpy(alpha, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
  }
}

TEST_CASE("dot agrees across backends to tight relative tolerance") {
  const kern::Backend* simd = kern::simd_backend();
  if (!simd) return;
  std::mt19937 rng(11);
  for (std::size_t n : {2ul, 5ul, 64ul, 999ul}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const double s = kern::scalar_backend()->dot(a.data(), b.data(), n);
    const double v = simd->dot(a.data(), b.data(), n);
    CHECK(v == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("polytope margin batches are bitwise equal across backends") {
  const kern::Backend* simd = kern::simd_backend();
  if (!simd) return;
  std::mt19937 rng(13);
  const std::size_t rows = 6, d = 2, m = 133;
  auto hn = random_vec(rng, rows * d);
  auto bn = random_vec(rng, rows);
  auto pts = random_vec(rng, m * d, -5.0, 5.0);
  std::vector<double> o1(m), o2(m);
  kern::scalar_backend()->polytope_margins(hn.data(), bn.data(), rows, d, pts.data(), m, o1.data());
  simd->polytope_margins(hn.data(), bn.data(), rows, d, pts.data(), m, o2.data());
  for (std::size_t i = 0; i < m; ++i) CHECK(o1[i] == o2[i]);
}

TEST_CASE("polytope margin kernel handles non-2d inputs") {
  const kern::Backend* simd = kern::simd_backend();
  std::mt19937 rng(17);
  const std::size_t rows = 4, d = 3, m = 29;
  auto hn = random_vec(rng, rows * d);
  auto bn = random_vec(rng, rows);
  auto pts = random_vec(rng, m * d, -3.0, 3.0);
  std::vector<double> o1(m), o2(m);
  kern::scalar_backend()->polytope_margins(hn.data(), bn.data(), rows, d, pts.data(), m, o1.data());
  if (simd) {
    simd->polytope_margins(hn.data(), bn.data(), rows, d, pts.data(), m, o2.data());
    for (std::size_t i = 0; i < m; ++i) CHECK(o1[i] == o2[i]);
  }
}

TEST_CASE("bezier evaluation batches are bitwise equal across backends") {
  const kern::Backend* simd = kern::simd_backend();
  if (!simd) return;
  std::mt19937 rng(21);
  for (std::size_t n_ctrl : {2ul, 4ul, 6ul, 9ul}) {
    const auto ctrl = random_vec(rng, n_ctrl, -4.0, 4.0);
    const auto taus = random_vec(rng, 101, 0.0, 1.0);
    std::vector<double> o1(taus.size()), o2(taus.size());
    kern::scalar_backend()->bezier_eval_batch(ctrl.data(), n_ctrl, taus.data(), taus.size(), o1.data());
    simd->bezier_eval_batch(ctrl.data(), n_ctrl, taus.data(), taus.size(), o2.data());
    for (std::size_t i = 0; i < taus.size(); ++i) CHECK(o1[i] == o2[i]);
  }
}
