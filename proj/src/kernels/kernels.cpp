#include "stlplan/kernels.hpp"

#include <algorithm>
#include <vector>

namespace stlplan::kern {

namespace {

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void polytope_margins_scalar(const double* hn, const double* bn, std::size_t rows,
                             std::size_t dim, const double* pts, std::size_t m,
                             double* out) {
  for (std::size_t j = 0; j < m; ++j) {
    const double* p = pts + j * dim;
    double best = bn[0];
    for (std::size_t k = 0; k < dim; ++k) best -= hn[k] * p[k];
    for (std::size_t i = 1; i < rows; ++i) {
      double v = bn[i];
      const double* h = hn + i * dim;
      for (std::size_t k = 0; k < dim; ++k) v -= h[k] * p[k];
      best = std::min(best, v);
    }
    out[j] = best;
  }
}

void bezier_eval_batch_scalar(const double* ctrl, std::size_t n_ctrl,
                              const double* taus, std::size_t m, double* out) {
  std::vector<double> work(n_ctrl);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = taus[j];
    const double s = 1.0 - t;
    std::copy(ctrl, ctrl + n_ctrl, work.begin());
    for (std::size_t level = n_ctrl - 1; level > 0; --level)
      for (std::size_t i = 0; i < level; ++i)
        work[i] = s * work[i] + t * work[i + 1];
    out[j] = work[0];
  }
}

const Backend kScalar = {
    "scalar",
    axpy_scalar,
    dot_scalar,
    polytope_margins_scalar,
    bezier_eval_batch_scalar,
};

const Backend* g_active = nullptr;

const Backend* detect() {
  if (const Backend* simd = simd_backend()) return simd;
  return &kScalar;
}

}  // namespace

#if defined(STLPLAN_HAVE_AVX2_TU)
const Backend* avx2_backend_if_supported();  // kernels_avx2.cpp
const Backend* simd_backend() { return avx2_backend_if_supported(); }
#elif defined(STLPLAN_HAVE_NEON_TU)
const Backend* neon_backend();  // kernels_neon.cpp
const Backend* simd_backend() { return neon_backend(); }
#else
const Backend* simd_backend() { return nullptr; }
#endif

const Backend* scalar_backend() { return &kScalar; }

const Backend& active() {
  if (!g_active) g_active = detect();
  return *g_active;
}

bool select(const std::string& name) {
  if (name == "auto") {
    g_active = detect();
    return true;
  }
  if (name == "scalar") {
    g_active = &kScalar;
    return true;
  }
  if (const Backend* simd = simd_backend(); simd && name == simd->name) {
    g_active = simd;
    return true;
  }
  return false;
}

}  // namespace stlplan::kern
