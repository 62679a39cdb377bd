#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the simplex core and the trajectory
// verifier. Every kernel has a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64) selected once at startup from
// CPU capabilities. Elementwise kernels (axpy, margins, curve batches) are
// bitwise-identical across variants; dot reassociates and is only equal to
// ~1e-13 relative.
namespace stlplan::kern {

struct Backend {
  const char* name;

  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // Minimum normalized face margin per point. hn is r x d row-major with
  // unit-norm rows, bn the matching offsets; pts is m x d row-major.
  // out[j] = min_i (bn[i] - hn_i . pt_j).
  void (*polytope_margins)(const double* hn, const double* bn, std::size_t rows,
                           std::size_t dim, const double* pts, std::size_t m,
                           double* out);

  // Single-axis de Casteljau evaluation of one Bezier polyline at m parameter
  // values. ctrl has n_ctrl entries; out has m entries.
  void (*bezier_eval_batch)(const double* ctrl, std::size_t n_ctrl,
                            const double* taus, std::size_t m, double* out);
};

// Active backend (auto-detected at first use).
const Backend& active();

// Force a specific backend: "scalar", "avx2", "neon", or "auto".
// Returns false if the requested backend is unavailable on this machine.
bool select(const std::string& name);

// Backends compiled into this binary, for tests.
const Backend* scalar_backend();
const Backend* simd_backend();  // nullptr when none compiled/available

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void polytope_margins(const double* hn, const double* bn, std::size_t rows,
                             std::size_t dim, const double* pts, std::size_t m,
                             double* out) {
  active().polytope_margins(hn, bn, rows, dim, pts, m, out);
}
inline void bezier_eval_batch(const double* ctrl, std::size_t n_ctrl,
                              const double* taus, std::size_t m, double* out) {
  active().bezier_eval_batch(ctrl, n_ctrl, taus, m, out);
}

}  // namespace stlplan::kern
