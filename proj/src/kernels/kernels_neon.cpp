#include <arm_neon.h>

#include <algorithm>
#include <vector>

#include "stlplan/kernels.hpp"

// NEON variants (aarch64, 2 doubles per vector). Same operation order as the
// scalar reference; vmulq + vaddq, no fused ops.
namespace stlplan::kern {

namespace {

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t xv = vld1q_f64(x + i);
    float64x2_t yv = vld1q_f64(y + i);
    yv = vaddq_f64(yv, vmulq_f64(a, xv));
    vst1q_f64(y + i, yv);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void margins_scalar_tail(const double* hn, const double* bn, std::size_t rows,
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

void polytope_margins_neon(const double* hn, const double* bn, std::size_t rows,
                           std::size_t dim, const double* pts, std::size_t m,
                           double* out) {
  if (dim != 2) {
    margins_scalar_tail(hn, bn, rows, dim, pts, m, out);
    return;
  }
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2) {
    const double* p = pts + j * 2;
    const float64x2x2_t xy = vld2q_f64(p);  // deinterleave x/y
    float64x2_t best = vsubq_f64(vdupq_n_f64(bn[0]),
                                 vmulq_f64(vdupq_n_f64(hn[0]), xy.val[0]));
    best = vsubq_f64(best, vmulq_f64(vdupq_n_f64(hn[1]), xy.val[1]));
    for (std::size_t i = 1; i < rows; ++i) {
      float64x2_t v = vsubq_f64(vdupq_n_f64(bn[i]),
                                vmulq_f64(vdupq_n_f64(hn[i * 2]), xy.val[0]));
      v = vsubq_f64(v, vmulq_f64(vdupq_n_f64(hn[i * 2 + 1]), xy.val[1]));
      best = vminq_f64(best, v);
    }
    vst1q_f64(out + j, best);
  }
  if (j < m) margins_scalar_tail(hn, bn, rows, 2, pts + j * 2, m - j, out + j);
}

void bezier_eval_batch_neon(const double* ctrl, std::size_t n_ctrl,
                            const double* taus, std::size_t m, double* out) {
  std::vector<float64x2_t> work(n_ctrl);
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2) {
    const float64x2_t t = vld1q_f64(taus + j);
    const float64x2_t s = vsubq_f64(vdupq_n_f64(1.0), t);
    for (std::size_t i = 0; i < n_ctrl; ++i) work[i] = vdupq_n_f64(ctrl[i]);
    for (std::size_t level = n_ctrl - 1; level > 0; --level)
      for (std::size_t i = 0; i < level; ++i)
        work[i] = vaddq_f64(vmulq_f64(s, work[i]), vmulq_f64(t, work[i + 1]));
    vst1q_f64(out + j, work[0]);
  }
  if (j < m) {
    std::vector<double> tail(n_ctrl);
    for (; j < m; ++j) {
      const double t = taus[j];
      const double s = 1.0 - t;
      std::copy(ctrl, ctrl + n_ctrl, tail.begin());
      for (std::size_t level = n_ctrl - 1; level > 0; --level)
        for (std::size_t i = 0; i < level; ++i)
          tail[i] = s * tail[i] + t * tail[i + 1];
      out[j] = tail[0];
    }
  }
}

const Backend kNeon = {
    "neon",
    axpy_neon,
    dot_neon,
    polytope_margins_neon,
    bezier_eval_batch_neon,
};

}  // namespace

const Backend* neon_backend() { return &kNeon; }

}  // namespace stlplan::kern
