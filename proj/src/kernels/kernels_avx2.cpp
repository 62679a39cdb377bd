#include <immintrin.h>

#include <algorithm>
#include <vector>

#include "stlplan/kernels.hpp"

// AVX2 variants. Elementwise kernels keep the exact operation order of the
// scalar reference (multiply then add/subtract, no FMA), so results are
// bitwise identical lane by lane; only dot() reassociates.
namespace stlplan::kern {

namespace {

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_add_pd(yv, _mm256_mul_pd(a, xv));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
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

void polytope_margins_avx2(const double* hn, const double* bn, std::size_t rows,
                           std::size_t dim, const double* pts, std::size_t m,
                           double* out) {
  if (dim != 2) {
    margins_scalar_tail(hn, bn, rows, dim, pts, m, out);
    return;
  }
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const double* p = pts + j * 2;
    const __m256d xs = _mm256_set_pd(p[6], p[4], p[2], p[0]);
    const __m256d ys = _mm256_set_pd(p[7], p[5], p[3], p[1]);
    __m256d best = _mm256_sub_pd(_mm256_set1_pd(bn[0]),
                                 _mm256_mul_pd(_mm256_set1_pd(hn[0]), xs));
    best = _mm256_sub_pd(best, _mm256_mul_pd(_mm256_set1_pd(hn[1]), ys));
    for (std::size_t i = 1; i < rows; ++i) {
      __m256d v = _mm256_sub_pd(_mm256_set1_pd(bn[i]),
                                _mm256_mul_pd(_mm256_set1_pd(hn[i * 2]), xs));
      v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_set1_pd(hn[i * 2 + 1]), ys));
      best = _mm256_min_pd(best, v);
    }
    _mm256_storeu_pd(out + j, best);
  }
  if (j < m) margins_scalar_tail(hn, bn, rows, 2, pts + j * 2, m - j, out + j);
}

void bezier_eval_batch_avx2(const double* ctrl, std::size_t n_ctrl,
                            const double* taus, std::size_t m, double* out) {
  std::vector<double> work(4 * n_ctrl);
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d t = _mm256_loadu_pd(taus + j);
    const __m256d s = _mm256_sub_pd(_mm256_set1_pd(1.0), t);
    for (std::size_t i = 0; i < n_ctrl; ++i)
      _mm256_storeu_pd(work.data() + 4 * i, _mm256_set1_pd(ctrl[i]));
    for (std::size_t level = n_ctrl - 1; level > 0; --level)
      for (std::size_t i = 0; i < level; ++i) {
        const __m256d wi = _mm256_loadu_pd(work.data() + 4 * i);
        const __m256d wi1 = _mm256_loadu_pd(work.data() + 4 * (i + 1));
        _mm256_storeu_pd(work.data() + 4 * i,
                         _mm256_add_pd(_mm256_mul_pd(s, wi), _mm256_mul_pd(t, wi1)));
      }
    _mm256_storeu_pd(out + j, _mm256_loadu_pd(work.data()));
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

const Backend kAvx2 = {
    "avx2",
    axpy_avx2,
    dot_avx2,
    polytope_margins_avx2,
    bezier_eval_batch_avx2,
};

}  // namespace

const Backend* avx2_backend_if_supported() {
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

}  // namespace stlplan::kern
