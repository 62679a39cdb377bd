#include "stlplan/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stlplan/errors.hpp"
#include "stlplan/kernels.hpp"

namespace stlplan::geometry {

Workspace::Workspace(Point lo_in, Point hi_in) : lo(std::move(lo_in)), hi(std::move(hi_in)) {
  if (lo.empty() || lo.size() != hi.size())
    throw input_error("workspace lo/hi must be non-empty vectors of equal dimension");
  dim = lo.size();
  for (std::size_t k = 0; k < dim; ++k) {
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw input_error("workspace bounds must be finite");
    if (!(lo[k] < hi[k]))
      throw input_error("workspace requires lo < hi in every axis");
  }
}

double Workspace::diameter() const {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) s += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(s);
}

double Workspace::support(const std::vector<double>& dir) const {
  if (dir.size() != dim) throw input_error("support direction dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) s += dir[k] > 0.0 ? dir[k] * hi[k] : dir[k] * lo[k];
  return s;
}

bool Workspace::contains(const Point& x, double tol) const {
  if (x.size() != dim) throw input_error("point dimension mismatch");
  for (std::size_t k = 0; k < dim; ++k)
    if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
  return true;
}

Polytope::Polytope(std::vector<std::vector<double>> h, std::vector<double> b)
    : h_(std::move(h)), b_(std::move(b)) {
  if (h_.empty() || h_.size() != b_.size())
    throw input_error("polytope needs matching, non-empty H and b");
  dim_ = h_[0].size();
  if (dim_ == 0) throw input_error("polytope rows must have positive dimension");
  norms_.reserve(h_.size());
  hn_flat_.reserve(h_.size() * dim_);
  bn_.reserve(h_.size());
  for (std::size_t i = 0; i < h_.size(); ++i) {
    if (h_[i].size() != dim_) throw input_error("polytope row " + std::to_string(i) + " has inconsistent dimension");
    double sq = 0.0;
    for (double v : h_[i]) {
      if (!std::isfinite(v)) throw input_error("polytope row " + std::to_string(i) + " has non-finite entry");
      sq += v * v;
    }
    if (!std::isfinite(b_[i])) throw input_error("polytope offset " + std::to_string(i) + " is non-finite");
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw input_error("polytope row " + std::to_string(i) + " is zero");
    norms_.push_back(norm);
    for (double v : h_[i]) hn_flat_.push_back(v / norm);
    bn_.push_back(b_[i] / norm);
  }
}

Polytope Polytope::box(const Point& lo, const Point& hi) {
  if (lo.empty() || lo.size() != hi.size()) throw input_error("box lo/hi dimension mismatch");
  const std::size_t d = lo.size();
  std::vector<std::vector<double>> h;
  std::vector<double> b;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> up(d, 0.0), dn(d, 0.0);
    up[k] = 1.0;
    dn[k] = -1.0;
    h.push_back(up);
    b.push_back(hi[k]);
    h.push_back(dn);
    b.push_back(-lo[k]);
  }
  return Polytope(std::move(h), std::move(b));
}

std::vector<double> Polytope::unit_row(std::size_t i) const {
  if (i >= rows()) throw input_error("polytope row index out of range");
  return {hn_flat_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
          hn_flat_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_)};
}

double Polytope::normalized_margin(const Point& x) const {
  if (x.size() != dim_) throw input_error("normalized_margin: point dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows(); ++i) {
    double v = bn_[i];
    const double* h = hn_flat_.data() + i * dim_;
    for (std::size_t k = 0; k < dim_; ++k) v -= h[k] * x[k];
    best = std::min(best, v);
  }
  return best;
}

double Polytope::halfspace_margin(std::size_t i, const Point& x) const {
  if (i >= rows()) throw input_error("halfspace_margin: row index out of range");
  if (x.size() != dim_) throw input_error("halfspace_margin: point dimension mismatch");
  double v = -bn_[i];
  const double* h = hn_flat_.data() + i * dim_;
  for (std::size_t k = 0; k < dim_; ++k) v += h[k] * x[k];
  return v;
}

Polytope Polytope::shrink(double c) const {
  if (c < 0.0) throw input_error("shrink requires c >= 0");
  std::vector<double> b(b_);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= c * norms_[i];
  return Polytope(h_, std::move(b));
}

void batch_margins(const Polytope& p, const double* pts, std::size_t m, double* out) {
  kern::polytope_margins(p.unit_rows_flat().data(), p.unit_offsets().data(), p.rows(),
                         p.dim(), pts, m, out);
}

}  // namespace stlplan::geometry
