#pragma once

#include <cstddef>
#include <vector>

namespace stlplan::geometry {

using Point = std::vector<double>;

// Axis-aligned bounding box of the planning workspace.
struct Workspace {
  std::size_t dim = 2;
  Point lo;  // meters
  Point hi;

  Workspace() = default;
  Workspace(Point lo, Point hi);

  double diameter() const;
  // max over the box of the linear form dir . x (dir need not be unit).
  double support(const std::vector<double>& dir) const;
  bool contains(const Point& x, double tol = 0.0) const;
};

// Convex polytope {x | Hx <= b}. Rows are stored as supplied; all margin
// computations normalize by the row norm on the fly.
class Polytope {
public:
  Polytope(std::vector<std::vector<double>> h, std::vector<double> b);

  // Axis-aligned box [lo, hi] as 2d half-spaces.
  static Polytope box(const Point& lo, const Point& hi);

  std::size_t rows() const { return b_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& row(std::size_t i) const { return h_[i]; }
  double offset(std::size_t i) const { return b_[i]; }
  double row_norm(std::size_t i) const { return norms_[i]; }

  // Unit-norm row i and its matching offset.
  std::vector<double> unit_row(std::size_t i) const;
  double unit_offset(std::size_t i) const { return b_[i] / norms_[i]; }

  // min_i (b_i - H_i.x)/|H_i|; positive iff strictly inside.
  double normalized_margin(const Point& x) const;

  // (H_i.x - b_i)/|H_i|; >= c iff x lies at clearance c beyond face i.
  double halfspace_margin(std::size_t i, const Point& x) const;

  // Polytope with every offset pulled in by c: b_i -> b_i - c|H_i|.
  Polytope shrink(double c) const;

  bool contains(const Point& x, double tol = 0.0) const {
    return normalized_margin(x) >= -tol;
  }

  // Contiguous unit-norm rows / offsets for batch kernels.
  const std::vector<double>& unit_rows_flat() const { return hn_flat_; }
  const std::vector<double>& unit_offsets() const { return bn_; }

private:
  std::vector<std::vector<double>> h_;
  std::vector<double> b_;
  std::vector<double> norms_;
  std::vector<double> hn_flat_;  // rows*dim, row-major, unit rows
  std::vector<double> bn_;
  std::size_t dim_ = 0;
};

// Minimum margin over a batch of points (row-major m x dim), via kernels.
void batch_margins(const Polytope& p, const double* pts, std::size_t m, double* out);

}  // namespace stlplan::geometry
