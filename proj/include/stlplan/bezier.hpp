#pragma once

#include <cstddef>
#include <vector>

namespace stlplan::bezier {

// n!/(k!(n-k)!) in double precision.
double binomial(int n, int k);

// Value of the degree-n Bernstein basis polynomial i at tau in [0,1].
double bernstein(int n, int i, double tau);

// One polynomial segment in Bernstein form: control points c_0..c_n over
// [start_time, start_time + duration].
class Segment {
public:
  Segment(int degree, std::size_t dim, std::vector<double> controls,
          double start_time, double duration);

  int degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  double start_time() const { return t0_; }
  double duration() const { return dt_; }
  double end_time() const { return t0_ + dt_; }

  const double* control(std::size_t i) const { return controls_.data() + i * dim_; }
  std::vector<double> control_point(std::size_t i) const;
  const std::vector<double>& controls_flat() const { return controls_; }

  // De Casteljau evaluation at absolute time t (within span, 1e-9 slack).
  std::vector<double> evaluate(double t) const;
  // Same curve as a function of the local parameter tau in [0,1].
  std::vector<double> evaluate_local(double tau) const;

  // Derivative segment: degree n-1, controls (n/dt)(c_{i+1}-c_i).
  Segment derivative() const;

  // c_{i+2} - 2 c_{i+1} + c_i, for 0 <= i <= n-2.
  std::vector<double> second_difference(std::size_t i) const;

  // Evaluate one axis at many local parameters (SIMD batch).
  void sample_axis(std::size_t axis, const double* taus, std::size_t m, double* out) const;

private:
  int degree_;
  std::size_t dim_;
  std::vector<double> controls_;  // (n+1) x dim row-major
  double t0_;
  double dt_;
};

// Residual norms at one interior joint.
struct JointResiduals {
  double position;            // |c_{k,n} - c_{k+1,0}|
  double first_difference;    // |(c_{k,n}-c_{k,n-1}) - (c_{k+1,1}-c_{k+1,0})|
  double second_difference;   // |D2 c_{k,n-2} - D2 c_{k+1,0}|
};

// Uniformly timed sequence of equal-degree segments.
class Trajectory {
public:
  explicit Trajectory(std::vector<Segment> segments);

  std::size_t size() const { return segments_.size(); }
  std::size_t dim() const { return segments_.front().dim(); }
  int degree() const { return segments_.front().degree(); }
  double dt() const { return segments_.front().duration(); }
  double start_time() const { return segments_.front().start_time(); }
  double horizon() const { return dt() * static_cast<double>(size()); }
  double end_time() const { return start_time() + horizon(); }
  const Segment& segment(std::size_t k) const { return segments_[k]; }

  // Segment index covering absolute time t (clamped to the ends).
  std::size_t segment_index(double t) const;
  std::vector<double> evaluate(double t) const;

  std::vector<JointResiduals> continuity_residuals() const;

  // samples_per_segment uniformly spaced points per segment (last sample of
  // each segment coincides with the first of the next; the final segment
  // includes its endpoint). Output row-major (count x dim); times optional.
  std::vector<double> sample_positions(std::size_t samples_per_segment,
                                       std::vector<double>* times = nullptr) const;

private:
  std::vector<Segment> segments_;
};

}  // namespace stlplan::bezier
