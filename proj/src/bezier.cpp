#include "stlplan/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stlplan/errors.hpp"
#include "stlplan/kernels.hpp"

namespace stlplan::bezier {

namespace {
constexpr double kSpanTol = 1e-9;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double bernstein(int n, int i, double tau) {
  if (i < 0 || i > n) throw input_error("bernstein index out of range");
  return binomial(n, i) * std::pow(1.0 - tau, n - i) * std::pow(tau, i);
}

Segment::Segment(int degree, std::size_t dim, std::vector<double> controls,
                 double start_time, double duration)
    : degree_(degree), dim_(dim), controls_(std::move(controls)), t0_(start_time), dt_(duration) {
  if (degree_ < 0) throw input_error("segment degree must be non-negative");
  if (dim_ == 0) throw input_error("segment dimension must be positive");
  if (!(dt_ > 0.0)) throw input_error("segment duration must be positive");
  if (controls_.size() != static_cast<std::size_t>(degree_ + 1) * dim_)
    throw input_error("segment needs (degree+1) control points");
  for (double v : controls_)
    if (!std::isfinite(v)) throw input_error("segment control points must be finite");
}

std::vector<double> Segment::control_point(std::size_t i) const {
  if (i > static_cast<std::size_t>(degree_)) throw input_error("control point index out of range");
  return {controls_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
          controls_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_)};
}

std::vector<double> Segment::evaluate(double t) const {
  if (t < t0_ - kSpanTol || t > t0_ + dt_ + kSpanTol)
    throw input_error("evaluation time outside segment span");
  double tau = (t - t0_) / dt_;
  tau = std::clamp(tau, 0.0, 1.0);
  return evaluate_local(tau);
}

std::vector<double> Segment::evaluate_local(double tau) const {
  std::vector<double> work(controls_);
  const double s = 1.0 - tau;
  for (int level = degree_; level > 0; --level)
    for (int i = 0; i < level; ++i)
      for (std::size_t k = 0; k < dim_; ++k) {
        const std::size_t a = static_cast<std::size_t>(i) * dim_ + k;
        work[a] = s * work[a] + tau * work[a + dim_];
      }
  work.resize(dim_);
  return work;
}

Segment Segment::derivative() const {
  if (degree_ < 1) throw input_error("derivative requires degree >= 1");
  const double scale = static_cast<double>(degree_) / dt_;
  std::vector<double> c(static_cast<std::size_t>(degree_) * dim_);
  for (int i = 0; i < degree_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const std::size_t a = static_cast<std::size_t>(i) * dim_ + k;
      c[a] = scale * (controls_[a + dim_] - controls_[a]);
    }
  return Segment(degree_ - 1, dim_, std::move(c), t0_, dt_);
}

std::vector<double> Segment::second_difference(std::size_t i) const {
  if (degree_ < 2 || i + 2 > static_cast<std::size_t>(degree_))
    throw input_error("second difference index out of range");
  std::vector<double> r(dim_);
  const double* c0 = control(i);
  const double* c1 = control(i + 1);
  const double* c2 = control(i + 2);
  for (std::size_t k = 0; k < dim_; ++k) r[k] = c2[k] - 2.0 * c1[k] + c0[k];
  return r;
}

void Segment::sample_axis(std::size_t axis, const double* taus, std::size_t m, double* out) const {
  if (axis >= dim_) throw input_error("sample axis out of range");
  std::vector<double> ctrl(static_cast<std::size_t>(degree_) + 1);
  for (int i = 0; i <= degree_; ++i) ctrl[static_cast<std::size_t>(i)] = control(static_cast<std::size_t>(i))[axis];
  kern::bezier_eval_batch(ctrl.data(), ctrl.size(), taus, m, out);
}

Trajectory::Trajectory(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw input_error("trajectory needs at least one segment");
  const Segment& first = segments_.front();
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const Segment& s = segments_[k];
    if (s.degree() != first.degree()) throw input_error("trajectory segments must share degree");
    if (s.dim() != first.dim()) throw input_error("trajectory segments must share dimension");
    if (std::abs(s.duration() - first.duration()) > kSpanTol)
      throw input_error("trajectory requires a uniform segment duration");
    const double expected = first.start_time() + static_cast<double>(k) * first.duration();
    if (std::abs(s.start_time() - expected) > 1e-7)
      throw input_error("trajectory segment " + std::to_string(k) + " start time is off-grid");
  }
}

std::size_t Trajectory::segment_index(double t) const {
  const double rel = (t - start_time()) / dt();
  auto k = static_cast<std::ptrdiff_t>(std::floor(rel + kSpanTol));
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(size()) - 1);
  return static_cast<std::size_t>(k);
}

std::vector<double> Trajectory::evaluate(double t) const {
  return segments_[segment_index(t)].evaluate(t);
}

std::vector<JointResiduals> Trajectory::continuity_residuals() const {
  std::vector<JointResiduals> out;
  const int n = degree();
  const std::size_t d = dim();
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    const Segment& a = segments_[k];
    const Segment& b = segments_[k + 1];
    std::vector<double> pos(d), fd(d), sd(d);
    const double* an = a.control(static_cast<std::size_t>(n));
    const double* an1 = a.control(static_cast<std::size_t>(n - 1));
    const double* b0 = b.control(0);
    const double* b1 = b.control(1);
    for (std::size_t j = 0; j < d; ++j) {
      pos[j] = an[j] - b0[j];
      fd[j] = (an[j] - an1[j]) - (b1[j] - b0[j]);
    }
    const std::vector<double> da = a.second_difference(static_cast<std::size_t>(n - 2));
    const std::vector<double> db = b.second_difference(0);
    for (std::size_t j = 0; j < d; ++j) sd[j] = da[j] - db[j];
    out.push_back({norm(pos), norm(fd), norm(sd)});
  }
  return out;
}

std::vector<double> Trajectory::sample_positions(std::size_t samples_per_segment,
                                                 std::vector<double>* times) const {
  if (samples_per_segment == 0) throw input_error("samples_per_segment must be positive");
  const std::size_t d = dim();
  const std::size_t count = size() * samples_per_segment + 1;
  std::vector<double> out(count * d);
  if (times) {
    times->resize(count);
    for (std::size_t i = 0; i < count; ++i)
      (*times)[i] = start_time() + dt() * static_cast<double>(i) / static_cast<double>(samples_per_segment);
  }
  std::vector<double> taus(samples_per_segment + 1);
  std::vector<double> axis_vals(samples_per_segment + 1);
  for (std::size_t j = 0; j <= samples_per_segment; ++j)
    taus[j] = static_cast<double>(j) / static_cast<double>(samples_per_segment);
  for (std::size_t k = 0; k < size(); ++k) {
    const bool last = (k + 1 == size());
    const std::size_t m = samples_per_segment + (last ? 1 : 0);
    for (std::size_t ax = 0; ax < d; ++ax) {
      segments_[k].sample_axis(ax, taus.data(), m, axis_vals.data());
      for (std::size_t j = 0; j < m; ++j)
        out[(k * samples_per_segment + j) * d + ax] = axis_vals[j];
    }
  }
  return out;
}

}  // namespace stlplan::bezier
