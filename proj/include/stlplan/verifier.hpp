#pragma once

#include <string>
#include <vector>

#include "stlplan/bezier.hpp"
#include "stlplan/encoder.hpp"
#include "stlplan/geometry.hpp"
#include "stlplan/scenarios.hpp"

namespace stlplan::verifier {

// One named check with its measured value and threshold.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerificationReport {
  bool pass = false;
  std::vector<Check> checks;

  double continuity_position = 0.0;  // residual maxima over joints
  double continuity_velocity = 0.0;
  double continuity_accel = 0.0;
  std::vector<double> velocity_peak;  // dense-sampled per axis
  std::vector<double> accel_peak;
  double stl_margin = 0.0;  // sampled robustness at t=0
  double min_rho = 0.0;
  double max_rho = 0.0;
  int tube_trials = 0;
  int tube_failures = 0;

  std::string to_json() const;
};

struct VerifyOptions {
  int resolution = 1000;  // samples per segment (>= 100)
  int tube_trials = 0;    // 0 skips the tube test
  unsigned seed = 42;
  bool strict = false;  // upgrade warnings (empty profile etc.) to failures
};

// Re-derives every claimed property from the trajectory, scenario and
// robustness profile alone; never consults the encoder.
VerificationReport verify_trajectory(const bezier::Trajectory& y,
                                     const scenarios::Scenario& sc,
                                     const encoder::RhoProfile& rho,
                                     const VerifyOptions& opts = {});

// Random smooth perturbations bounded by the per-segment tube; returns the
// number of perturbed traces that violate the specification (0 expected).
// Sampling evidence, not proof.
int tube_test(const bezier::Trajectory& y, const encoder::RhoProfile& rho,
              const scenarios::Scenario& sc, int trials, unsigned seed,
              int resolution = 1000);

struct GeometricBoundResult {
  bool precondition_ok = false;
  std::string precondition_detail;
  double control_point_slack = 0.0;  // bound minus worst interior distance
  double margin_slack = 0.0;         // worst sample margin minus (r - eps)
  bool pass = false;
};

// Checks the geometric containment guarantee for one segment against one
// region: (i) every interior control point within 3 dt^2 |a|/8 of the nearer
// end control point, (ii) dense curve samples at clearance >= r - eps
// (inside) or beyond some face at clearance >= r - eps (outside).
GeometricBoundResult check_proposition1(const bezier::Segment& seg,
                                        const geometry::Polytope& region, double r,
                                        double eps, const std::vector<double>& a_peak,
                                        bool inside, int samples = 1000);

}  // namespace stlplan::verifier
