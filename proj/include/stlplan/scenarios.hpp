#pragma once

#include <map>
#include <string>
#include <vector>

#include "stlplan/geometry.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::scenarios {

// A complete planning problem: workspace, named regions, specification text,
// horizon and dynamic limits.
struct Scenario {
  std::string name;
  geometry::Workspace workspace;
  stl::RegionMap regions;
  std::string formula_text;
  stl::FormulaPtr formula;  // parsed, pre-normalization

  double horizon = 15.0;  // T seconds
  int segments = 15;      // default N; dt = T/N
  int degree = 5;         // Bezier degree n
  double rho_star = 0.5;  // required minimum robustness, meters
  double rho_max = 0.0;   // cap on the claimed per-segment clearance (0: workspace diameter)
  std::vector<double> v_max;
  std::vector<double> a_max;
  std::vector<double> start;

  double lambda = 1.0;          // robustness reward
  double weight_velocity = 0.1; // Q
  double weight_accel = 0.1;    // R

  // Presentation metadata (optional).
  std::map<std::string, std::string> region_fill;  // name -> SVG fill color
  std::string goal_region;                         // star marker in plots
  std::string layout;                              // e.g. "invented"
};

// Throws input_error naming the offending field (JSON-pointer style paths for
// schema violations on load).
void validate(const Scenario& s);

Scenario from_json_string(const std::string& text);
std::string to_json_string(const Scenario& s);

Scenario load(const std::string& path);
void save(const Scenario& s, const std::string& path);

// reach-avoid | complex-reach-avoid | narrow-passing | door-puzzle
Scenario builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace stlplan::scenarios
