#pragma once

#include <string>

#include "stlplan/bezier.hpp"
#include "stlplan/encoder.hpp"
#include "stlplan/scenarios.hpp"

namespace stlplan::plot {

// SVG rendering of a 2D scenario: regions, optional trajectory with start
// circle and goal star, optional tube-radius side panel. Throws input_error
// for non-2D workspaces.
std::string render_svg(const scenarios::Scenario& sc, const bezier::Trajectory* trajectory,
                       const encoder::RhoProfile* rho);

inline std::string render_scenario_svg(const scenarios::Scenario& sc) {
  return render_svg(sc, nullptr, nullptr);
}

}  // namespace stlplan::plot
