#pragma once

#include <string>

#include "stlplan/bezier.hpp"
#include "stlplan/encoder.hpp"

namespace stlplan::artifacts {

// Trajectory JSON: {"dt": ..., "degree": n, "segments": [[c_0, ..., c_n], ...]}
// with each control point a coordinate array. Start time is 0.
std::string trajectory_to_json(const bezier::Trajectory& y);
bezier::Trajectory trajectory_from_json(const std::string& text);
void save_trajectory(const bezier::Trajectory& y, const std::string& path);
bezier::Trajectory load_trajectory(const std::string& path);

// Per-segment profile CSV: k,t_start,t_end,clearance,excursion,rho
void save_rho_profile(const encoder::RhoProfile& rho, const std::string& path);
encoder::RhoProfile load_rho_profile(const std::string& path);

// Dense samples CSV: t, position, velocity, acceleration, rho(t) columns.
void save_samples_csv(const bezier::Trajectory& y, const encoder::RhoProfile* rho,
                      int samples_per_segment, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace stlplan::artifacts
