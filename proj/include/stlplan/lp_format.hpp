#pragma once

#include <iosfwd>
#include <string>

#include "stlplan/milp.hpp"

namespace stlplan::milp {

// LP text format with Minimize / Subject To / Bounds / Binaries / End
// sections. Numbers are written in shortest round-trip form, so
// export(import(export(m))) is byte-identical to export(m).
void export_lp(const Model& m, std::ostream& os);
void export_lp_file(const Model& m, const std::string& path);

Model import_lp(std::istream& is);
Model import_lp_file(const std::string& path);

// "name value" lines; names must exist in the model; variables not mentioned
// default to the bound-clamped zero. The assignment is validated against the
// model (1e-6 on normalized rows); a violation is rejected naming the worst
// offending constraint.
Solution import_solution(const Model& m, std::istream& is);
Solution import_solution_file(const Model& m, const std::string& path);

}  // namespace stlplan::milp
