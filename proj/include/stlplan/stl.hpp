#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stlplan/geometry.hpp"

namespace stlplan::stl {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Bounded, non-singleton interval attached to temporal operators.
struct TimeInterval {
  double a = 0.0;
  double b = 0.0;
};

enum class Kind {
  True,
  Pred,        // region membership
  NegPred,     // region avoidance (negation already pushed to the leaf)
  Not,         // only before normalization
  And,
  Or,
  Always,
  Eventually,
  Until,
};

struct Formula {
  Kind kind = Kind::True;
  std::string region;                // Pred / NegPred
  TimeInterval interval;             // Always / Eventually / Until
  std::vector<FormulaPtr> children;  // And/Or n-ary; Until has exactly 2
};

FormulaPtr make_true();
FormulaPtr make_pred(std::string region);
FormulaPtr make_neg_pred(std::string region);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(std::vector<FormulaPtr> children);
FormulaPtr make_or(std::vector<FormulaPtr> children);
FormulaPtr make_always(TimeInterval i, FormulaPtr f);
FormulaPtr make_eventually(TimeInterval i, FormulaPtr f);
FormulaPtr make_until(TimeInterval i, FormulaPtr lhs, FormulaPtr rhs);

// Concrete syntax: G[a,b] / F[a,b] prefix, U[a,b] infix, ! & | and parentheses;
// region names are [A-Za-z][A-Za-z0-9_]*. Precedence ! > U > & > |.
FormulaPtr parse(const std::string& text);

// Canonical text form; parse(to_string(f)) is structurally equal to f.
std::string to_string(const Formula& f);
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

bool structurally_equal(const Formula& a, const Formula& b);

// Push negations down to predicates (De Morgan + temporal dualities).
// Throws unsupported_error for !Until and !True.
FormulaPtr to_nnf(const FormulaPtr& f);
bool is_nnf(const Formula& f);

// Least T' such that satisfaction over [0, T'] is determined.
double formula_horizon(const Formula& f);
inline double formula_horizon(const FormulaPtr& f) { return formula_horizon(*f); }

// All region names referenced.
std::vector<std::string> region_names(const Formula& f);

using RegionMap = std::map<std::string, geometry::Polytope>;

// Uniformly sampled signal: point i is at time t0 + i*dt.
struct Trace {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t dim = 0;
  std::vector<double> points;  // count x dim, row-major

  std::size_t count() const { return dim ? points.size() / dim : 0; }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double end_time() const { return count() ? time(count() - 1) : t0; }
  const double* point(std::size_t i) const { return points.data() + i * dim; }
};

// Quantitative semantics on the sampled trace, evaluated at start time t.
// Positive implies sampled satisfaction. Verification oracle only; the
// planner never consults this during synthesis.
double sampled_robustness(const FormulaPtr& f, const Trace& trace,
                          const RegionMap& regions, double t);

}  // namespace stlplan::stl
