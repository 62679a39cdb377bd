#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "stlplan/errors.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::stl {

namespace {

void check_interval(const TimeInterval& i) {
  if (!(i.a >= 0.0) || !(i.a < i.b) || !std::isfinite(i.b))
    throw input_error("time interval requires 0 <= a < b");
}

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

// Operator precedence for printing; higher binds tighter.
int prec(Kind k) {
  switch (k) {
    case Kind::Or: return 0;
    case Kind::And: return 1;
    case Kind::Until: return 2;
    default: return 3;  // unary operators and atoms
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void print(const Formula& f, int min_prec, std::string& out);

void print_child(const Formula& f, int min_prec, std::string& out) {
  const bool need_parens = prec(f.kind) < min_prec;
  if (need_parens) out += '(';
  print(f, need_parens ? 0 : min_prec, out);
  if (need_parens) out += ')';
}

void print(const Formula& f, int /*min_prec*/, std::string& out) {
  switch (f.kind) {
    case Kind::True:
      out += "True";
      break;
    case Kind::Pred:
      out += f.region;
      break;
    case Kind::NegPred:
      out += '!';
      out += f.region;
      break;
    case Kind::Not:
      out += '!';
      print_child(*f.children[0], 3, out);
      break;
    case Kind::And:
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " & ";
        print_child(*f.children[i], 2, out);
      }
      break;
    case Kind::Or:
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " | ";
        print_child(*f.children[i], 1, out);
      }
      break;
    case Kind::Always:
    case Kind::Eventually:
      out += (f.kind == Kind::Always) ? 'G' : 'F';
      out += '[' + format_number(f.interval.a) + ',' + format_number(f.interval.b) + "] ";
      print_child(*f.children[0], 3, out);
      break;
    case Kind::Until:
      print_child(*f.children[0], 3, out);
      out += " U[" + format_number(f.interval.a) + ',' + format_number(f.interval.b) + "] ";
      print_child(*f.children[1], 2, out);
      break;
  }
}

}  // namespace

FormulaPtr make_true() { return node({Kind::True, "", {}, {}}); }

FormulaPtr make_pred(std::string region) {
  if (region.empty()) throw input_error("predicate needs a region name");
  return node({Kind::Pred, std::move(region), {}, {}});
}

FormulaPtr make_neg_pred(std::string region) {
  if (region.empty()) throw input_error("predicate needs a region name");
  return node({Kind::NegPred, std::move(region), {}, {}});
}

FormulaPtr make_not(FormulaPtr f) {
  if (!f) throw input_error("null operand");
  // Negated leaves fold immediately; Not nodes only ever wrap composites.
  if (f->kind == Kind::Pred) return make_neg_pred(f->region);
  if (f->kind == Kind::NegPred) return make_pred(f->region);
  if (f->kind == Kind::Not) return f->children[0];
  return node({Kind::Not, "", {}, {std::move(f)}});
}

FormulaPtr make_and(std::vector<FormulaPtr> children) {
  if (children.empty()) throw input_error("conjunction needs at least one operand");
  if (children.size() == 1) return children[0];
  return node({Kind::And, "", {}, std::move(children)});
}

FormulaPtr make_or(std::vector<FormulaPtr> children) {
  if (children.empty()) throw input_error("disjunction needs at least one operand");
  if (children.size() == 1) return children[0];
  return node({Kind::Or, "", {}, std::move(children)});
}

FormulaPtr make_always(TimeInterval i, FormulaPtr f) {
  check_interval(i);
  if (!f) throw input_error("null operand");
  return node({Kind::Always, "", i, {std::move(f)}});
}

FormulaPtr make_eventually(TimeInterval i, FormulaPtr f) {
  check_interval(i);
  if (!f) throw input_error("null operand");
  return node({Kind::Eventually, "", i, {std::move(f)}});
}

FormulaPtr make_until(TimeInterval i, FormulaPtr lhs, FormulaPtr rhs) {
  check_interval(i);
  if (!lhs || !rhs) throw input_error("null operand");
  return node({Kind::Until, "", i, {std::move(lhs), std::move(rhs)}});
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.region != b.region) return false;
  if (a.interval.a != b.interval.a || a.interval.b != b.interval.b) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace {

FormulaPtr nnf(const FormulaPtr& f);

// NNF of the negation of f.
FormulaPtr nnf_negated(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Pred:
      return make_neg_pred(f->region);
    case Kind::NegPred:
      return make_pred(f->region);
    case Kind::Not:
      return nnf(f->children[0]);
    case Kind::And: {
      std::vector<FormulaPtr> c;
      c.reserve(f->children.size());
      for (const auto& ch : f->children) c.push_back(nnf_negated(ch));
      return make_or(std::move(c));
    }
    case Kind::Or: {
      std::vector<FormulaPtr> c;
      c.reserve(f->children.size());
      for (const auto& ch : f->children) c.push_back(nnf_negated(ch));
      return make_and(std::move(c));
    }
    case Kind::Always:
      return make_eventually(f->interval, nnf_negated(f->children[0]));
    case Kind::Eventually:
      return make_always(f->interval, nnf_negated(f->children[0]));
    case Kind::Until:
      throw unsupported_error(
          "negation of an Until formula requires a Release operator, which the grammar does not provide");
    case Kind::True:
      throw unsupported_error("negation of True is not supported");
  }
  throw input_error("unreachable formula kind");
}

FormulaPtr nnf(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::Pred:
    case Kind::NegPred:
      return f;
    case Kind::Not:
      return nnf_negated(f->children[0]);
    case Kind::And:
    case Kind::Or: {
      std::vector<FormulaPtr> c;
      c.reserve(f->children.size());
      for (const auto& ch : f->children) c.push_back(nnf(ch));
      return f->kind == Kind::And ? make_and(std::move(c)) : make_or(std::move(c));
    }
    case Kind::Always:
      return make_always(f->interval, nnf(f->children[0]));
    case Kind::Eventually:
      return make_eventually(f->interval, nnf(f->children[0]));
    case Kind::Until:
      return make_until(f->interval, nnf(f->children[0]), nnf(f->children[1]));
  }
  throw input_error("unreachable formula kind");
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) {
  if (!f) throw input_error("null formula");
  return nnf(f);
}

bool is_nnf(const Formula& f) {
  if (f.kind == Kind::Not) return false;
  for (const auto& c : f.children)
    if (!is_nnf(*c)) return false;
  return true;
}

double formula_horizon(const Formula& f) {
  switch (f.kind) {
    case Kind::True:
    case Kind::Pred:
    case Kind::NegPred:
      return 0.0;
    case Kind::Not:
      return formula_horizon(*f.children[0]);
    case Kind::And:
    case Kind::Or: {
      double h = 0.0;
      for (const auto& c : f.children) h = std::max(h, formula_horizon(*c));
      return h;
    }
    case Kind::Always:
    case Kind::Eventually:
      return f.interval.b + formula_horizon(*f.children[0]);
    case Kind::Until:
      return f.interval.b +
             std::max(formula_horizon(*f.children[0]), formula_horizon(*f.children[1]));
  }
  return 0.0;
}

std::vector<std::string> region_names(const Formula& f) {
  std::set<std::string> names;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    if (cur->kind == Kind::Pred || cur->kind == Kind::NegPred) names.insert(cur->region);
    for (const auto& c : cur->children) stack.push_back(c.get());
  }
  return {names.begin(), names.end()};
}

}  // namespace stlplan::stl
