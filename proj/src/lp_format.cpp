#include "stlplan/lp_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "stlplan/errors.hpp"

namespace stlplan::milp {

namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

void write_terms(std::ostream& os, const std::vector<std::pair<int, double>>& terms,
                 const Model& m) {
  for (const auto& [j, c] : terms) {
    os << (c < 0.0 ? " - " : " + ") << num(std::abs(c)) << ' ' << m.variable(j).name;
  }
}

}  // namespace

void export_lp(const Model& m, std::ostream& os) {
  os << "Minimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (std::size_t j = 0; j < m.num_variables(); ++j)
    if (m.objective_coeff(static_cast<int>(j)) != 0.0)
      obj.emplace_back(static_cast<int>(j), m.objective_coeff(static_cast<int>(j)));
  write_terms(os, obj, m);
  if (m.objective_constant() != 0.0)
    os << (m.objective_constant() < 0.0 ? " - " : " + ") << num(std::abs(m.objective_constant()));
  os << '\n';
  if (m.num_constraints() > 0) {
    os << "Subject To\n";
    for (std::size_t i = 0; i < m.num_constraints(); ++i) {
      const Constraint& c = m.constraint(static_cast<int>(i));
      os << ' ' << c.name << ':';
      write_terms(os, c.coeffs, m);
      switch (c.sense) {
        case Sense::LE: os << " <= "; break;
        case Sense::EQ: os << " = "; break;
        case Sense::GE: os << " >= "; break;
      }
      os << num(c.rhs) << '\n';
    }
  }
  os << "Bounds\n";
  for (const auto& v : m.variables())
    os << ' ' << num(v.lo) << " <= " << v.name << " <= " << num(v.hi) << '\n';
  bool any_binary = false;
  for (const auto& v : m.variables()) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << ' ' << v.name << '\n';
  }
  os << "End\n";
}

void export_lp_file(const Model& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  export_lp(m, f);
  if (!f) throw io_error("write to '" + path + "' failed");
}

namespace {

struct LpTokenizer {
  explicit LpTokenizer(std::istream& is) {
    std::string tok;
    std::string line;
    while (std::getline(is, line)) {
      std::size_t pos = 0;
      // strip comments
      if (auto c = line.find('\\'); c != std::string::npos) line.resize(c);
      while (pos < line.size()) {
        const char ch = line[pos];
        if (std::isspace(static_cast<unsigned char>(ch))) {
          ++pos;
          continue;
        }
        tok.clear();
        if (ch == '+' || ch == '-' || ch == ':') {
          tok += ch;
          ++pos;
        } else if (ch == '<' || ch == '>' || ch == '=') {
          tok += ch;
          ++pos;
          if (pos < line.size() && line[pos] == '=') {
            tok += '=';
            ++pos;
          }
        } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
          // number; signs are allowed right after an exponent marker
          while (pos < line.size()) {
            const char c = line[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E') {
              tok += c;
              ++pos;
            } else if ((c == '+' || c == '-') && !tok.empty() &&
                       (tok.back() == 'e' || tok.back() == 'E')) {
              tok += c;
              ++pos;
            } else {
              break;
            }
          }
        } else {
          while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])) &&
                 std::string("+-:<>=").find(line[pos]) == std::string::npos) {
            tok += line[pos];
            ++pos;
          }
        }
        tokens.push_back(tok);
      }
    }
  }

  bool done() const { return idx >= tokens.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : tokens[idx];
  }
  std::string take() {
    if (done()) throw input_error("LP parse error: unexpected end of input");
    return tokens[idx++];
  }

  std::vector<std::string> tokens;
  std::size_t idx = 0;
};

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  const char c = s[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
         ((c == '+' || c == '-') && s.size() > 1);
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw input_error("LP parse error: bad number '" + s + "'");
  return v;
}

// number with an optional leading sign token
double take_number(LpTokenizer& t) {
  double sign = 1.0;
  while (t.peek() == "+" || t.peek() == "-") sign = (t.take() == "-") ? -sign : sign;
  return sign * parse_number(t.take());
}

struct PendingRow {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

// terms until a sense token / section keyword; returns trailing constant sum.
void parse_expression(LpTokenizer& t, PendingRow& row) {
  double sign = 1.0;
  bool have_sign = false;
  while (!t.done()) {
    const std::string& p = t.peek();
    if (p == "+" || p == "-") {
      sign = (p == "-") ? -sign : sign;
      have_sign = true;
      t.take();
      continue;
    }
    if (p == "<=" || p == ">=" || p == "=" || p == "<" || p == ">") break;
    if (!have_sign && (p == "Subject" || p == "Bounds" || p == "Binaries" || p == "End")) break;
    const std::string tok = t.take();
    if (is_number(tok)) {
      const double v = parse_number(tok);
      // coefficient before a name, or a bare constant
      if (!t.done() && t.peek() != "+" && t.peek() != "-" && t.peek() != "<=" &&
          t.peek() != ">=" && t.peek() != "=" && t.peek() != "Subject" && t.peek() != "Bounds" &&
          t.peek() != "Binaries" && t.peek() != "End") {
        row.terms.emplace_back(t.take(), sign * v);
      } else {
        row.constant += sign * v;
      }
    } else {
      row.terms.emplace_back(tok, sign * 1.0);
    }
    sign = 1.0;
    have_sign = false;
  }
}

}  // namespace

Model import_lp(std::istream& is) {
  LpTokenizer t(is);
  if (t.take() != "Minimize") throw input_error("LP parse error: expected 'Minimize'");
  PendingRow objective;
  {
    std::string name = t.take();
    if (t.peek() == ":") {
      t.take();
      objective.name = name;
    } else {
      throw input_error("LP parse error: expected 'obj:'");
    }
    parse_expression(t, objective);
  }

  std::vector<PendingRow> rows;
  if (t.peek() == "Subject") {
    t.take();
    if (t.take() != "To") throw input_error("LP parse error: expected 'Subject To'");
    while (!t.done() && t.peek() != "Bounds" && t.peek() != "Binaries" && t.peek() != "End") {
      PendingRow row;
      row.name = t.take();
      if (t.take() != ":") throw input_error("LP parse error: constraint '" + row.name + "' needs ':'");
      parse_expression(t, row);
      const std::string s = t.take();
      if (s == "<=" || s == "<")
        row.sense = Sense::LE;
      else if (s == ">=" || s == ">")
        row.sense = Sense::GE;
      else if (s == "=")
        row.sense = Sense::EQ;
      else
        throw input_error("LP parse error: bad sense '" + s + "'");
      row.rhs = take_number(t) - row.constant;
      rows.push_back(std::move(row));
    }
  }

  struct BoundLine {
    double lo;
    std::string name;
    double hi;
  };
  std::vector<BoundLine> bounds;
  if (t.peek() == "Bounds") {
    t.take();
    while (!t.done() && t.peek() != "Binaries" && t.peek() != "End") {
      BoundLine b;
      b.lo = take_number(t);
      if (t.take() != "<=") throw input_error("LP parse error in bounds");
      b.name = t.take();
      if (t.take() != "<=") throw input_error("LP parse error in bounds");
      b.hi = take_number(t);
      bounds.push_back(std::move(b));
    }
  }
  std::vector<std::string> binaries;
  if (t.peek() == "Binaries") {
    t.take();
    while (!t.done() && t.peek() != "End") binaries.push_back(t.take());
  }
  if (t.done() || t.take() != "End") throw input_error("LP parse error: expected 'End'");

  Model m;
  for (const auto& b : bounds) {
    const bool isbin = std::find(binaries.begin(), binaries.end(), b.name) != binaries.end();
    m.add_variable(b.name, b.lo, b.hi, isbin ? VarKind::Binary : VarKind::Continuous);
  }
  auto var_of = [&m](const std::string& name) {
    auto idx = m.find_variable(name);
    if (!idx) throw input_error("LP parse error: variable '" + name + "' missing from Bounds");
    return *idx;
  };
  for (const auto& [name, c] : objective.terms) m.add_objective_coeff(var_of(name), c);
  m.set_objective_constant(objective.constant);
  for (auto& row : rows) {
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(row.terms.size());
    for (const auto& [name, c] : row.terms) coeffs.emplace_back(var_of(name), c);
    m.add_constraint(row.name, std::move(coeffs), row.sense, row.rhs);
  }
  return m;
}

Model import_lp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open '" + path + "'");
  return import_lp(f);
}

Solution import_solution(const Model& m, std::istream& is) {
  std::vector<double> x(m.num_variables());
  for (std::size_t j = 0; j < m.num_variables(); ++j)
    x[j] = std::clamp(0.0, m.variable(static_cast<int>(j)).lo, m.variable(static_cast<int>(j)).hi);
  std::string name;
  while (is >> name) {
    if (name[0] == '#') {  // comment to end of line
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    std::string value;
    if (!(is >> value)) throw input_error("solution parse error: missing value for '" + name + "'");
    auto idx = m.find_variable(name);
    if (!idx) throw input_error("solution references unknown variable '" + name + "'");
    x[static_cast<std::size_t>(*idx)] = parse_number(value);
  }
  if (auto viol = m.check_assignment(x, 1e-6)) {
    std::ostringstream os;
    os << "solution rejected: constraint '" << viol->name << "' violated by " << viol->amount;
    throw input_error(os.str());
  }
  Solution sol;
  sol.status = SolveStatus::Feasible;
  sol.values = std::move(x);
  sol.objective = m.objective_value(sol.values);
  sol.best_bound = sol.objective;
  return sol;
}

Solution import_solution_file(const Model& m, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open '" + path + "'");
  return import_solution(m, f);
}

}  // namespace stlplan::milp
