#include "stlplan/scenarios.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stlplan/errors.hpp"

namespace stlplan::scenarios {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw input_error("scenario schema violation at " + pointer + ": " + what);
}

double want_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) schema_error(pointer, "expected a number");
  return j.get<double>();
}

std::vector<double> want_vector(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) schema_error(pointer, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(want_number(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

geometry::Polytope parse_region(const json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("H") || !j.contains("b"))
    schema_error(pointer, "expected an object with H and b");
  const json& H = j["H"];
  if (!H.is_array() || H.empty()) schema_error(pointer + "/H", "expected a non-empty matrix");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < H.size(); ++i)
    rows.push_back(want_vector(H[i], pointer + "/H/" + std::to_string(i)));
  std::vector<double> b = want_vector(j["b"], pointer + "/b");
  if (b.size() != rows.size()) schema_error(pointer, "H and b row counts differ");
  try {
    return geometry::Polytope(std::move(rows), std::move(b));
  } catch (const input_error& e) {
    schema_error(pointer, e.what());
  }
}

json region_to_json(const geometry::Polytope& p) {
  json h = json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) h.push_back(p.row(i));
  json out;
  out["H"] = std::move(h);
  json b = json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) b.push_back(p.offset(i));
  out["b"] = std::move(b);
  return out;
}

}  // namespace

void validate(const Scenario& s) {
  if (s.formula_text.empty()) throw input_error("scenario has no formula");
  if (!s.formula) throw input_error("scenario formula is not parsed");
  if (!(s.rho_star > 0.0)) throw input_error("rho_star must be positive");
  if (s.rho_max != 0.0 && !(s.rho_max > s.rho_star))
    throw input_error("rho_max must exceed rho_star when set");
  if (s.segments < 1) throw input_error("segments must be at least 1");
  if (s.degree < 3) throw input_error("degree must be at least 3");
  if (!(s.horizon > 0.0)) throw input_error("horizon must be positive");
  const std::size_t d = s.workspace.dim;
  if (s.v_max.size() != d || s.a_max.size() != d)
    throw input_error("v_max/a_max dimension must match the workspace");
  for (double v : s.v_max)
    if (!(v > 0.0)) throw input_error("v_max entries must be positive");
  for (double v : s.a_max)
    if (!(v > 0.0)) throw input_error("a_max entries must be positive");
  if (s.start.size() != d) throw input_error("start dimension must match the workspace");
  if (!s.workspace.contains(s.start, 1e-9))
    throw input_error("start position lies outside the workspace");
  for (const auto& [name, p] : s.regions)
    if (p.dim() != d)
      throw input_error("region '" + name + "' dimension does not match the workspace");
  for (const std::string& name : stl::region_names(*s.formula))
    if (!s.regions.count(name))
      throw input_error("formula references unknown region '" + name + "'");
}

Scenario from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("scenario JSON parse error: ") + e.what());
  }
  if (!j.is_object()) schema_error("/", "expected a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    schema_error("/schema", "expected the integer 1");

  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) schema_error("/name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  if (!j.contains("workspace") || !j["workspace"].is_object())
    schema_error("/workspace", "expected an object with lo and hi");
  {
    const json& w = j["workspace"];
    if (!w.contains("lo") || !w.contains("hi"))
      schema_error("/workspace", "expected lo and hi arrays");
    try {
      s.workspace = geometry::Workspace(want_vector(w["lo"], "/workspace/lo"),
                                        want_vector(w["hi"], "/workspace/hi"));
    } catch (const input_error& e) {
      schema_error("/workspace", e.what());
    }
  }
  if (!j.contains("regions") || !j["regions"].is_object())
    schema_error("/regions", "expected an object");
  for (const auto& [name, rj] : j["regions"].items())
    s.regions.emplace(name, parse_region(rj, "/regions/" + name));
  if (!j.contains("formula") || !j["formula"].is_string())
    schema_error("/formula", "expected a string");
  s.formula_text = j["formula"].get<std::string>();
  try {
    s.formula = stl::parse(s.formula_text);
  } catch (const syntax_error& e) {
    schema_error("/formula", e.what());
  }
  s.horizon = want_number(j.value("horizon", json(15.0)), "/horizon");
  if (j.contains("segments")) {
    if (!j["segments"].is_number_integer()) schema_error("/segments", "expected an integer");
    s.segments = j["segments"].get<int>();
  }
  if (j.contains("degree")) {
    if (!j["degree"].is_number_integer()) schema_error("/degree", "expected an integer");
    s.degree = j["degree"].get<int>();
  }
  s.rho_star = want_number(j.value("rho_star", json(0.5)), "/rho_star");
  if (j.contains("rho_max")) s.rho_max = want_number(j["rho_max"], "/rho_max");
  if (!j.contains("v_max")) schema_error("/v_max", "missing");
  s.v_max = want_vector(j["v_max"], "/v_max");
  if (!j.contains("a_max")) schema_error("/a_max", "missing");
  s.a_max = want_vector(j["a_max"], "/a_max");
  if (!j.contains("start")) schema_error("/start", "missing");
  s.start = want_vector(j["start"], "/start");
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_object()) schema_error("/weights", "expected an object");
    s.lambda = want_number(w.value("lambda", json(1.0)), "/weights/lambda");
    s.weight_velocity = want_number(w.value("velocity", json(0.1)), "/weights/velocity");
    s.weight_accel = want_number(w.value("accel", json(0.1)), "/weights/accel");
  }
  if (j.contains("metadata")) {
    const json& md = j["metadata"];
    if (!md.is_object()) schema_error("/metadata", "expected an object");
    if (md.contains("layout")) s.layout = md["layout"].get<std::string>();
    if (md.contains("goal")) s.goal_region = md["goal"].get<std::string>();
    if (md.contains("fill"))
      for (const auto& [name, color] : md["fill"].items())
        s.region_fill[name] = color.get<std::string>();
  }
  try {
    validate(s);
  } catch (const input_error& e) {
    throw input_error(std::string("scenario invalid: ") + e.what());
  }
  return s;
}

std::string to_json_string(const Scenario& s) {
  json j;
  j["schema"] = 1;
  j["name"] = s.name;
  j["workspace"] = {{"lo", s.workspace.lo}, {"hi", s.workspace.hi}};
  json regions = json::object();
  for (const auto& [name, p] : s.regions) regions[name] = region_to_json(p);
  j["regions"] = std::move(regions);
  j["formula"] = s.formula_text;
  j["horizon"] = s.horizon;
  j["segments"] = s.segments;
  j["degree"] = s.degree;
  j["rho_star"] = s.rho_star;
  if (s.rho_max > 0.0) j["rho_max"] = s.rho_max;
  j["v_max"] = s.v_max;
  j["a_max"] = s.a_max;
  j["start"] = s.start;
  j["weights"] = {{"lambda", s.lambda}, {"velocity", s.weight_velocity}, {"accel", s.weight_accel}};
  json md;
  md["layout"] = s.layout.empty() ? "invented" : s.layout;
  if (!s.goal_region.empty()) md["goal"] = s.goal_region;
  if (!s.region_fill.empty()) {
    json fill = json::object();
    for (const auto& [name, color] : s.region_fill) fill[name] = color;
    md["fill"] = std::move(fill);
  }
  j["metadata"] = std::move(md);
  return j.dump(2) + "\n";
}

Scenario load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return from_json_string(buf.str());
}

void save(const Scenario& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f << to_json_string(s);
  if (!f) throw io_error("write to '" + path + "' failed");
}

namespace {

geometry::Polytope box(double x0, double x1, double y0, double y1) {
  return geometry::Polytope::box({x0, y0}, {x1, y1});
}

Scenario base_scenario() {
  Scenario s;
  s.workspace = geometry::Workspace({0.0, 0.0}, {10.0, 10.0});
  s.degree = 5;
  s.lambda = 1.0;
  s.weight_velocity = 0.1;
  s.weight_accel = 0.1;
  s.layout = "invented";
  return s;
}

void finish(Scenario& s) {
  s.formula = stl::parse(s.formula_text);
  validate(s);
}

Scenario make_reach_avoid() {
  Scenario s = base_scenario();
  s.name = "reach-avoid";
  s.horizon = 15.0;
  s.segments = 15;
  s.rho_star = 0.60;
  s.rho_max = 3.5;
  s.v_max = {3.0, 3.0};
  s.a_max = {5.0, 5.0};
  s.start = {0.6, 0.6};
  s.regions.emplace("B", box(2.2, 4.2, 4.2, 6.2));
  s.regions.emplace("Y", box(3.2, 4.8, 6.6, 8.6));
  s.regions.emplace("R", box(5.8, 8.4, 0.4, 3.4));
  s.regions.emplace("G", box(5.8, 8.4, 6.6, 9.6));
  s.formula_text = "G[0,15] !B & G[0,15] !Y & F[0,13] G[0,2] R & F[0,13] G[0,2] G";
  s.goal_region = "G";
  s.region_fill = {{"B", "#6699dd"}, {"Y", "#e0cc55"}, {"R", "#dd6666"}, {"G", "#66bb77"}};
  finish(s);
  return s;
}

Scenario make_complex_reach_avoid() {
  Scenario s = base_scenario();
  s.name = "complex-reach-avoid";
  s.horizon = 20.0;
  s.segments = 20;
  s.rho_star = 0.30;
  s.rho_max = 2.2;
  s.v_max = {2.5, 2.5};
  s.a_max = {5.0, 5.0};
  s.start = {0.6, 0.6};
  s.regions.emplace("Obs1", box(0.0, 1.4, 3.2, 5.2));
  s.regions.emplace("Obs2", box(2.6, 4.2, 2.6, 4.2));
  s.regions.emplace("Obs3", box(4.6, 6.0, 7.2, 10.0));
  s.regions.emplace("Obs4", box(8.0, 9.4, 3.0, 4.4));
  s.regions.emplace("Chg1_1", box(0.4, 2.0, 6.4, 8.0));
  s.regions.emplace("Chg1_2", box(2.8, 4.4, 5.2, 6.8));
  s.regions.emplace("Chg1_3", box(5.6, 7.2, 4.2, 5.8));
  s.regions.emplace("Chg1_4", box(8.2, 9.8, 6.0, 7.6));
  s.regions.emplace("Chg2_1", box(5.6, 7.2, 0.4, 2.0));
  s.regions.emplace("Chg2_2", box(8.2, 9.8, 8.2, 9.8));
  s.regions.emplace("Chg2_3", box(1.0, 2.6, 8.6, 10.0));
  s.formula_text =
      "G[0,20] (!Obs1 & !Obs2 & !Obs3 & !Obs4)"
      " & F[0,17] G[0,3] (Chg1_1 | Chg1_2 | Chg1_3 | Chg1_4)"
      " & F[0,17] G[0,3] (Chg2_1 | Chg2_2 | Chg2_3)";
  s.goal_region = "Chg1_3";
  s.region_fill = {{"Obs1", "#777777"}, {"Obs2", "#777777"}, {"Obs3", "#777777"},
                   {"Obs4", "#777777"}, {"Chg1_1", "#77bb88"}, {"Chg1_2", "#77bb88"},
                   {"Chg1_3", "#77bb88"}, {"Chg1_4", "#77bb88"}, {"Chg2_1", "#7799cc"},
                   {"Chg2_2", "#7799cc"}, {"Chg2_3", "#7799cc"}};
  finish(s);
  return s;
}

Scenario make_narrow_passing() {
  Scenario s = base_scenario();
  s.name = "narrow-passing";
  s.horizon = 15.0;
  s.segments = 15;
  s.rho_star = 0.15;
  s.rho_max = 1.8;
  s.v_max = {2.5, 2.5};
  s.a_max = {5.0, 5.0};
  s.start = {0.6, 0.6};
  s.regions.emplace("Obs1", box(0.0, 2.5, 3.8, 4.4));
  s.regions.emplace("Obs2", box(3.7, 6.1, 3.8, 4.4));
  s.regions.emplace("Obs3", box(7.3, 10.0, 3.8, 4.4));
  s.regions.emplace("Obs4", box(3.2, 4.4, 7.6, 10.0));
  s.regions.emplace("Chg_1", box(2.2, 4.2, 4.8, 6.6));
  s.regions.emplace("Chg_2", box(5.9, 7.9, 4.8, 6.6));
  s.regions.emplace("Goal", box(0.5, 2.5, 7.9, 9.7));
  s.formula_text =
      "F[0,12] G[0,3] (Chg_1 | Chg_2)"
      " & G[0,15] (!Obs1 & !Obs2 & !Obs3 & !Obs4)"
      " & F[0,15] Goal";
  s.goal_region = "Goal";
  s.region_fill = {{"Obs1", "#777777"}, {"Obs2", "#777777"}, {"Obs3", "#777777"},
                   {"Obs4", "#777777"}, {"Chg_1", "#77bb88"}, {"Chg_2", "#77bb88"},
                   {"Goal", "#dd6666"}};
  finish(s);
  return s;
}

Scenario make_door_puzzle() {
  Scenario s = base_scenario();
  s.name = "door-puzzle";
  s.horizon = 25.0;
  s.segments = 25;
  s.rho_star = 0.25;
  s.rho_max = 2.6;
  s.v_max = {2.0, 2.0};
  s.a_max = {4.0, 4.0};
  s.start = {1.4, 1.4};
  s.regions.emplace("K1", box(0.2, 2.8, 0.2, 2.8));
  s.regions.emplace("K2", box(0.2, 3.2, 0.2, 2.0));
  s.regions.emplace("K3", box(0.2, 2.0, 0.2, 4.0));
  s.regions.emplace("K4", box(0.6, 3.4, 0.6, 3.4));
  s.regions.emplace("D1", box(2.0, 3.4, 7.4, 8.6));
  s.regions.emplace("D2", box(4.8, 6.2, 0.8, 2.2));
  s.regions.emplace("D3", box(7.4, 8.6, 0.8, 2.2));
  s.regions.emplace("D4", box(7.4, 8.6, 4.6, 6.0));
  s.regions.emplace("W1", box(3.6, 4.4, 0.0, 7.0));
  s.regions.emplace("W2", box(6.4, 7.2, 3.0, 10.0));
  s.regions.emplace("W3", box(1.0, 1.8, 5.0, 10.0));
  s.regions.emplace("W4", box(8.6, 10.0, 2.6, 3.4));
  s.regions.emplace("W5", box(2.4, 5.6, 9.2, 9.9));
  s.regions.emplace("G", box(8.2, 9.8, 8.2, 9.8));
  s.formula_text =
      "(!D1 U[0,2] K1) & (!D2 U[0,2] K2) & (!D3 U[0,2] K3) & (!D4 U[0,2] K4)"
      " & G[0,25] !W1 & G[0,25] !W2 & G[0,25] !W3 & G[0,25] !W4 & G[0,25] !W5"
      " & F[0,25] G";
  s.goal_region = "G";
  s.region_fill = {{"K1", "#d8c050"}, {"K2", "#d8c050"}, {"K3", "#d8c050"}, {"K4", "#d8c050"},
                   {"D1", "#bb7744"}, {"D2", "#bb7744"}, {"D3", "#bb7744"}, {"D4", "#bb7744"},
                   {"W1", "#777777"}, {"W2", "#777777"}, {"W3", "#777777"}, {"W4", "#777777"},
                   {"W5", "#777777"}, {"G", "#66bb77"}};
  finish(s);
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"reach-avoid", "complex-reach-avoid", "narrow-passing", "door-puzzle"};
}

Scenario builtin(const std::string& name) {
  if (name == "reach-avoid") return make_reach_avoid();
  if (name == "complex-reach-avoid") return make_complex_reach_avoid();
  if (name == "narrow-passing") return make_narrow_passing();
  if (name == "door-puzzle") return make_door_puzzle();
  throw input_error("unknown builtin scenario '" + name +
                    "' (expected reach-avoid, complex-reach-avoid, narrow-passing or door-puzzle)");
}

}  // namespace stlplan::scenarios
