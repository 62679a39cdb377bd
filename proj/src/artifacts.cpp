#include "stlplan/artifacts.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stlplan/errors.hpp"

namespace stlplan::artifacts {

namespace {
using json = nlohmann::ordered_json;

std::string axis_header(const char* prefix, std::size_t d) {
  static const char* names = "xyzw";
  std::string out;
  for (std::size_t ax = 0; ax < d; ++ax) {
    out += ',';
    out += prefix;
    out += ax < 4 ? std::string(1, names[ax]) : std::to_string(ax);
  }
  return out;
}
}  // namespace

std::string trajectory_to_json(const bezier::Trajectory& y) {
  json j;
  j["dt"] = y.dt();
  j["degree"] = y.degree();
  json segments = json::array();
  for (std::size_t k = 0; k < y.size(); ++k) {
    json seg = json::array();
    for (int i = 0; i <= y.degree(); ++i)
      seg.push_back(y.segment(k).control_point(static_cast<std::size_t>(i)));
    segments.push_back(std::move(seg));
  }
  j["segments"] = std::move(segments);
  return j.dump(2) + "\n";
}

bezier::Trajectory trajectory_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("trajectory JSON parse error: ") + e.what());
  }
  if (!j.contains("dt") || !j.contains("degree") || !j.contains("segments"))
    throw input_error("trajectory JSON needs dt, degree and segments");
  const double dt = j["dt"].get<double>();
  const int degree = j["degree"].get<int>();
  const json& segs = j["segments"];
  if (!segs.is_array() || segs.empty()) throw input_error("trajectory needs segments");
  std::vector<bezier::Segment> out;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const json& seg = segs[k];
    if (!seg.is_array() || seg.size() != static_cast<std::size_t>(degree + 1))
      throw input_error("segment " + std::to_string(k) + " needs degree+1 control points");
    const std::size_t d = seg[0].size();
    std::vector<double> controls;
    controls.reserve((static_cast<std::size_t>(degree) + 1) * d);
    for (const auto& pt : seg) {
      if (!pt.is_array() || pt.size() != d)
        throw input_error("inconsistent control point dimension in segment " + std::to_string(k));
      for (const auto& v : pt) controls.push_back(v.get<double>());
    }
    out.emplace_back(degree, d, std::move(controls), static_cast<double>(k) * dt, dt);
  }
  return bezier::Trajectory(std::move(out));
}

void save_trajectory(const bezier::Trajectory& y, const std::string& path) {
  write_text_file(path, trajectory_to_json(y));
}

bezier::Trajectory load_trajectory(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open trajectory file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return trajectory_from_json(buf.str());
}

void save_rho_profile(const encoder::RhoProfile& rho, const std::string& path) {
  std::ostringstream os;
  os.precision(17);
  os << "k,t_start,t_end,clearance,excursion,rho\n";
  for (std::size_t k = 0; k < rho.size(); ++k)
    os << k << ',' << rho.dt * static_cast<double>(k) << ',' << rho.dt * static_cast<double>(k + 1)
       << ',' << rho.clearance[k] << ',' << rho.excursion[k] << ',' << rho.rho(k) << '\n';
  write_text_file(path, os.str());
}

encoder::RhoProfile load_rho_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open profile file '" + path + "'");
  encoder::RhoProfile rho;
  std::string line;
  if (!std::getline(f, line)) throw input_error("profile file is empty");
  double t_end_last = 0.0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 6) throw input_error("profile rows need 6 columns");
    rho.clearance.push_back(row[3]);
    rho.excursion.push_back(row[4]);
    t_end_last = row[2];
  }
  if (rho.clearance.empty()) throw input_error("profile has no rows");
  rho.dt = t_end_last / static_cast<double>(rho.clearance.size());
  return rho;
}

void save_samples_csv(const bezier::Trajectory& y, const encoder::RhoProfile* rho,
                      int samples_per_segment, const std::string& path) {
  const std::size_t d = y.dim();
  std::ostringstream os;
  os.precision(12);
  os << 't' << axis_header("p", d) << axis_header("v", d) << axis_header("a", d) << ",rho\n";
  std::vector<double> times;
  const std::vector<double> pos = y.sample_positions(static_cast<std::size_t>(samples_per_segment), &times);
  std::vector<bezier::Segment> vel, acc;
  for (std::size_t k = 0; k < y.size(); ++k) {
    vel.push_back(y.segment(k).derivative());
    acc.push_back(vel.back().derivative());
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const std::size_t k = std::min(i / static_cast<std::size_t>(samples_per_segment), y.size() - 1);
    os << t;
    for (std::size_t ax = 0; ax < d; ++ax) os << ',' << pos[i * d + ax];
    const auto v = vel[k].evaluate(t);
    const auto a = acc[k].evaluate(t);
    for (std::size_t ax = 0; ax < d; ++ax) os << ',' << v[ax];
    for (std::size_t ax = 0; ax < d; ++ax) os << ',' << a[ax];
    os << ',' << (rho && k < rho->size() ? rho->rho(k) : 0.0) << '\n';
  }
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw io_error("write to '" + path + "' failed");
}

}  // namespace stlplan::artifacts
