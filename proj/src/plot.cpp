#include "stlplan/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stlplan/errors.hpp"

namespace stlplan::plot {

namespace {

struct Mapper {
  double x0, y0, sx, sy, height;
  double X(double wx) const { return (wx - x0) * sx + 20.0; }
  double Y(double wy) const { return height - ((wy - y0) * sy + 20.0); }  // flip y
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Vertices of a bounded 2D polytope, counter-clockwise.
std::vector<std::pair<double, double>> polygon_vertices(const geometry::Polytope& p) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t r = p.rows();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const auto& a = p.row(i);
      const auto& b = p.row(j);
      const double det = a[0] * b[1] - a[1] * b[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (p.offset(i) * b[1] - a[1] * p.offset(j)) / det;
      const double y = (a[0] * p.offset(j) - p.offset(i) * b[0]) / det;
      if (p.contains({x, y}, 1e-9)) pts.emplace_back(x, y);
    }
  }
  if (pts.empty()) return pts;
  double cx = 0.0, cy = 0.0;
  for (auto& [x, y] : pts) {
    cx += x;
    cy += y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const auto& u, const auto& v) {
    return std::atan2(u.second - cy, u.first - cx) < std::atan2(v.second - cy, v.first - cx);
  });
  return pts;
}

void star_path(std::ostringstream& os, double cx, double cy, double r) {
  os << "<path d=\"";
  for (int i = 0; i < 10; ++i) {
    const double ang = -3.14159265358979 / 2.0 + i * 3.14159265358979 / 5.0;
    const double rad = (i % 2 == 0) ? r : 0.42 * r;
    os << (i == 0 ? 'M' : 'L') << fmt(cx + rad * std::cos(ang)) << ' '
       << fmt(cy + rad * std::sin(ang));
  }
  os << "Z\" fill=\"#e8b020\" stroke=\"#7a5a00\" stroke-width=\"1\"/>\n";
}

}  // namespace

std::string render_svg(const scenarios::Scenario& sc, const bezier::Trajectory* trajectory,
                       const encoder::RhoProfile* rho) {
  if (sc.workspace.dim != 2) throw input_error("plotting supports 2D scenarios only");
  const double panel = 520.0;
  const bool with_rho = rho != nullptr && rho->size() > 0;
  const double rho_h = with_rho ? 140.0 : 0.0;
  const double W = panel;
  const double H = panel + rho_h;

  Mapper m;
  m.x0 = sc.workspace.lo[0];
  m.y0 = sc.workspace.lo[1];
  m.sx = (panel - 40.0) / (sc.workspace.hi[0] - sc.workspace.lo[0]);
  m.sy = (panel - 40.0) / (sc.workspace.hi[1] - sc.workspace.lo[1]);
  m.height = panel;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W) << "\" height=\""
     << fmt(H) << "\" viewBox=\"0 0 " << fmt(W) << ' ' << fmt(H) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(W) << "\" height=\"" << fmt(H)
     << "\" fill=\"#ffffff\"/>\n";
  os << "<rect x=\"" << fmt(m.X(sc.workspace.lo[0])) << "\" y=\"" << fmt(m.Y(sc.workspace.hi[1]))
     << "\" width=\"" << fmt((sc.workspace.hi[0] - sc.workspace.lo[0]) * m.sx) << "\" height=\""
     << fmt((sc.workspace.hi[1] - sc.workspace.lo[1]) * m.sy)
     << "\" fill=\"#fafafa\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

  for (const auto& [name, poly] : sc.regions) {
    const auto verts = polygon_vertices(poly);
    if (verts.empty()) continue;
    std::string fill = "#cccccc";
    if (auto it = sc.region_fill.find(name); it != sc.region_fill.end()) fill = it->second;
    os << "<polygon points=\"";
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (i) os << ' ';
      os << fmt(m.X(verts[i].first)) << ',' << fmt(m.Y(verts[i].second));
    }
    os << "\" fill=\"" << fill << "\" fill-opacity=\"0.55\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    double cx = 0.0, cy = 0.0;
    for (const auto& [x, y] : verts) {
      cx += x;
      cy += y;
    }
    cx /= static_cast<double>(verts.size());
    cy /= static_cast<double>(verts.size());
    os << "<text x=\"" << fmt(m.X(cx)) << "\" y=\"" << fmt(m.Y(cy) + 4.0)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\">"
       << name << "</text>\n";
  }

  if (trajectory) {
    os << "<polyline points=\"";
    const std::size_t per = 40;
    std::vector<double> pts = trajectory->sample_positions(per);
    for (std::size_t i = 0; i * 2 < pts.size(); ++i) {
      if (i) os << ' ';
      os << fmt(m.X(pts[i * 2])) << ',' << fmt(m.Y(pts[i * 2 + 1]));
    }
    os << "\" fill=\"none\" stroke=\"#1050c0\" stroke-width=\"2.2\"/>\n";
    // joints
    for (std::size_t k = 0; k < trajectory->size(); ++k) {
      const auto c0 = trajectory->segment(k).control_point(0);
      os << "<circle cx=\"" << fmt(m.X(c0[0])) << "\" cy=\"" << fmt(m.Y(c0[1]))
         << "\" r=\"2\" fill=\"#1050c0\"/>\n";
    }
  }

  // start circle
  if (sc.start.size() == 2) {
    os << "<circle cx=\"" << fmt(m.X(sc.start[0])) << "\" cy=\"" << fmt(m.Y(sc.start[1]))
       << "\" r=\"6\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"2\"/>\n";
  }
  // goal star
  if (!sc.goal_region.empty()) {
    auto it = sc.regions.find(sc.goal_region);
    if (it != sc.regions.end()) {
      const auto verts = polygon_vertices(it->second);
      if (!verts.empty()) {
        double cx = 0.0, cy = 0.0;
        for (const auto& [x, y] : verts) {
          cx += x;
          cy += y;
        }
        cx /= static_cast<double>(verts.size());
        cy /= static_cast<double>(verts.size());
        star_path(os, m.X(cx), m.Y(cy) - 14.0, 9.0);
      }
    }
  }

  if (with_rho) {
    const double top = panel + 18.0;
    const double h = rho_h - 38.0;
    const double total_t = rho->dt * static_cast<double>(rho->size());
    double rho_max = 0.0;
    for (std::size_t k = 0; k < rho->size(); ++k) rho_max = std::max(rho_max, rho->rho(k));
    rho_max = std::max(rho_max, 1e-9);
    auto tx = [&](double t) { return 20.0 + (t / total_t) * (panel - 40.0); };
    auto ty = [&](double v) { return top + h - (v / (rho_max * 1.1)) * h; };
    os << "<rect x=\"20\" y=\"" << fmt(top) << "\" width=\"" << fmt(panel - 40.0)
       << "\" height=\"" << fmt(h) << "\" fill=\"#fafafa\" stroke=\"#888888\"/>\n";
    os << "<polyline points=\"";
    for (std::size_t k = 0; k < rho->size(); ++k) {
      const double t0 = rho->dt * static_cast<double>(k);
      const double t1 = t0 + rho->dt;
      if (k) os << ' ';
      os << fmt(tx(t0)) << ',' << fmt(ty(rho->rho(k))) << ' ' << fmt(tx(t1)) << ','
         << fmt(ty(rho->rho(k)));
    }
    os << "\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"2\"/>\n";
    os << "<text x=\"24\" y=\"" << fmt(top + 14.0)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444444\">tube radius over time</text>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace stlplan::plot
