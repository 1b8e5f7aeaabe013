#include "interface/emit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace delaystab::interface {

namespace {

std::string fmt(double x, const char* spec = "%.12g") {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, x);
  std::string s = buf;
  if (s == "-0" || s == "-0.00") s.erase(0, 1);
  return s;
}

std::string px(double x) { return fmt(x, "%.2f"); }

struct View {
  double x0, x1, y0, y1;
  double width = 640.0, height = 480.0, margin = 48.0;

  double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
  double sy(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

View fit(const std::vector<Point2>& pts) {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  for (const Point2& p : pts) {
    if (!std::isfinite(p.h_i) || !std::isfinite(p.h_d)) continue;
    x0 = std::min(x0, p.h_i);
    x1 = std::max(x1, p.h_i);
    y0 = std::min(y0, p.h_d);
    y1 = std::max(y1, p.h_d);
  }
  if (x1 - x0 < 1e-9) { x0 -= 1.0; x1 += 1.0; }
  if (y1 - y0 < 1e-9) { y0 -= 1.0; y1 += 1.0; }
  const double px_ = 0.1 * (x1 - x0), py_ = 0.1 * (y1 - y0);
  return {x0 - px_, x1 + px_, y0 - py_, y1 + py_};
}

// Segment of a x + b y = c inside the view box, if any.
std::optional<std::array<Point2, 2>> clip_line(const View& v, double a, double b, double c) {
  std::vector<Point2> hits;
  auto add = [&](double x, double y) {
    if (x >= v.x0 - 1e-12 && x <= v.x1 + 1e-12 && y >= v.y0 - 1e-12 && y <= v.y1 + 1e-12) {
      hits.push_back({x, y});
    }
  };
  if (std::abs(b) > 1e-15) {
    add(v.x0, (c - a * v.x0) / b);
    add(v.x1, (c - a * v.x1) / b);
  }
  if (std::abs(a) > 1e-15) {
    add((c - b * v.y0) / a, v.y0);
    add((c - b * v.y1) / a, v.y1);
  }
  if (hits.size() < 2) return std::nullopt;
  auto far = std::max_element(hits.begin(), hits.end(), [&](const Point2& p, const Point2& q) {
    return std::hypot(p.h_i - hits[0].h_i, p.h_d - hits[0].h_d) <
           std::hypot(q.h_i - hits[0].h_i, q.h_d - hits[0].h_d);
  });
  return std::array<Point2, 2>{hits[0], *far};
}

void header(std::ostringstream& os, const View& v, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(v.width) << "\" height=\""
     << px(v.height) << "\" viewBox=\"0 0 " << px(v.width) << ' ' << px(v.height) << "\">\n";
  os << "<title>" << title << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << px(v.width) << "\" height=\"" << px(v.height)
     << "\" fill=\"white\"/>\n";
}

void frame(std::ostringstream& os, const View& v, const std::string& xlabel,
           const std::string& ylabel) {
  os << "<rect x=\"" << px(v.margin) << "\" y=\"" << px(v.margin) << "\" width=\""
     << px(v.width - 2 * v.margin) << "\" height=\"" << px(v.height - 2 * v.margin)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << px(v.width / 2) << "\" y=\"" << px(v.height - 12)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel << "</text>\n";
  os << "<text x=\"14\" y=\"" << px(v.height / 2) << "\" text-anchor=\"middle\" font-size=\"14\" "
     << "transform=\"rotate(-90 14 " << px(v.height / 2) << ")\">" << ylabel << "</text>\n";
  os << "<text x=\"" << px(v.margin) << "\" y=\"" << px(v.height - v.margin + 16)
     << "\" font-size=\"11\">" << fmt(v.x0, "%.3g") << "</text>\n";
  os << "<text x=\"" << px(v.width - v.margin) << "\" y=\"" << px(v.height - v.margin + 16)
     << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v.x1, "%.3g") << "</text>\n";
  os << "<text x=\"" << px(v.margin - 4) << "\" y=\"" << px(v.height - v.margin)
     << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v.y0, "%.3g") << "</text>\n";
  os << "<text x=\"" << px(v.margin - 4) << "\" y=\"" << px(v.margin + 10)
     << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v.y1, "%.3g") << "</text>\n";
}

}  // namespace

std::string zones_csv(const ZoneScan& scan) {
  std::ostringstream os;
  os << kZoneCsvHeader << '\n';
  for (const ZoneCell& c : scan.cells) {
    os << fmt(c.param1) << ',' << fmt(c.param2) << ',' << to_string(c.verdict) << ','
       << (c.zone ? to_string(*c.zone) : "") << ',' << fmt(c.phi1) << ',' << fmt(c.phi2) << ','
       << c.poles << ',' << c.ne_required << ',' << c.ne_achieved << '\n';
  }
  return os.str();
}

std::string region_csv(const StabilityRegion& region) {
  std::ostringstream os;
  os << "kind,index,label,h_i,h_d\n";
  for (std::size_t i = 0; i < region.polygon.vertices.size(); ++i) {
    const Point2& p = region.polygon.vertices[i];
    os << "polygon," << i << ",," << fmt(p.h_i) << ',' << fmt(p.h_d) << '\n';
  }
  for (std::size_t i = 0; i < region.triangles.size(); ++i) {
    const TriangleGeometry& t = region.triangles[i];
    const std::array<std::pair<const char*, Point2>, 5> named = {
        {{"V", t.v}, {"U", t.u}, {"W", t.w}, {"R", t.r}, {"S", t.s}}};
    for (const auto& [label, p] : named) {
      os << "triangle," << i + 1 << ',' << label << ',' << fmt(p.h_i) << ',' << fmt(p.h_d)
         << '\n';
    }
  }
  return os.str();
}

std::string sweep_csv(const std::vector<StabilityRegion>& slices) {
  std::ostringstream os;
  os << "h,vertex,h_i,h_d\n";
  for (const StabilityRegion& r : slices) {
    for (std::size_t i = 0; i < r.polygon.vertices.size(); ++i) {
      const Point2& p = r.polygon.vertices[i];
      os << fmt(r.h) << ',' << i << ',' << fmt(p.h_i) << ',' << fmt(p.h_d) << '\n';
    }
  }
  return os.str();
}

std::string region_svg(const StabilityRegion& region) {
  std::vector<Point2> pts = region.polygon.unbounded ? std::vector<Point2>{}
                                                     : region.polygon.vertices;
  for (const TriangleGeometry& t : region.triangles) {
    pts.push_back(t.u);
    pts.push_back(t.w);
    // V of later pairs sits far out along h_i; keep the view on the region.
    if (&t == &region.triangles.front()) pts.push_back(t.v);
  }
  const View v = fit(pts);
  std::ostringstream os;
  header(os, v, "stability region at h = " + fmt(region.h, "%.6g"));

  os << "<g id=\"constraints\" stroke=\"#999999\" stroke-width=\"1\">\n";
  for (const HalfPlane& c : region.constraints) {
    if (auto seg = clip_line(v, c.a, c.b, c.c)) {
      os << "<line x1=\"" << px(v.sx((*seg)[0].h_i)) << "\" y1=\"" << px(v.sy((*seg)[0].h_d))
         << "\" x2=\"" << px(v.sx((*seg)[1].h_i)) << "\" y2=\"" << px(v.sy((*seg)[1].h_d))
         << "\"/>\n";
    }
  }
  os << "</g>\n";

  if (!region.polygon.vertices.empty()) {
    os << "<polygon id=\"region\" fill=\"#7fbf7f\" fill-opacity=\"0.6\" stroke=\"#1f6f1f\" "
          "stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < region.polygon.vertices.size(); ++i) {
      const Point2& p = region.polygon.vertices[i];
      os << (i ? " " : "") << px(v.sx(p.h_i)) << ',' << px(v.sy(p.h_d));
    }
    os << "\"/>\n";
  } else {
    os << "<text x=\"" << px(v.width / 2) << "\" y=\"" << px(v.height / 2)
       << "\" text-anchor=\"middle\" font-size=\"16\">no stabilizing PID at this h</text>\n";
  }

  os << "<g id=\"triangles\" fill=\"none\" stroke=\"#3050c0\" stroke-dasharray=\"4 3\">\n";
  for (const TriangleGeometry& t : region.triangles) {
    os << "<polygon points=\"" << px(v.sx(t.u.h_i)) << ',' << px(v.sy(t.u.h_d)) << ' '
       << px(v.sx(t.v.h_i)) << ',' << px(v.sy(t.v.h_d)) << ' ' << px(v.sx(t.w.h_i)) << ','
       << px(v.sy(t.w.h_d)) << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"vertices\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < region.triangles.size(); ++i) {
    const TriangleGeometry& t = region.triangles[i];
    const std::array<std::pair<const char*, Point2>, 3> named = {
        {{"U", t.u}, {"V", t.v}, {"W", t.w}}};
    for (const auto& [label, p] : named) {
      if (p.h_i < v.x0 || p.h_i > v.x1 || p.h_d < v.y0 || p.h_d > v.y1) continue;
      os << "<circle cx=\"" << px(v.sx(p.h_i)) << "\" cy=\"" << px(v.sy(p.h_d))
         << "\" r=\"3\" fill=\"#3050c0\"/>";
      os << "<text x=\"" << px(v.sx(p.h_i) + 5) << "\" y=\"" << px(v.sy(p.h_d) - 5) << "\">"
         << label << i + 1 << "</text>\n";
    }
  }
  os << "</g>\n";
  frame(os, v, "h_i", "h_d");
  os << "</svg>\n";
  return os.str();
}

std::string zones_svg(const ZoneScan& scan) {
  const ParameterAxis& a1 = scan.axis1;
  const ParameterAxis& a2 = scan.axis2;
  View v{a1.min, a1.max, a2.min, a2.max};
  std::ostringstream os;
  header(os, v, "process-parameter zones");
  const double cw = (a1.max - a1.min) / a1.steps;
  const double ch = (a2.max - a2.min) / a2.steps;
  auto colour = [](const ZoneCell& c) -> const char* {
    if (c.zone) {
      switch (*c.zone) {
        case ZoneLabel::Z1: return "#8fd18f";
        case ZoneLabel::Z2: return "#8fb8e8";
        case ZoneLabel::Z3: return "#f0b070";
      }
    }
    switch (c.verdict) {
      case Verdict::Stabilizable: return "#c8e8c8";
      case Verdict::NotStabilizable: return "#ffffff";
      case Verdict::Degenerate: return "#bbbbbb";
    }
    return "#ffffff";
  };
  os << "<g id=\"cells\" stroke=\"none\">\n";
  for (int i = 0; i < a1.steps; ++i) {
    for (int k = 0; k < a2.steps; ++k) {
      const ZoneCell& c = scan.cells[static_cast<std::size_t>(i * a2.steps + k)];
      const double x = a1.min + i * cw;
      const double y = a2.min + (k + 1) * ch;
      os << "<rect x=\"" << px(v.sx(x)) << "\" y=\"" << px(v.sy(y)) << "\" width=\""
         << px(v.sx(x + cw) - v.sx(x)) << "\" height=\"" << px(v.sy(y - ch) - v.sy(y))
         << "\" fill=\"" << colour(c) << "\"/>\n";
    }
  }
  os << "</g>\n";
  static constexpr std::array<std::pair<const char*, const char*>, 4> kStroke = {{
      {"phi1", "#c03030"}, {"phi2", "#3030c0"}, {"U", "#000000"}, {"E_d", "#a040a0"}}};
  for (const auto& [name, segments] : scan.boundaries) {
    const char* stroke = name.starts_with("psi") ? "#308030" : "#555555";
    for (const auto& [n, s] : kStroke) {
      if (name == n) stroke = s;
    }
    os << "<g class=\"boundary\" data-field=\"" << name << "\" stroke=\"" << stroke
       << "\" stroke-width=\"1.5\">\n";
    for (const BoundarySegment& s : segments) {
      os << "<line x1=\"" << px(v.sx(s.x0)) << "\" y1=\"" << px(v.sy(s.y0)) << "\" x2=\""
         << px(v.sx(s.x1)) << "\" y2=\"" << px(v.sy(s.y1)) << "\"/>\n";
    }
    os << "</g>\n";
  }
  frame(os, v, a1.name, a2.name);
  os << "</svg>\n";
  return os.str();
}

}  // namespace delaystab::interface
