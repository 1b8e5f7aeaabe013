#include "interface/codec.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "delaystab/error.hpp"

namespace delaystab::interface {

namespace {

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing field \"") + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field \"") + key + "\" must be a number");
  }
  return v.get<double>();
}

std::vector<double> number_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field \"") + key + "\" must be an array");
  }
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("field \"") + key + "\" must hold numbers only");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

std::string dir_string(Direction d) { return d == Direction::Less ? "lt" : "gt"; }

std::string kind_string(HalfPlane::Kind k) {
  switch (k) {
    case HalfPlane::Kind::Root: return "root";
    case HalfPlane::Kind::Axis: return "axis";
    case HalfPlane::Kind::DerivativeBound: return "hd_bound";
  }
  return "root";
}

json axis_json(const ParameterAxis& a) {
  return {{"param", a.name}, {"min", number(a.min)}, {"max", number(a.max)}, {"steps", a.steps}};
}

ParameterAxis axis_from_text(const std::string& item) {
  std::vector<std::string> parts;
  std::stringstream ss(item);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) {
    throw Error(ErrorCode::InvalidArgument, "grid axis must be NAME:min:max:steps, got \"" + item + "\"");
  }
  ParameterAxis axis;
  axis.name = parts[0];
  try {
    std::size_t used = 0;
    axis.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    axis.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    axis.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "grid axis \"" + item + "\" has a bad number");
  }
  return axis;
}

void check_axes(const std::vector<ParameterAxis>& axes) {
  if (axes.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs exactly two axes");
  }
  for (const ParameterAxis& a : axes) {
    if (a.steps < 1 || !(a.max > a.min)) {
      throw Error(ErrorCode::InvalidArgument, "grid axis " + a.name + " needs max > min and steps >= 1");
    }
  }
}

}  // namespace

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // no negative zero in output
  return r;
}

json point(const Point2& p) { return json::array({number(p.h_i), number(p.h_d)}); }

PlantSpec parse_plant(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "plant must be a JSON object");
  PlantSpec plant;
  plant.gain = j.contains("gain") ? required_number(j, "gain") : 1.0;
  plant.delay = required_number(j, "delay");
  if (!j.contains("time_constants")) {
    throw Error(ErrorCode::InvalidArgument, "missing field \"time_constants\"");
  }
  plant.time_constants = number_list(j, "time_constants");
  if (j.contains("zero_constants")) plant.zero_constants = number_list(j, "zero_constants");
  return plant;
}

json to_json(const PlantSpec& plant) {
  return {{"gain", number(plant.gain)},
          {"delay", number(plant.delay)},
          {"time_constants", numbers(plant.time_constants)},
          {"zero_constants", numbers(plant.zero_constants)}};
}

std::vector<ParameterAxis> parse_grid(const std::string& text) {
  std::vector<ParameterAxis> axes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) axes.push_back(axis_from_text(item));
  check_axes(axes);
  return axes;
}

std::vector<ParameterAxis> parse_grid(const json& j) {
  if (j.is_string()) return parse_grid(j.get<std::string>());
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "grid must be a string or an array");
  std::vector<ParameterAxis> axes;
  for (const json& a : j) {
    if (!a.is_object() || !a.contains("param") || !a.at("param").is_string()) {
      throw Error(ErrorCode::InvalidArgument, "grid axis needs a \"param\" name");
    }
    ParameterAxis axis;
    axis.name = a.at("param").get<std::string>();
    axis.min = required_number(a, "min");
    axis.max = required_number(a, "max");
    if (!a.contains("steps") || !a.at("steps").is_number_integer()) {
      throw Error(ErrorCode::InvalidArgument, "grid axis needs integer \"steps\"");
    }
    axis.steps = a.at("steps").get<int>();
    axes.push_back(axis);
  }
  check_axes(axes);
  return axes;
}

json to_json(const HInterval& interval) {
  return json::array({number(interval.lower), number(interval.upper)});
}

json to_json(const StabilizabilityReport& report, const std::optional<HInterval>& interval) {
  json j;
  j["verdict"] = to_string(report.verdict);
  j["principal_term_ok"] = report.principal_term.ok;
  j["reason"] = report.principal_term.reason;
  j["case"] = to_string(report.plant_case);
  j["m_p"] = report.m_p;
  j["epsilon"] = number(report.epsilon);
  j["phi1"] = number(report.phi.phi1);
  j["phi2"] = number(report.phi.phi2);
  j["window_r"] = report.window_r;
  j["required_Ne_per_period"] = report.ne_required;
  j["achieved_Ne_per_period"] = report.ne_achieved;
  j["required_Nr"] = report.required.nr(report.window_r);
  if (report.achieved) {
    j["Ne1"] = report.achieved->ne1;
    j["pole_count"] = report.achieved->poles.count;
    j["pole_count_certified"] = report.achieved->poles.certified;
  } else {
    j["Ne1"] = nullptr;
    j["pole_count"] = nullptr;
    j["pole_count_certified"] = nullptr;
  }
  j["zone_label"] = report.zone ? json(to_string(*report.zone)) : json(nullptr);
  j["features"] = report.features;
  j["hd_bound"] = report.principal_term.hd_bound ? number(*report.principal_term.hd_bound)
                                                 : json(nullptr);
  j["admissible_h"] = interval ? to_json(*interval) : json(nullptr);
  j["diagnostics"] = report.diagnostics;
  return j;
}

json to_json(const StabilityRegion& region) {
  json j;
  j["h"] = number(region.h);
  j["case"] = to_string(region.plant_case);
  json constraints = json::array();
  for (const HalfPlane& c : region.constraints) {
    json cj{{"kind", kind_string(c.kind)}, {"dir", dir_string(c.dir)}};
    if (c.kind == HalfPlane::Kind::Root) {
      cj["y0"] = number(c.y0);
      cj["rhs"] = number(c.rhs);
    } else {
      // a h_i + b h_d < c, written out for the non-root constraints.
      cj["y0"] = nullptr;
      cj["rhs"] = number(c.c);
      cj["a"] = number(c.a);
      cj["b"] = number(c.b);
      cj["dir"] = "lt";
    }
    constraints.push_back(cj);
  }
  j["constraints"] = constraints;
  json triangles = json::array();
  for (const TriangleGeometry& t : region.triangles) {
    triangles.push_back({{"V", point(t.v)},
                         {"U", point(t.u)},
                         {"W", point(t.w)},
                         {"R", point(t.r)},
                         {"S", point(t.s)}});
  }
  j["triangles"] = triangles;
  json polygon = json::array();
  for (const Point2& p : region.polygon.vertices) polygon.push_back(point(p));
  j["polygon"] = polygon;
  j["flags"] = region.flags;
  j["hd_bound"] = region.hd_bound ? number(*region.hd_bound) : json(nullptr);
  j["y_r2"] = number(region.y_r2);
  return j;
}

json to_json(const ZoneScan& scan) {
  json j;
  j["param1"] = axis_json(scan.axis1);
  j["param2"] = axis_json(scan.axis2);
  json cells = json::array();
  for (const ZoneCell& c : scan.cells) {
    cells.push_back({{"param1", number(c.param1)},
                     {"param2", number(c.param2)},
                     {"verdict", to_string(c.verdict)},
                     {"zone", c.zone ? json(to_string(*c.zone)) : json(nullptr)},
                     {"phi1", number(c.phi1)},
                     {"phi2", number(c.phi2)},
                     {"poles", c.poles},
                     {"Ne_required", c.ne_required},
                     {"Ne_achieved", c.ne_achieved},
                     {"features", c.features}});
  }
  j["cells"] = cells;
  json boundaries = json::object();
  for (const auto& [name, segments] : scan.boundaries) {
    json list = json::array();
    for (const BoundarySegment& s : segments) {
      list.push_back({number(s.x0), number(s.y0), number(s.x1), number(s.y1)});
    }
    boundaries[name] = list;
  }
  j["boundaries"] = boundaries;
  return j;
}

json to_json(const RhpCount& count) {
  return {{"rhp_zeros", count.zeros},
          {"winding", count.winding},
          {"enclosed_poles", count.enclosed_poles},
          {"contour",
           {{"x_max", number(count.contour.x_max)},
            {"y_max", number(count.contour.y_max)},
            {"samples_per_unit", count.contour.samples_per_unit}}},
          {"certified", count.certified},
          {"residual", number(count.residual)}};
}

}  // namespace delaystab::interface
