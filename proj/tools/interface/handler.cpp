#include "interface/handler.hpp"

#include <cstdlib>
#include <stdexcept>

#include "delaystab/error.hpp"
#include "interface/emit.hpp"

namespace delaystab::interface {

namespace {

// A failure that maps straight onto a response.
struct Reject {
  int status;
  int exit_code;
  json body;
};

json error_body(const std::string& message, std::string_view code) {
  return {{"schema_version", kSchemaVersion}, {"error", message}, {"code", std::string(code)}};
}

Reject malformed(const std::string& message) {
  return {400, 1, error_body(message, to_string(ErrorCode::InvalidArgument))};
}

double number_field(const json& request, const char* key) {
  if (!request.contains(key) || !request.at(key).is_number()) {
    throw malformed(std::string("request needs a numeric \"") + key + "\"");
  }
  return request.at(key).get<double>();
}

std::string format_of(const json& request) {
  if (!request.contains("format")) return "json";
  if (!request.at("format").is_string()) throw malformed("\"format\" must be a string");
  const std::string f = request.at("format").get<std::string>();
  if (f != "json" && f != "csv" && f != "svg") {
    throw malformed("format must be json, csv or svg");
  }
  return f;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed,
                    const std::string& mode) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw malformed("format " + format + " is not available for " + mode);
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Stabilizable: return 0;
    case Verdict::NotStabilizable: return 2;
    case Verdict::Degenerate: return 3;
  }
  return 1;
}

struct Analysis {
  PlantSpec spec;
  HarmonicContext ctx;
  StabilizabilityReport report;
  std::optional<HInterval> interval;
  std::optional<std::string> interval_error;
};

PlantSpec plant_of(const json& request) {
  if (!request.is_object()) throw malformed("request must be a JSON object");
  if (!request.contains("plant")) throw malformed("request needs a \"plant\"");
  PlantSpec spec = parse_plant(request.at("plant"));
  validate(spec);
  return spec;
}

Analysis analyse(const json& request, const HandlerOptions& options) {
  PlantSpec spec = plant_of(request);
  HarmonicContext ctx(normalize(spec), options.scan_max);
  StabilizabilityReport report = analyze(ctx);
  Analysis a{std::move(spec), std::move(ctx), std::move(report), std::nullopt, std::nullopt};
  if (a.report.verdict == Verdict::Stabilizable) {
    try {
      a.interval = admissible_h(a.ctx, a.report.plant_case);
    } catch (const Error& e) {
      a.interval_error = e.what();
    }
  }
  return a;
}

json report_json(const Analysis& a) {
  json j = to_json(a.report, a.interval);
  if (a.interval_error) j["diagnostics"].push_back(*a.interval_error);
  return j;
}

// Region and sweep both need a stabilizable plant with a nonempty interval.
const HInterval& require_interval(const Analysis& a) {
  if (a.report.verdict != Verdict::Stabilizable) {
    json body = error_body("plant is " + to_string(a.report.verdict),
                           to_string(a.report.verdict == Verdict::Degenerate
                                         ? ErrorCode::Degenerate
                                         : ErrorCode::ExistenceFail));
    body["report"] = report_json(a);
    throw Reject{422, exit_for(a.report.verdict), body};
  }
  if (!a.interval) {
    json body = error_body(a.interval_error.value_or("no admissible h"),
                           to_string(ErrorCode::EmptyInterval));
    body["flags"] = json::array({"StabilizableButNotRealized"});
    body["report"] = report_json(a);
    throw Reject{422, 2, body};
  }
  return *a.interval;
}

Response check(const json& request, const HandlerOptions& options) {
  const std::string format = format_of(request);
  require_format(format, {"json", "csv", "svg"}, "check");
  const Analysis a = analyse(request, options);
  Response r;
  r.exit_code = exit_for(a.report.verdict);
  r.body = report_json(a);
  r.body["schema_version"] = kSchemaVersion;
  if (request.contains("grid")) {
    const auto axes = parse_grid(request.at("grid"));
    const ZoneScan scan = scan_parameter_plane(a.spec, axes[0], axes[1], options.scan_max);
    r.body["zones"] = to_json(scan);
    if (format == "csv") r.text = zones_csv(scan);
    if (format == "svg") r.text = zones_svg(scan);
  } else if (format != "json") {
    throw malformed("check renders csv/svg only together with a grid");
  }
  return r;
}

Response zones(const json& request, const HandlerOptions& options) {
  const std::string format = format_of(request);
  const PlantSpec spec = plant_of(request);
  if (!request.contains("grid")) throw malformed("zones needs a \"grid\"");
  const auto axes = parse_grid(request.at("grid"));
  const ZoneScan scan = scan_parameter_plane(spec, axes[0], axes[1], options.scan_max);
  Response r;
  r.body = to_json(scan);
  r.body["schema_version"] = kSchemaVersion;
  if (format == "csv") r.text = zones_csv(scan);
  if (format == "svg") r.text = zones_svg(scan);
  return r;
}

Response region(const json& request, const HandlerOptions& options) {
  const std::string format = format_of(request);
  const double h = number_field(request, "h");
  const Analysis a = analyse(request, options);
  const HInterval& interval = require_interval(a);
  if (!interval.contains(h)) {
    json body = error_body("h must lie in the open interval (" + number(interval.lower).dump() +
                               ", " + number(interval.upper).dump() + ")",
                           to_string(ErrorCode::InvalidArgument));
    body["interval"] = to_json(interval);
    throw Reject{422, 2, body};
  }
  const StabilityRegion reg = build_region(a.ctx, h, interval.kind);
  Response r;
  r.body = to_json(reg);
  r.body["schema_version"] = kSchemaVersion;
  if (format == "csv") r.text = region_csv(reg);
  if (format == "svg") r.text = region_svg(reg);
  return r;
}

Response sweep(const json& request, const HandlerOptions& options) {
  const std::string format = format_of(request);
  require_format(format, {"json", "csv"}, "sweep");
  int steps = 5;
  if (request.contains("steps")) {
    if (!request.at("steps").is_number_integer()) throw malformed("\"steps\" must be an integer");
    steps = request.at("steps").get<int>();
    if (steps < 1) throw malformed("\"steps\" must be at least 1");
  }
  const Analysis a = analyse(request, options);
  const HInterval& interval = require_interval(a);
  const std::vector<StabilityRegion> slices = sweep_h(a.ctx, interval, steps);
  Response r;
  json list = json::array();
  for (const StabilityRegion& s : slices) list.push_back(to_json(s));
  r.body = {{"schema_version", kSchemaVersion},
            {"interval", to_json(interval)},
            {"case", to_string(interval.kind)},
            {"slices", list}};
  if (format == "csv") r.text = sweep_csv(slices);
  return r;
}

Response verify(const json& request, const HandlerOptions& options) {
  require_format(format_of(request), {"json"}, "verify");
  const ControllerPoint point{number_field(request, "h"), number_field(request, "h_i"),
                              number_field(request, "h_d")};
  ContourSpec contour;
  if (request.contains("contour")) {
    const json& c = request.at("contour");
    if (!c.is_object()) throw malformed("\"contour\" must be an object");
    if (c.contains("x_max")) contour.x_max = number_field(c, "x_max");
    if (c.contains("y_max")) contour.y_max = number_field(c, "y_max");
    if (c.contains("samples_per_unit")) {
      contour.samples_per_unit = static_cast<int>(number_field(c, "samples_per_unit"));
    }
    if (contour.samples_per_unit < 50 || !(contour.x_max > 0.0) || !(contour.y_max > 0.0)) {
      throw malformed("contour needs x_max > 0, y_max > 0 and samples_per_unit >= 50");
    }
  }
  const Analysis a = analyse(request, options);

  Response r;
  json& b = r.body;
  b["schema_version"] = kSchemaVersion;
  b["point"] = {{"h", number(point.h)}, {"h_i", number(point.h_i)}, {"h_d", number(point.h_d)}};
  std::string verdict;
  try {
    const RhpCount count = count_rhp_zeros(a.ctx.plant(), point, contour);
    b.update(to_json(count));
    verdict = count.zeros == 0 ? "Stable" : "Unstable";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContourHitsZero) throw;
    b["rhp_zeros"] = nullptr;
    b["contour"] = {{"x_max", number(contour.x_max)},
                    {"y_max", number(contour.y_max)},
                    {"samples_per_unit", contour.samples_per_unit}};
    b["certified"] = false;
    verdict = "Marginal";
  }

  b["region_status"] = nullptr;
  json diagnostics = json::array();
  if (a.interval && a.interval->contains(point.h)) {
    const StabilityRegion reg = build_region(a.ctx, point.h, a.interval->kind);
    const PointStatus status = classify_point(reg.constraints, {point.h_i, point.h_d});
    b["region_status"] = to_string(status);
    if (status == PointStatus::Marginal) verdict = "Marginal";
    const bool inside = status == PointStatus::Inside;
    if ((verdict == "Stable") != inside && status != PointStatus::Marginal) {
      diagnostics.push_back("oracle count and region membership disagree");
    }
  }
  b["verdict"] = verdict;
  b["diagnostics"] = diagnostics;
  r.exit_code = verdict == "Stable" ? 0 : verdict == "Unstable" ? 2 : 3;
  return r;
}

}  // namespace

HandlerOptions options_from_environment() {
  HandlerOptions o;
  if (const char* env = std::getenv("DELAYSTAB_SCAN_MAX")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) o.scan_max = v;
  }
  return o;
}

Response handle(const std::string& mode, const json& request, const HandlerOptions& options) {
  try {
    Response r;
    if (mode == "check") {
      r = check(request, options);
    } else if (mode == "zones") {
      r = zones(request, options);
    } else if (mode == "region") {
      r = region(request, options);
    } else if (mode == "sweep") {
      r = sweep(request, options);
    } else if (mode == "verify") {
      r = verify(request, options);
    } else {
      throw malformed("unknown mode \"" + mode + "\"");
    }
    if (r.text) {
      const std::string format = request.value("format", "json");
      r.content_type = format == "svg" ? "image/svg+xml" : "text/csv";
    }
    return r;
  } catch (const Reject& reject) {
    return {reject.status, reject.exit_code, reject.body, std::nullopt, "application/json"};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidPlant:
      case ErrorCode::CommonFactor:
      case ErrorCode::InvalidArgument:
        return {400, 1, error_body(e.what(), to_string(e.code())), std::nullopt,
                "application/json"};
      case ErrorCode::Degenerate:
      case ErrorCode::MultipleRootSuspected:
        return {422, 3, error_body(e.what(), to_string(e.code())), std::nullopt,
                "application/json"};
      default:
        return {422, 2, error_body(e.what(), to_string(e.code())), std::nullopt,
                "application/json"};
    }
  } catch (const json::exception& e) {
    return {400, 1, error_body(e.what(), to_string(ErrorCode::InvalidArgument)), std::nullopt,
            "application/json"};
  } catch (const std::exception& e) {
    return {500, 1, error_body(e.what(), "Internal"), std::nullopt, "application/json"};
  }
}

}  // namespace delaystab::interface
