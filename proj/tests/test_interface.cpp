#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "delaystab/error.hpp"
#include "interface/codec.hpp"
#include "interface/emit.hpp"
#include "interface/handler.hpp"

using namespace delaystab;
using namespace delaystab::interface;

namespace {

json example_plant() {
  return {{"gain", 1.0}, {"delay", 1.0}, {"time_constants", {0.6, 0.8}}, {"zero_constants", json::array()}};
}

json request(json extra = json::object()) {
  json r = {{"plant", example_plant()}};
  r.update(extra);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

double at(const json& pair, int k) { return pair.at(static_cast<std::size_t>(k)).get<double>(); }

}  // namespace

TEST_CASE("number rounding") {
  CHECK(number(1.0).dump() == "1.0");
  CHECK(number(0.1 + 0.2).get<double>() == 0.3);
  CHECK(number(2.0 / 3.0).dump() == "0.666666666667");
  CHECK(number(-0.0).dump() == "0.0");
  CHECK(number(NAN).is_null());
  CHECK(number(INFINITY).is_null());
  CHECK(number(1.23456789012345e-20).get<double>() == 1.23456789012e-20);
}

TEST_CASE("plant codec") {
  const PlantSpec p = parse_plant(example_plant());
  CHECK(p.gain == 1.0);
  CHECK(p.delay == 1.0);
  CHECK(p.time_constants == std::vector<double>{0.6, 0.8});
  CHECK(p.zero_constants.empty());
  CHECK(parse_plant(to_json(p)).time_constants == p.time_constants);

  const json defaults = {{"delay", 0.5}, {"time_constants", {0.3}}};
  const PlantSpec d = parse_plant(defaults);
  CHECK(d.gain == 1.0);
  CHECK(d.zero_constants.empty());

  CHECK_THROWS_AS((void)parse_plant(json::array()), Error);
  CHECK_THROWS_AS((void)parse_plant(json{{"time_constants", {0.6}}}), Error);
  CHECK_THROWS_AS((void)parse_plant(json{{"delay", "1"}, {"time_constants", {0.6}}}), Error);
  CHECK_THROWS_AS((void)parse_plant(json{{"delay", 1.0}, {"time_constants", 0.6}}), Error);
  CHECK_THROWS_AS((void)parse_plant(json{{"delay", 1.0}, {"time_constants", {"a"}}}), Error);

  const json out = to_json(p);
  for (const char* key : {"gain", "delay", "time_constants", "zero_constants"}) {
    CHECK(out.contains(key));
  }
}

TEST_CASE("grid parsing") {
  const auto axes = parse_grid(std::string("T1:-3:3:60,T2:-3:3:60"));
  REQUIRE(axes.size() == 2);
  CHECK(axes[0].name == "T1");
  CHECK(axes[0].min == -3.0);
  CHECK(axes[0].max == 3.0);
  CHECK(axes[0].steps == 60);
  CHECK(axes[1].name == "T2");

  const json array = json::array({{{"param", "T1"}, {"min", 0.1}, {"max", 2.0}, {"steps", 4}},
                                  {{"param", "L"}, {"min", 0.5}, {"max", 1.5}, {"steps", 3}}});
  const auto from_json = parse_grid(array);
  REQUIRE(from_json.size() == 2);
  CHECK(from_json[1].name == "L");
  CHECK(from_json[1].steps == 3);
  CHECK(parse_grid(json("T1:0:1:2,T2:0:1:2")).size() == 2);

  CHECK_THROWS_AS((void)parse_grid(std::string("T1:-3:3:60")), Error);
  CHECK_THROWS_AS((void)parse_grid(std::string("T1:3:-3:60,T2:0:1:2")), Error);
  CHECK_THROWS_AS((void)parse_grid(std::string("T1:0:1:0,T2:0:1:2")), Error);
  CHECK_THROWS_AS((void)parse_grid(std::string("T1:0:x:2,T2:0:1:2")), Error);
  CHECK_THROWS_AS((void)parse_grid(json(3)), Error);
}

TEST_CASE("check response for the example") {
  const Response r = handle("check", request());
  CHECK(r.status == 200);
  CHECK(r.exit_code == 0);
  const json& b = r.body;
  CHECK(b.at("schema_version") == "1");
  CHECK(b.at("verdict") == "Stabilizable");
  CHECK(b.at("zone_label") == "Z1");
  CHECK(b.at("case") == "Case1");
  CHECK(b.at("principal_term_ok") == true);
  CHECK(b.at("required_Nr") == 15);
  CHECK(b.at("window_r") == 3);
  CHECK(b.at("required_Ne_per_period") == b.at("achieved_Ne_per_period"));
  CHECK(b.at("pole_count") == 1);
  CHECK(b.at("phi1").get<double>() > 0.0);
  CHECK(b.at("phi2").get<double>() > 0.0);
  REQUIRE(b.at("admissible_h").is_array());
  CHECK(at(b.at("admissible_h"), 0) == -1.0);
  CHECK(std::abs(at(b.at("admissible_h"), 1) - 2.330) < 0.002);
  CHECK(b.at("diagnostics").is_array());
  CHECK(r.content_type == "application/json");
  CHECK_FALSE(r.text.has_value());
}

TEST_CASE("check verdicts map to exit codes") {
  json order = request();
  order["plant"]["time_constants"] = {0.6, 0.8};
  order["plant"]["zero_constants"] = {0.3, 0.4};
  const Response r = handle("check", order);
  CHECK(r.status == 200);
  CHECK(r.exit_code == 2);
  CHECK(r.body.at("verdict") == "NotStabilizable");
  CHECK(r.body.at("principal_term_ok") == false);
  CHECK(r.body.at("diagnostics").dump().find("OrderViolation") != std::string::npos);

  json degenerate = request();
  degenerate["plant"]["time_constants"] = {-2.0, -1.5};
  CHECK(handle("check", degenerate).exit_code == 3);
  CHECK(handle("check", degenerate).body.at("verdict") == "Degenerate");

  json unstabilizable = request();
  unstabilizable["plant"]["time_constants"] = {-0.6, -0.8};
  CHECK(handle("check", unstabilizable).exit_code == 2);
}

TEST_CASE("malformed requests") {
  for (const json& bad : {json::array(), json{{"h", 1}}, json{{"plant", 3}},
                          json{{"plant", {{"delay", -1.0}, {"time_constants", {0.6}}}}},
                          json{{"plant", {{"delay", 1.0}, {"time_constants", {0.0}}}}},
                          json{{"plant", {{"delay", 1.0}, {"time_constants", {0.5}},
                                          {"zero_constants", {0.5}}}}}}) {
    const Response r = handle("check", bad);
    CHECK(r.status == 400);
    CHECK(r.exit_code == 1);
    CHECK(r.body.at("schema_version") == "1");
    CHECK(r.body.contains("error"));
  }
  CHECK(handle("launch", request()).status == 400);
  CHECK(handle("check", request({{"format", "xml"}})).status == 400);
  CHECK(handle("check", request({{"format", "csv"}})).status == 400);
  CHECK(handle("region", request()).status == 400);
  CHECK(handle("region", request({{"h", "0.5"}})).status == 400);
  CHECK(handle("sweep", request({{"steps", 0}})).status == 400);
  CHECK(handle("sweep", request({{"format", "svg"}})).status == 400);
  CHECK(handle("verify", request({{"h", 0.5}, {"h_i", 1.0}})).status == 400);
  CHECK(handle("verify", request({{"h", 0.5}, {"h_i", 1.0}, {"h_d", 0.5},
                                  {"contour", {{"samples_per_unit", 10}}}}))
            .status == 400);
  CHECK(handle("zones", request()).status == 400);
  CHECK(handle("zones", request({{"grid", "T1:0:1:2"}})).status == 400);
}

TEST_CASE("region response") {
  const Response r = handle("region", request({{"h", 0.5}}));
  CHECK(r.status == 200);
  CHECK(r.exit_code == 0);
  const json& b = r.body;
  CHECK(b.at("schema_version") == "1");
  CHECK(b.at("h") == 0.5);
  CHECK(b.at("case") == "Case1");
  CHECK(b.at("flags").empty());
  REQUIRE(b.at("polygon").size() == 3);
  const json& first = b.at("triangles").at(0);
  CHECK(std::abs(at(first.at("V"), 0) - 2.600) < 0.002);
  CHECK(std::abs(at(first.at("V"), 1) - 2.016) < 0.002);
  CHECK(std::abs(at(first.at("U"), 1) - 1.600) < 0.002);
  CHECK(std::abs(at(first.at("W"), 1) - (-1.476)) < 0.002);
  const json& second = b.at("triangles").at(1);
  CHECK(std::abs(at(second.at("R"), 1) - 4.097) < 0.002);
  CHECK(std::abs(at(second.at("S"), 1) - (-2.638)) < 0.002);

  const json& c0 = b.at("constraints").at(0);
  CHECK(c0.at("kind") == "root");
  CHECK(c0.at("dir") == "lt");
  CHECK(std::abs(c0.at("rhs").get<double>() - 1.099) < 0.002);
  CHECK(std::abs(c0.at("y0").get<double>() - 0.863) < 0.002);
  CHECK(b.at("constraints").at(1).at("dir") == "gt");
  bool axis = false;
  for (const json& c : b.at("constraints")) axis = axis || c.at("kind") == "axis";
  CHECK(axis);
}

TEST_CASE("region outside the interval") {
  for (double h : {3.0, -1.0, 2.5}) {
    const Response r = handle("region", request({{"h", h}}));
    CHECK(r.status == 422);
    CHECK(r.exit_code == 2);
    REQUIRE(r.body.contains("interval"));
    CHECK(at(r.body.at("interval"), 0) == -1.0);
    CHECK(std::abs(at(r.body.at("interval"), 1) - 2.330) < 0.002);
    CHECK(r.body.at("error").get<std::string>().find("interval") != std::string::npos);
  }
  json bad = request({{"h", 0.5}});
  bad["plant"]["time_constants"] = {-0.6, -0.8};
  const Response r = handle("region", bad);
  CHECK(r.status == 422);
  CHECK(r.exit_code == 2);
  CHECK(r.body.at("report").at("verdict") == "NotStabilizable");
}

TEST_CASE("region csv and svg") {
  const Response csv = handle("region", request({{"h", 0.5}, {"format", "csv"}}));
  REQUIRE(csv.text.has_value());
  CHECK(csv.content_type == "text/csv");
  const auto rows = lines(*csv.text);
  REQUIRE(rows.size() > 4);
  CHECK(rows[0] == "kind,index,label,h_i,h_d");
  CHECK(rows[1].rfind("polygon,", 0) == 0);

  const Response svg = handle("region", request({{"h", 0.5}, {"format", "svg"}}));
  REQUIRE(svg.text.has_value());
  CHECK(svg.content_type == "image/svg+xml");
  const std::string& s = *svg.text;
  CHECK(s.rfind("<svg", 0) == 0);
  for (const char* label : {">U1<", ">V1<", ">W1<", "id=\"region\""}) {
    CHECK(s.find(label) != std::string::npos);
  }
  const Response again = handle("region", request({{"h", 0.5}, {"format", "svg"}}));
  CHECK(*again.text == s);
}

TEST_CASE("sweep response") {
  const Response r = handle("sweep", request({{"steps", 3}}));
  CHECK(r.status == 200);
  CHECK(r.body.at("slices").size() == 3);
  CHECK(r.body.at("case") == "Case1");
  double previous = -1.0;
  for (const json& s : r.body.at("slices")) {
    CHECK(s.at("h").get<double>() > previous);
    previous = s.at("h").get<double>();
  }
  CHECK(handle("sweep", request()).body.at("slices").size() == 5);
  const Response csv = handle("sweep", request({{"steps", 2}, {"format", "csv"}}));
  REQUIRE(csv.text.has_value());
  CHECK(lines(*csv.text).at(0) == "h,vertex,h_i,h_d");
}

TEST_CASE("verify response") {
  const Response inside = handle("verify", request({{"h", 0.5}, {"h_i", 1.0}, {"h_d", 0.5}}));
  CHECK(inside.status == 200);
  CHECK(inside.exit_code == 0);
  CHECK(inside.body.at("verdict") == "Stable");
  CHECK(inside.body.at("rhp_zeros") == 0);
  CHECK(inside.body.at("certified") == true);
  CHECK(inside.body.at("region_status") == "Stable");
  CHECK(inside.body.at("contour").at("x_max") == 30.0);
  CHECK(inside.body.at("diagnostics").empty());

  const Response outside = handle("verify", request({{"h", 0.5}, {"h_i", 5.0}, {"h_d", 0.0}}));
  CHECK(outside.exit_code == 2);
  CHECK(outside.body.at("verdict") == "Unstable");
  CHECK(outside.body.at("rhp_zeros").get<int>() >= 1);
  CHECK(outside.body.at("region_status") == "Unstable");

  const Response origin = handle("verify", request({{"h", 0.5}, {"h_i", 0.0}, {"h_d", 0.5}}));
  CHECK(origin.exit_code == 3);
  CHECK(origin.body.at("verdict") == "Marginal");
  CHECK(origin.body.at("rhp_zeros").is_null());

  // Midpoint of the polygon edge U1 V1.
  const json region = handle("region", request({{"h", 0.5}})).body;
  const json& t1 = region.at("triangles").at(0);
  const double hi = 0.5 * (at(t1.at("U"), 0) + at(t1.at("V"), 0));
  const double hd = 0.5 * (at(t1.at("U"), 1) + at(t1.at("V"), 1));
  const Response edge = handle("verify", request({{"h", 0.5}, {"h_i", hi}, {"h_d", hd}}));
  CHECK(edge.body.at("verdict") == "Marginal");
  CHECK(edge.exit_code == 3);

  const Response custom = handle(
      "verify", request({{"h", 0.5}, {"h_i", 1.0}, {"h_d", 0.5},
                         {"contour", {{"x_max", 10.0}, {"y_max", 60.0}, {"samples_per_unit", 80}}}}));
  CHECK(custom.body.at("contour").at("samples_per_unit") == 80);
  CHECK(custom.body.at("rhp_zeros") == 0);
}

TEST_CASE("zones through check and zones") {
  const json grid = "T1:0.2:1.4:4,T2:0.2:1.4:4";
  const Response z = handle("zones", request({{"grid", grid}}));
  CHECK(z.status == 200);
  CHECK(z.body.at("cells").size() == 16);
  CHECK(z.body.at("param1").at("param") == "T1");

  const Response c = handle("check", request({{"grid", grid}, {"format", "csv"}}));
  CHECK(c.status == 200);
  CHECK(c.body.contains("zones"));
  REQUIRE(c.text.has_value());
  const auto rows = lines(*c.text);
  CHECK(rows.at(0) == kZoneCsvHeader);
  CHECK(rows.size() == 17);

  const Response svg = handle("zones", request({{"grid", grid}, {"format", "svg"}}));
  REQUIRE(svg.text.has_value());
  CHECK(svg.text->rfind("<svg", 0) == 0);
  CHECK(*handle("zones", request({{"grid", grid}, {"format", "svg"}})).text == *svg.text);
}

TEST_CASE("scan limit from the environment") {
  ::unsetenv("DELAYSTAB_SCAN_MAX");
  CHECK(options_from_environment().scan_max == 0.0);
  ::setenv("DELAYSTAB_SCAN_MAX", "120", 1);
  CHECK(options_from_environment().scan_max == 120.0);
  ::setenv("DELAYSTAB_SCAN_MAX", "abc", 1);
  CHECK(options_from_environment().scan_max == 0.0);
  ::setenv("DELAYSTAB_SCAN_MAX", "-5", 1);
  CHECK(options_from_environment().scan_max == 0.0);
  ::unsetenv("DELAYSTAB_SCAN_MAX");

  HandlerOptions wide;
  wide.scan_max = 200.0;
  const Response r = handle("check", request(), wide);
  CHECK(r.exit_code == 0);
  CHECK(r.body.at("verdict") == "Stabilizable");
  CHECK(std::abs(at(r.body.at("admissible_h"), 1) - 2.330) < 0.002);
}
