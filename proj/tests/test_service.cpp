#include <doctest.h>

#include <httplib.h>

#include <array>
#include <cstdio>
#include <future>
#include <thread>
#include <vector>

#include "interface/handler.hpp"
#include "interface/service.hpp"

using namespace delaystab::interface;

namespace {

const json kPlant = {{"gain", 1.0}, {"delay", 1.0}, {"time_constants", {0.6, 0.8}}, {"zero_constants", json::array()}};

/// In-process server on an ephemeral port, stopped on scope exit.
class LiveServer {
 public:
  LiveServer() : server_(make_server({})) {
    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
  }
  ~LiveServer() {
    server_->stop();
    thread_.join();
  }
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  [[nodiscard]] httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
  std::thread thread_;
};

httplib::Result post(const LiveServer& s, const std::string& path, const json& body) {
  auto c = s.client();
  return c.Post(path, body.dump(), "application/json");
}

/// The CLI run for the same request, for byte-level comparison.
std::string cli_output(const std::string& args) {
  const std::string command = std::string(DELAYSTAB_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buffer{};
  while (const std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
    out.append(buffer.data(), n);
  }
  ::pclose(pipe);
  return out;
}

}  // namespace

TEST_CASE("health") {
  LiveServer s;
  auto c = s.client();
  const auto res = c.Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  const json body = json::parse(res->body);
  CHECK(body.at("status") == "ok");
  CHECK(body.at("schema_version") == "1");
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
}

TEST_CASE("check and region") {
  LiveServer s;
  const auto check = post(s, "/api/check", {{"plant", kPlant}});
  REQUIRE(check);
  CHECK(check->status == 200);
  const json report = json::parse(check->body);
  CHECK(report.at("verdict") == "Stabilizable");
  CHECK(report.at("schema_version") == "1");

  const auto region = post(s, "/api/region", {{"plant", kPlant}, {"h", 0.5}});
  REQUIRE(region);
  CHECK(region->status == 200);
  CHECK(region->get_header_value("Content-Type") == "application/json");
  CHECK(json::parse(region->body).at("polygon").size() == 3);
  // Identical to the CLI for the same request.
  const std::string cli =
      cli_output("region --plant " + std::string(DELAYSTAB_TEST_DATA) + "/example_plant.json --h 0.5");
  CHECK(region->body == cli);
}

TEST_CASE("prerequisite failures are 422") {
  LiveServer s;
  const auto outside = post(s, "/api/region", {{"plant", kPlant}, {"h", 3.0}});
  REQUIRE(outside);
  CHECK(outside->status == 422);
  const json body = json::parse(outside->body);
  CHECK(body.at("interval").size() == 2);
  CHECK(body.at("schema_version") == "1");

  json bad_plant = kPlant;
  bad_plant["time_constants"] = {-0.6, -0.8};
  const auto unstabilizable = post(s, "/api/region", {{"plant", bad_plant}, {"h", 0.5}});
  REQUIRE(unstabilizable);
  CHECK(unstabilizable->status == 422);
  CHECK(json::parse(unstabilizable->body).at("report").at("verdict") == "NotStabilizable");
}

TEST_CASE("malformed requests are 400") {
  LiveServer s;
  auto c = s.client();
  const auto garbage = c.Post("/api/check", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(json::parse(garbage->body).at("schema_version") == "1");
  const auto missing = post(s, "/api/region", {{"plant", kPlant}});
  REQUIRE(missing);
  CHECK(missing->status == 400);
  const auto options = c.Options("/api/check");
  REQUIRE(options);
  CHECK(options->status == 204);
  CHECK(c.Get("/api/nothing")->status == 404);
}

TEST_CASE("verify, sweep and zones") {
  LiveServer s;
  const auto stable = post(s, "/api/verify", {{"plant", kPlant}, {"h", 0.5}, {"h_i", 1.0}, {"h_d", 0.5}});
  REQUIRE(stable);
  CHECK(stable->status == 200);
  CHECK(json::parse(stable->body).at("verdict") == "Stable");
  CHECK(json::parse(stable->body).at("rhp_zeros") == 0);
  const auto unstable = post(s, "/api/verify", {{"plant", kPlant}, {"h", 0.5}, {"h_i", 5.0}, {"h_d", 0.0}});
  REQUIRE(unstable);
  CHECK(json::parse(unstable->body).at("verdict") == "Unstable");

  const auto sweep = post(s, "/api/sweep", {{"plant", kPlant}, {"steps", 3}});
  REQUIRE(sweep);
  CHECK(sweep->status == 200);
  CHECK(json::parse(sweep->body).at("slices").size() == 3);

  const json grid = "T1:0.2:1.4:3,T2:0.2:1.4:3";
  const auto zones = post(s, "/api/zones", {{"plant", kPlant}, {"grid", grid}});
  REQUIRE(zones);
  CHECK(json::parse(zones->body).at("cells").size() == 9);
  const auto check_grid = post(s, "/api/check", {{"plant", kPlant}, {"grid", grid}});
  REQUIRE(check_grid);
  CHECK(json::parse(check_grid->body).at("zones").at("cells").size() == 9);

  const auto svg = post(s, "/api/region", {{"plant", kPlant}, {"h", 0.5}, {"format", "svg"}});
  REQUIRE(svg);
  CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
  CHECK(svg->body.rfind("<svg", 0) == 0);
}

TEST_CASE("concurrent requests") {
  LiveServer s;
  const json expected = handle("region", {{"plant", kPlant}, {"h", 0.5}}).body;
  std::vector<std::future<json>> results;
  for (int k = 0; k < 8; ++k) {
    results.push_back(std::async(std::launch::async, [&s] {
      const auto res = post(s, "/api/region", {{"plant", kPlant}, {"h", 0.5}});
      return res ? json::parse(res->body) : json();
    }));
  }
  for (auto& f : results) CHECK(f.get() == expected);
}
