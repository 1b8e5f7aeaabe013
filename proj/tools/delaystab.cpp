#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "interface/handler.hpp"
#include "interface/service.hpp"

namespace {

using delaystab::interface::json;

constexpr const char* kFooter = R"(Exit codes: 0 stabilizable / success / stable, 1 malformed input,
2 not stabilizable / h outside the admissible interval / unstable,
3 degenerate / marginal.

Zone CSV columns (fixed order):
  param1,param2,verdict,zone,phi1,phi2,poles,Ne_required,Ne_achieved
Region CSV columns: kind,index,label,h_i,h_d
Sweep CSV columns:  h,vertex,h_i,h_d

Grid axes name T<k>, Z<k> (1-based), L or K, e.g.
  --grid T1:-3:3:60,T2:-3:3:60

DELAYSTAB_SCAN_MAX overrides the frequency scan limit.)";

struct Args {
  std::string plant = "-";
  std::optional<double> h, hi, hd;
  std::optional<int> steps;
  std::string out;
  std::string format = "json";
  std::string grid;
};

std::optional<json> read_plant(const std::string& path) {
  std::stringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot open plant file " << path << '\n';
      return std::nullopt;
    }
    buffer << in.rdbuf();
  }
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    std::cerr << "error: malformed plant JSON: " << e.what() << '\n';
    return std::nullopt;
  }
}

int run(const std::string& mode, const Args& args) {
  const std::optional<json> plant = read_plant(args.plant);
  if (!plant) return 1;
  // A file may hold a bare plant or a full request with a "plant" member.
  json request = plant->is_object() && plant->contains("plant") ? *plant : json{{"plant", *plant}};
  if (args.h) request["h"] = *args.h;
  if (args.hi) request["h_i"] = *args.hi;
  if (args.hd) request["h_d"] = *args.hd;
  if (args.steps) request["steps"] = *args.steps;
  if (!args.grid.empty()) request["grid"] = args.grid;
  request["format"] = args.format;

  const auto response =
      delaystab::interface::handle(mode, request, delaystab::interface::options_from_environment());
  if (response.status >= 400 && response.body.contains("error")) {
    std::cerr << "error: " << response.body["error"].get<std::string>() << '\n';
  }
  const std::string payload = response.text ? *response.text : response.body.dump(2) + "\n";
  if (response.status == 400 || response.status >= 500) return response.exit_code;
  if (args.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << args.out << '\n';
      return 1;
    }
    out << payload;
  }
  return response.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PID stabilizability and stability regions for time-delay plants"};
  app.footer(kFooter);
  // --h is the proportional gain, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Args args;
  std::string chosen;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--plant", args.plant, "Plant JSON file ('-' for stdin)");
    sub->add_option("--out", args.out, "Write output here instead of stdout");
    sub->add_option("--format", args.format, "json, csv or svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    sub->callback([&, sub] { chosen = sub->get_name(); });
  };

  auto* check = app.add_subcommand("check", "Decide stabilizability of the plant");
  add_common(check);
  check->add_option("--grid", args.grid, "Optional zone grid P1:min:max:steps,P2:min:max:steps");

  auto* region = app.add_subcommand("region", "Stability region in (h_i, h_d) at fixed h");
  add_common(region);
  region->add_option("--h", args.h, "Dimensionless proportional gain K*Kp")->required();

  auto* zones = app.add_subcommand("zones", "Process-parameter zone map");
  add_common(zones);
  zones->add_option("--grid", args.grid, "P1:min:max:steps,P2:min:max:steps")->required();

  auto* sweep = app.add_subcommand("sweep", "Regions across the admissible h interval");
  add_common(sweep);
  sweep->add_option("--steps", args.steps, "Number of h slices (default 5)");

  auto* verify = app.add_subcommand("verify", "Count right-half-plane roots at one PID point");
  add_common(verify);
  verify->add_option("--h", args.h, "Dimensionless K*Kp")->required();
  verify->add_option("--hi", args.hi, "Dimensionless K*Ki*L")->required();
  verify->add_option("--hd", args.hd, "Dimensionless K*Kd/L")->required();

  std::string bind = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the JSON service");
  serve->add_option("--bind", bind, "Address to bind");
  serve->add_option("--port", port, "Port");
  serve->callback([&] { chosen = "serve"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (chosen == "serve") {
    return delaystab::interface::serve(bind, port, delaystab::interface::options_from_environment())
               ? 0
               : 1;
  }
  return run(chosen, args);
}
