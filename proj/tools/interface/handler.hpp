#pragma once

#include <optional>
#include <string>

#include "interface/codec.hpp"

namespace delaystab::interface {

struct HandlerOptions {
  /// Overrides the per-plant scan limit when > 0.
  double scan_max = 0.0;
};

/// Reads DELAYSTAB_SCAN_MAX; unset or unparsable leaves the default.
[[nodiscard]] HandlerOptions options_from_environment();

struct Response {
  int status = 200;
  /// Process exit code for the CLI: 0 success / stabilizable / stable,
  /// 1 malformed input or internal error, 2 not stabilizable / outside the
  /// interval / unstable, 3 degenerate / marginal.
  int exit_code = 0;
  json body;
  /// CSV or SVG rendering when the request asked for one.
  std::optional<std::string> text;
  std::string content_type = "application/json";
};

/// One entry point for check, region, zones, sweep and verify. The request is
///   {"plant": PlantSpec, "h", "h_i", "h_d", "steps", "grid", "format", "contour"}
/// with mode-specific fields. Never throws.
[[nodiscard]] Response handle(const std::string& mode, const json& request,
                              const HandlerOptions& options = {});

}  // namespace delaystab::interface
