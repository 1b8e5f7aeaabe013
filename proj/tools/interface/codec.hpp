#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delaystab/oracle.hpp"
#include "delaystab/region.hpp"
#include "delaystab/stabilizability.hpp"

namespace delaystab::interface {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Rounds to 12 significant digits; non-finite values become null.
[[nodiscard]] json number(double x);
[[nodiscard]] json point(const Point2& p);

/// Strict reader for {"gain", "delay", "time_constants", "zero_constants"}.
/// gain defaults to 1 and zero_constants to []. Throws InvalidArgument on a
/// missing or mistyped field; range checks are left to validate().
[[nodiscard]] PlantSpec parse_plant(const json& j);
[[nodiscard]] json to_json(const PlantSpec& plant);

/// "P1:min:max:steps,P2:min:max:steps", or an array of two
/// {"param", "min", "max", "steps"} objects.
[[nodiscard]] std::vector<ParameterAxis> parse_grid(const json& j);
[[nodiscard]] std::vector<ParameterAxis> parse_grid(const std::string& text);

[[nodiscard]] json to_json(const StabilizabilityReport& report,
                           const std::optional<HInterval>& interval);
[[nodiscard]] json to_json(const HInterval& interval);
[[nodiscard]] json to_json(const StabilityRegion& region);
[[nodiscard]] json to_json(const ZoneScan& scan);
[[nodiscard]] json to_json(const RhpCount& count);

}  // namespace delaystab::interface
