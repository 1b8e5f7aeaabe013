#pragma once

#include <string>
#include <vector>

#include "delaystab/region.hpp"
#include "delaystab/stabilizability.hpp"

namespace delaystab::interface {

/// Header of the zone-scan CSV. Column order is fixed.
inline constexpr const char* kZoneCsvHeader =
    "param1,param2,verdict,zone,phi1,phi2,poles,Ne_required,Ne_achieved";

[[nodiscard]] std::string zones_csv(const ZoneScan& scan);
/// kind,index,label,h_i,h_d: polygon vertices then triangle vertices.
[[nodiscard]] std::string region_csv(const StabilityRegion& region);
/// h,vertex,h_i,h_d for every slice polygon.
[[nodiscard]] std::string sweep_csv(const std::vector<StabilityRegion>& slices);

[[nodiscard]] std::string region_svg(const StabilityRegion& region);
[[nodiscard]] std::string zones_svg(const ZoneScan& scan);

}  // namespace delaystab::interface
