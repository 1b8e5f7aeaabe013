#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delaystab/harmonic.hpp"
#include "delaystab/plant.hpp"
#include "delaystab/sturm.hpp"

namespace delaystab {

/// Case 1: U(n,n) > 0, admissible h > -1 and h_i > 0.
/// Case 2: U(n,n) < 0, admissible h < -1 and h_i < 0.
enum class PlantCase { Case1, Case2 };

enum class Verdict { Stabilizable, NotStabilizable, Degenerate };

/// Named zones of the second-order, zero-free plant family.
enum class ZoneLabel { Z1, Z2, Z3 };

[[nodiscard]] std::string to_string(PlantCase c);
[[nodiscard]] std::string to_string(Verdict v);
[[nodiscard]] std::string to_string(ZoneLabel z);

/// Any classification quantity closer to zero than this is degenerate.
inline constexpr double kClassificationTolerance = 1e-10;

struct PrincipalTerm {
  bool ok = false;
  std::string reason;
  /// For m = n - 1: the region must satisfy |h_d| < hd_bound.
  std::optional<double> hd_bound;
};

/// Throws OrderViolation when m >= n. For m = n - 1 with `h_d` given, checks
/// |h_d V(m,m)| < |U(n,n)|; without it, only records the bound.
[[nodiscard]] PrincipalTerm check_principal_term(const NormalizedPlant& plant,
                                                 std::optional<double> h_d = {});

[[nodiscard]] PlantCase plant_case(const NormalizedPlant& plant);

/// Root counts demanded on the window [-2 r pi + eps, 2 r pi + eps]:
///   N_r = 4 r + nr_offset,  N_e = 4 r + ne_offset.
struct RequiredCounts {
  double epsilon = 0.0;
  int m_p = 0;
  int nr_offset = 0;
  int ne_offset = 0;

  [[nodiscard]] int nr(int r) const noexcept { return 4 * r + nr_offset; }
  [[nodiscard]] int ne(int r) const noexcept { return 4 * r + ne_offset; }
};

[[nodiscard]] RequiredCounts required_counts(const NormalizedPlant& plant);

struct WindowCount {
  int r = 0;
  int count = 0;
};

struct AchievedCounts {
  /// Direct count of nonzero crossings G1 = -1 with |y| < pi.
  int ne1 = 0;
  /// Ne1 read from the Phi1/Phi2 sign table.
  int ne1_table = 0;
  /// Three consecutive windows whose per-period excess agrees.
  std::vector<WindowCount> windows;
  int ne_offset = 0;
  PoleCount poles;
  /// Zero-free plants only: Ne1 table + Ne2 parity table + one crossing per
  /// pole of E on each side, minus 4 r. Every pole is assumed to qualify.
  std::optional<int> advisory_ne_offset;
  std::vector<TangencyPoint> tangencies;
};

/// Normative count is direct: crossings of G1 with -1, which are the
/// intersections of tan(y/2) with E(y). Throws Degenerate when a
/// classification quantity vanishes, two crossings merge, or the per-period
/// count does not settle within 20 periods.
[[nodiscard]] AchievedCounts achieved_counts(const HarmonicContext& ctx);

struct StabilizabilityReport {
  PrincipalTerm principal_term;
  PlantCase plant_case = PlantCase::Case1;
  int m_p = 0;
  double epsilon = 0.0;
  Phi phi;
  RequiredCounts required;
  std::optional<AchievedCounts> achieved;
  /// Window r at which ne_required / ne_achieved are quoted.
  int window_r = 0;
  int ne_required = 0;
  int ne_achieved = 0;
  std::optional<ZoneLabel> zone;
  std::string features;
  Verdict verdict = Verdict::NotStabilizable;
  std::vector<std::string> diagnostics;
};

[[nodiscard]] StabilizabilityReport analyze(const HarmonicContext& ctx);

struct ZoneClassification {
  std::optional<ZoneLabel> label;
  std::string features;
};

/// Z1/Z2/Z3 are given only to n = 2, m = 0 plants whose sign pattern matches
/// and whose verdict is Stabilizable; everything else gets the feature
/// vector alone.
[[nodiscard]] ZoneClassification classify_zone(const NormalizedPlant& plant,
                                               const StabilizabilityReport& report);

/// One axis of a process-parameter grid. `name` is T<k>, Z<k> (1-based,
/// physical time units), L or K. Samples sit at cell centres.
struct ParameterAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  [[nodiscard]] double value(int k) const noexcept {
    return min + (static_cast<double>(k) + 0.5) * (max - min) / steps;
  }
};

struct ZoneCell {
  double param1 = 0.0;
  double param2 = 0.0;
  Verdict verdict = Verdict::Degenerate;
  std::optional<ZoneLabel> zone;
  std::string features;
  double phi1 = 0.0;
  double phi2 = 0.0;
  int poles = 0;
  int ne_required = 0;
  int ne_achieved = 0;
};

struct BoundarySegment {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct ZoneScan {
  ParameterAxis axis1;
  ParameterAxis axis2;
  /// Row-major: index = i1 * axis2.steps + i2.
  std::vector<ZoneCell> cells;
  std::map<std::string, std::vector<BoundarySegment>> boundaries;
};

/// Applies one grid parameter to a plant copy. Throws InvalidArgument on an
/// unknown name.
void set_parameter(PlantSpec& plant, const std::string& name, double value);

/// Evaluates every cell in parallel; output order is fixed by the grid.
/// `scan_max <= 0` lets each cell pick its own default.
[[nodiscard]] ZoneScan scan_parameter_plane(const PlantSpec& base,
                                            const ParameterAxis& axis1,
                                            const ParameterAxis& axis2,
                                            double scan_max = 0.0);

}  // namespace delaystab
