#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delaystab/harmonic.hpp"
#include "delaystab/stabilizability.hpp"

namespace delaystab {

/// Open interval of proportional gains h that keep the real-root count of
/// G at its required value. One endpoint is always -1.
struct HInterval {
  double lower = -1.0;
  double upper = -1.0;
  PlantCase kind = PlantCase::Case1;
  std::vector<Extremum> source_extrema;

  [[nodiscard]] bool contains(double h) const noexcept {
    return h > lower && h < upper;
  }
};

/// Case 1: (-1, h_p), h_p the smallest local maximum of G1 above -1.
/// Case 2: (h_n, -1), h_n the largest local minimum of G1 below -1.
/// Throws EmptyInterval when no such extremum exists.
[[nodiscard]] HInterval admissible_h(const HarmonicContext& ctx, PlantCase kind);

/// Positive roots of G(y) = y (h - G1(y)) in (0, y_max], ascending.
/// Throws Degenerate on a near-double root.
[[nodiscard]] std::vector<double> g_roots(const HarmonicContext& ctx, double h,
                                          double y_max);

struct Point2 {
  double h_i = 0.0;
  double h_d = 0.0;
};

enum class Direction { Less, Greater };

/// a h_i + b h_d < c with (a, b) of unit length. Root constraints are also
/// kept in their native form  h_i - h_d y0^2  (dir)  rhs.
struct HalfPlane {
  enum class Kind { Root, Axis, DerivativeBound };

  Kind kind = Kind::Root;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double y0 = 0.0;
  double rhs = 0.0;
  Direction dir = Direction::Less;

  [[nodiscard]] double slack(const Point2& p) const noexcept {
    return c - (a * p.h_i + b * p.h_d);
  }
};

/// One constraint per root (direction from the sign of G1' there), the
/// y = 0 axis constraint of the case, and for m = n - 1 the two sides of
/// |h_d| < |U(n,n) / V(m,m)|.
[[nodiscard]] std::vector<HalfPlane> build_constraints(const HarmonicContext& ctx,
                                                       double h,
                                                       std::span<const double> roots,
                                                       PlantCase kind);

struct RootPair {
  int index = 1;
  double y_a = 0.0;
  double y_b = 0.0;
  double h_ea = 0.0;
  double h_eb = 0.0;
  double slope_a = 0.0;
  double slope_b = 0.0;
};

/// Consecutive roots paired in order (1st-2nd, 3rd-4th, ...).
[[nodiscard]] std::vector<RootPair> pair_roots(const HarmonicContext& ctx,
                                               std::span<const double> roots);

/// V: crossing of the two root lines. U, W: where the b- and a-lines meet
/// the h_d axis. R, S: the b- and a-lines at h_i = h_i(V1).
struct TriangleGeometry {
  Point2 v, u, w, r, s;
};

[[nodiscard]] TriangleGeometry triangle_geometry(const HarmonicContext& ctx,
                                                 const RootPair& pair, double h,
                                                 double hi_v1);

/// Beyond y_r2 every further triangle contains the first one.
[[nodiscard]] double termination_bound(const HarmonicContext& ctx, double h);

struct Polygon {
  /// Counter-clockwise; empty when the constraints are infeasible.
  std::vector<Point2> vertices;
  bool unbounded = false;

  [[nodiscard]] double area() const noexcept;
};

inline constexpr double kDefaultBox = 1e3;

/// Clips the box [-box, box]^2 by every half-plane in turn.
[[nodiscard]] Polygon intersect_region(std::span<const HalfPlane> constraints,
                                       double box = kDefaultBox);

enum class PointStatus { Inside, Marginal, Outside };

[[nodiscard]] std::string to_string(PointStatus s);

/// The region is open; points within `tolerance` of a boundary line that
/// satisfy every other constraint are Marginal.
[[nodiscard]] PointStatus classify_point(std::span<const HalfPlane> constraints,
                                         const Point2& p, double tolerance = 1e-9);

struct StabilityRegion {
  double h = 0.0;
  PlantCase plant_case = PlantCase::Case1;
  std::vector<HalfPlane> constraints;
  std::vector<RootPair> pairs;
  std::vector<TriangleGeometry> triangles;
  std::optional<double> hd_bound;
  Polygon polygon;
  double y_r2 = 0.0;
  /// Largest root enumerated; all later constraints were checked slack.
  double y_extent = 0.0;
  std::vector<std::string> flags;
};

struct RegionOptions {
  double box = kDefaultBox;
};

[[nodiscard]] StabilityRegion build_region(const HarmonicContext& ctx, double h,
                                           PlantCase kind, const RegionOptions& options = {});

/// Regions at `steps` equally spaced h strictly inside the interval.
[[nodiscard]] std::vector<StabilityRegion> sweep_h(const HarmonicContext& ctx,
                                                   const HInterval& interval, int steps,
                                                   const RegionOptions& options = {});

}  // namespace delaystab
