#pragma once

#include <numbers>

#include "delaystab/harmonic.hpp"
#include "delaystab/plant.hpp"

namespace delaystab {

/// Rectangle 0 <= Re s <= x_max, |Im s| <= y_max in the normalized
/// Laplace variable s = L * (physical s).
struct ContourSpec {
  double x_max = 30.0;
  double y_max = 40.0 * std::numbers::pi;
  int samples_per_unit = 50;
};

struct RhpCount {
  /// Zeros of H inside the rectangle: winding number plus enclosed poles.
  int zeros = 0;
  int winding = 0;
  int enclosed_poles = 0;
  /// Rectangle actually used after perturbation and extension.
  ContourSpec contour;
  /// False when the total phase stayed more than 0.05 turns from an integer.
  bool certified = true;
  double residual = 0.0;
};

/// Argument-principle count of the zeros of
///   H(s) = s e^s prod(1 + t_i s) / prod(1 + z_i s) + h_i + h s + h_d s^2
/// with 0 < Re s < x_max. Throws ContourHitsZero when H vanishes on the
/// contour for the original and three perturbed rectangles.
[[nodiscard]] RhpCount count_rhp_zeros(const NormalizedPlant& plant,
                                       const ControllerPoint& point,
                                       const ContourSpec& contour = {});

/// Real roots of G(y) = y (h - G1(y)) on [y_lo, y_hi], including y = 0 when
/// the interval covers it. Grid step pi/400.
[[nodiscard]] int grid_count_g_roots(const HarmonicContext& ctx, double h, double y_lo,
                                     double y_hi);

/// Nonzero intersections of tan(y/2) with both branches of E on
/// [y_lo, y_hi], evaluated with denominators cleared. Grid step pi/400.
[[nodiscard]] int grid_count_tan_e_intersections(const HarmonicContext& ctx, double y_lo,
                                                 double y_hi);

}  // namespace delaystab
