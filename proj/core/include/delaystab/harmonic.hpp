#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "delaystab/plant.hpp"

namespace delaystab {

/// P, Q and their first two derivatives with respect to y.
struct PqDerivatives {
  double p = 1.0;
  double q = 0.0;
  double dp = 0.0;
  double dq = 0.0;
  double d2p = 0.0;
  double d2q = 0.0;
};

/// Immutable evaluator for the frequency-domain pieces of
///   H(jy) = F(y) + j G(y),  F = h_i - h_d y^2 - F1(y),  G = y (h - G1(y)).
///
/// The rational part R = P + jQ = prod(1 + j t y) / prod(1 + j z y) is kept
/// as two complex coefficient lists, so R', R'' come from the quotient rule
/// on exact polynomial derivatives.
class HarmonicContext {
 public:
  /// `scan_max <= 0` selects default_scan_max(plant).
  explicit HarmonicContext(NormalizedPlant plant, double scan_max = 0.0);

  [[nodiscard]] const NormalizedPlant& plant() const noexcept { return plant_; }
  /// Upper end of every (0, y] scan made on behalf of this plant.
  [[nodiscard]] double scan_max() const noexcept { return scan_max_; }

  [[nodiscard]] PqDerivatives pq(double y) const;
  [[nodiscard]] std::complex<double> rational(double y) const;

 private:
  NormalizedPlant plant_;
  std::vector<std::complex<double>> numerator_;
  std::vector<std::complex<double>> denominator_;
  double scan_max_;
};

/// max(4 pi, 10 / min|t_i, z_i|), capped at 200.
[[nodiscard]] double default_scan_max(const NormalizedPlant& plant);

[[nodiscard]] double eval_f1(const HarmonicContext& ctx, double y);
[[nodiscard]] double eval_g1(const HarmonicContext& ctx, double y);

struct FG {
  double f = 0.0;
  double g = 0.0;
};

[[nodiscard]] FG eval_fg(const HarmonicContext& ctx, const ControllerPoint& point,
                         double y);

struct G1Derivatives {
  double first = 0.0;
  double second = 0.0;
};

[[nodiscard]] G1Derivatives eval_g1_derivatives(const HarmonicContext& ctx, double y);

struct Phi {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

[[nodiscard]] Phi eval_phi(const NormalizedPlant& plant);

enum class Branch { Minus, Plus };

/// Branch of the solution of tan(y/2) = E(y) (the h = -1 crossing condition).
/// Returns +-infinity at a pole of the branch.
/// Throws NoRealBranch when P^2 + Q^2 < 1 and ExistenceFail at y = 0 when
/// sum t_i^2 <= sum z_i^2.
[[nodiscard]] double eval_e(const HarmonicContext& ctx, double y, Branch branch);
/// dE/dy on one branch; NaN where the branch is undefined or singular.
[[nodiscard]] double eval_e_derivative(const HarmonicContext& ctx, double y,
                                       Branch branch);

struct ESlopes {
  double minus = 0.0;
  double plus = 0.0;
  /// How many of the two slopes exceed 0.5, the slope of tan(y/2) at 0.
  int above_half = 0;
};

[[nodiscard]] ESlopes eval_e_slope_at_zero(const NormalizedPlant& plant);

struct TangencyPoint {
  double y = 0.0;
  Branch branch = Branch::Minus;
  /// tan(y/2) - E(y) at the equal-derivative point.
  double e_d = 0.0;
};

/// All equal-derivative points of tan(y/2) and E(y) in (0, scan_max].
[[nodiscard]] std::vector<TangencyPoint> eval_ed(const HarmonicContext& ctx);

/// The amplitude envelope |G1| at a stationary point, as a function of y.
[[nodiscard]] double eval_hm(const HarmonicContext& ctx, double y);
[[nodiscard]] double eval_hm_derivative(const HarmonicContext& ctx, double y);

struct Extremum {
  double y = 0.0;
  double g1 = 0.0;
  double h_m = 0.0;
};

struct HmEnvelope {
  /// Largest positive stationary point of the envelope, if any.
  std::optional<double> y_r1;
  std::vector<Extremum> extrema;
};

/// Local extrema of G1 for y > 0, up to the first one past y_r1 whose
/// magnitude exceeds 1. Without y_r1 only the first extremum is kept.
[[nodiscard]] HmEnvelope eval_hm_envelope(const HarmonicContext& ctx);

/// Every positive stationary point of G1 in (0, y_max].
[[nodiscard]] std::vector<double> g1_stationary_points(const HarmonicContext& ctx,
                                                       double y_max);

}  // namespace delaystab
