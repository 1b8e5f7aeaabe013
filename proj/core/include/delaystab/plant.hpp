#pragma once

#include <span>
#include <vector>

#include "delaystab/polynomial.hpp"

namespace delaystab {

/// Physical plant  K * prod(1 + Z_i s) / prod(1 + T_i s) * exp(-L s).
struct PlantSpec {
  double gain = 1.0;
  double delay = 1.0;
  std::vector<double> time_constants;
  std::vector<double> zero_constants;
};

/// Dimensionless PID gains: h = K Kp, h_i = K Ki L, h_d = K Kd / L.
struct ControllerPoint {
  double h = 0.0;
  double h_i = 0.0;
  double h_d = 0.0;
};

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

/// Plant with time referred to the delay: t_i = T_i / L, z_i = Z_i / L.
///
/// Caches the symmetric coefficient tables U(n, k), V(m, k) and the four
/// real polynomials of the frequency variable y
///   A + jB = prod(1 + j t_i y),   C + jD = prod(1 + j z_i y).
/// Negative constants are allowed; zeros and pole/zero coincidences are not.
class NormalizedPlant {
 public:
  NormalizedPlant(std::vector<double> t, std::vector<double> z = {});

  [[nodiscard]] int n() const noexcept { return static_cast<int>(t_.size()); }
  [[nodiscard]] int m() const noexcept { return static_cast<int>(z_.size()); }
  [[nodiscard]] std::span<const double> t() const noexcept { return t_; }
  [[nodiscard]] std::span<const double> z() const noexcept { return z_; }

  /// U(n, k); zero outside 0..n.
  [[nodiscard]] double u(int k) const noexcept;
  /// V(m, k); zero outside 0..m.
  [[nodiscard]] double v(int k) const noexcept;
  [[nodiscard]] std::span<const double> u_table() const noexcept { return u_; }
  [[nodiscard]] std::span<const double> v_table() const noexcept { return v_; }

  [[nodiscard]] const Polynomial& a() const noexcept { return a_; }
  [[nodiscard]] const Polynomial& b() const noexcept { return b_; }
  [[nodiscard]] const Polynomial& c() const noexcept { return c_; }
  [[nodiscard]] const Polynomial& d() const noexcept { return d_; }

  /// Number of plant zeros with positive real part (z_i < 0).
  [[nodiscard]] int nonminimum_phase_zeros() const noexcept;

 private:
  std::vector<double> t_;
  std::vector<double> z_;
  std::vector<double> u_;
  std::vector<double> v_;
  Polynomial a_, b_, c_, d_;
};

/// Throws Error(InvalidPlant | CommonFactor) when the plant description is unusable.
void validate(const PlantSpec& plant);

[[nodiscard]] NormalizedPlant normalize(const PlantSpec& plant);

[[nodiscard]] PidGains denormalize_gains(const ControllerPoint& point,
                                         const PlantSpec& plant);
[[nodiscard]] ControllerPoint normalize_gains(const PidGains& gains,
                                              const PlantSpec& plant);

struct Abcd {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  double d = 0.0;
};

[[nodiscard]] Abcd eval_abcd(const NormalizedPlant& plant, double y);

struct Pq {
  double p = 1.0;
  double q = 0.0;
};

/// P + jQ = (A + jB) / (C + jD).
[[nodiscard]] Pq eval_pq(const NormalizedPlant& plant, double y);

}  // namespace delaystab
