#include "delaystab/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "delaystab/error.hpp"

namespace delaystab {

namespace {

// Real and imaginary parts of prod(1 + j c_i y) as polynomials in y.
std::pair<Polynomial, Polynomial> split_product(std::span<const double> sym) {
  std::vector<double> re(sym.size(), 0.0);
  std::vector<double> im(sym.size(), 0.0);
  for (std::size_t k = 0; k < sym.size(); ++k) {
    // j^k cycles 1, j, -1, -j.
    const double sign = (k % 4 == 0 || k % 4 == 1) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      re[k] = sign * sym[k];
    } else {
      im[k] = sign * sym[k];
    }
  }
  return {Polynomial(std::move(re)), Polynomial(std::move(im))};
}

void require_nonzero_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] == 0.0) {
      std::ostringstream os;
      os << what << "[" << i << "] must be finite and nonzero";
      throw Error(ErrorCode::InvalidPlant, os.str());
    }
  }
}

void reject_common_factors(std::span<const double> t, std::span<const double> z) {
  for (double ti : t) {
    for (double zj : z) {
      if (std::abs(ti - zj) <= 1e-12 * std::max(std::abs(ti), std::abs(zj))) {
        std::ostringstream os;
        os << "time constant " << ti
           << " coincides with a zero constant; cancel the common factor first";
        throw Error(ErrorCode::CommonFactor, os.str());
      }
    }
  }
}

}  // namespace

NormalizedPlant::NormalizedPlant(std::vector<double> t, std::vector<double> z)
    : t_(std::move(t)), z_(std::move(z)) {
  if (t_.empty()) {
    throw Error(ErrorCode::InvalidPlant, "plant needs at least one time constant");
  }
  require_nonzero_finite(t_, "t");
  require_nonzero_finite(z_, "z");
  reject_common_factors(t_, z_);

  u_ = elementary_symmetric(t_);
  v_ = elementary_symmetric(z_);
  std::tie(a_, b_) = split_product(u_);
  std::tie(c_, d_) = split_product(v_);
}

double NormalizedPlant::u(int k) const noexcept {
  return (k < 0 || k > n()) ? 0.0 : u_[static_cast<std::size_t>(k)];
}

double NormalizedPlant::v(int k) const noexcept {
  return (k < 0 || k > m()) ? 0.0 : v_[static_cast<std::size_t>(k)];
}

int NormalizedPlant::nonminimum_phase_zeros() const noexcept {
  return static_cast<int>(std::count_if(z_.begin(), z_.end(),
                                        [](double z) { return z < 0.0; }));
}

void validate(const PlantSpec& plant) {
  if (!std::isfinite(plant.gain) || plant.gain == 0.0) {
    throw Error(ErrorCode::InvalidPlant, "gain must be finite and nonzero");
  }
  if (!std::isfinite(plant.delay) || plant.delay <= 0.0) {
    throw Error(ErrorCode::InvalidPlant, "delay must be finite and positive");
  }
  if (plant.time_constants.empty()) {
    throw Error(ErrorCode::InvalidPlant, "plant needs at least one time constant");
  }
  require_nonzero_finite(plant.time_constants, "time_constants");
  require_nonzero_finite(plant.zero_constants, "zero_constants");
  reject_common_factors(plant.time_constants, plant.zero_constants);
}

NormalizedPlant normalize(const PlantSpec& plant) {
  validate(plant);
  std::vector<double> t(plant.time_constants);
  std::vector<double> z(plant.zero_constants);
  for (double& v : t) v /= plant.delay;
  for (double& v : z) v /= plant.delay;
  return NormalizedPlant(std::move(t), std::move(z));
}

PidGains denormalize_gains(const ControllerPoint& point, const PlantSpec& plant) {
  return {point.h / plant.gain, point.h_i / (plant.gain * plant.delay),
          point.h_d * plant.delay / plant.gain};
}

ControllerPoint normalize_gains(const PidGains& gains, const PlantSpec& plant) {
  return {plant.gain * gains.kp, plant.gain * gains.ki * plant.delay,
          plant.gain * gains.kd / plant.delay};
}

Abcd eval_abcd(const NormalizedPlant& plant, double y) {
  return {plant.a()(y), plant.b()(y), plant.c()(y), plant.d()(y)};
}

Pq eval_pq(const NormalizedPlant& plant, double y) {
  const Abcd v = eval_abcd(plant, y);
  const double den = v.c * v.c + v.d * v.d;
  if (!(den > 0.0)) {
    throw Error(ErrorCode::ZeroOnImaginaryAxis,
                "plant numerator vanishes on the imaginary axis");
  }
  return {(v.a * v.c + v.b * v.d) / den, (-v.a * v.d + v.b * v.c) / den};
}

}  // namespace delaystab
