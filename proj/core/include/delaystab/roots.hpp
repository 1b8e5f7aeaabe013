#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace delaystab {

/// Default bracketing step for every 1-D scan in the engine.
inline constexpr double kScanStep = std::numbers::pi / 200.0;
/// Bisection stops once the bracket is narrower than this.
inline constexpr double kRootTolerance = 1e-12;
/// Two roots closer than this are treated as a tangency.
inline constexpr double kDegenerateSeparation = 1e-6;

/// Bisects f on [lo, hi] where f(lo) and f(hi) have opposite signs.
template <typename F>
[[nodiscard]] double bisect(F&& f, double lo, double hi, double f_lo) {
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Sign-change scan of f over (lo, hi] with the given step, each bracket
/// refined by bisection. NaN samples (f undefined there) break brackets.
/// Discontinuities are reported like roots; callers that can hit poles must
/// check residuals.
template <typename F>
[[nodiscard]] std::vector<double> scan_roots(F&& f, double lo, double hi,
                                             double step = kScanStep) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  const auto steps = static_cast<long>(std::ceil((hi - lo) / step));
  double x_prev = lo;
  double f_prev = f(x_prev);
  for (long k = 1; k <= steps; ++k) {
    const double x = (k == steps) ? hi : lo + static_cast<double>(k) * step;
    const double fx = f(x);
    if (std::isfinite(f_prev) && std::isfinite(fx)) {
      if (fx == 0.0) {
        roots.push_back(x);
      } else if (f_prev != 0.0 && ((f_prev < 0.0) != (fx < 0.0))) {
        roots.push_back(bisect(f, x_prev, x, f_prev));
      }
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

/// True when two consecutive entries of a sorted list are closer than `sep`.
[[nodiscard]] inline bool has_close_pair(const std::vector<double>& sorted,
                                         double sep = kDegenerateSeparation) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < sep) return true;
  }
  return false;
}

}  // namespace delaystab
