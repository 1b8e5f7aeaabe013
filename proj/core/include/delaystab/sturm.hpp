#pragma once

#include <vector>

#include "delaystab/plant.hpp"
#include "delaystab/polynomial.hpp"

namespace delaystab {

/// Sturm chain f0, f1 = f0', f_i = -rem(f_{i-2}, f_{i-1}).
/// Every member is rescaled to unit max-norm; the scaling is positive, so
/// the sign tables are those of the unscaled chain.
struct SturmChain {
  std::vector<Polynomial> members;

  [[nodiscard]] int degree() const noexcept {
    return members.empty() ? -1 : members.front().degree();
  }
  /// psi(i, j): coefficient of x^j in member i.
  [[nodiscard]] double psi(int i, int j) const noexcept {
    return members.at(static_cast<std::size_t>(i)).coefficient(j);
  }
};

/// Throws MultipleRootSuspected when the chain collapses before reaching a
/// constant (the input shares a root with its derivative).
[[nodiscard]] SturmChain build_chain(const Polynomial& poly);

struct SignTable {
  std::vector<int> at_zero;
  std::vector<int> at_infinity;
  int changes_at_zero = 0;
  int changes_at_infinity = 0;

  [[nodiscard]] int positive_roots() const noexcept {
    return changes_at_zero - changes_at_infinity;
  }
};

[[nodiscard]] SignTable sign_table(const SturmChain& chain);

/// Number of roots in (0, +inf). Throws EndpointIsRoot when f0(0) = 0.
[[nodiscard]] int count_positive_roots(const SturmChain& chain);

/// Sign-change count on a logarithmic grid over (0, Cauchy bound]; used when
/// the chain cannot be certified.
[[nodiscard]] int dense_positive_root_count(const Polynomial& poly);

/// f0(x) = C^2 + D^2 + A C + B D at y = sqrt(x): (C^2 + D^2)(1 + P) as a
/// polynomial of x = y^2. Its positive roots are the poles of E.
[[nodiscard]] Polynomial pole_polynomial(const NormalizedPlant& plant);

struct PoleCount {
  int count = 0;
  bool certified = true;
};

/// Number of poles of E with y > 0.
[[nodiscard]] PoleCount pole_count_of_e(const NormalizedPlant& plant);

}  // namespace delaystab
