#include "delaystab/sturm.hpp"

#include <algorithm>
#include <cmath>

#include "delaystab/error.hpp"

namespace delaystab {

namespace {

constexpr double kChainTolerance = 1e-12;

Polynomial unit_scaled(const Polynomial& p) {
  const double s = p.max_abs_coefficient();
  return s > 0.0 ? (1.0 / s) * p : p;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

SturmChain build_chain(const Polynomial& poly) {
  if (poly.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "Sturm chain of the zero polynomial");
  }
  SturmChain chain;
  chain.members.push_back(unit_scaled(poly));
  if (poly.degree() == 0) return chain;
  chain.members.push_back(unit_scaled(chain.members.front().derivative()));

  while (chain.members.back().degree() > 0) {
    const Polynomial& prev = chain.members[chain.members.size() - 2];
    const Polynomial& last = chain.members.back();
    Polynomial rem = divide(prev, last, kChainTolerance).remainder;
    if (rem.is_zero()) {
      throw Error(ErrorCode::MultipleRootSuspected,
                  "Sturm remainder vanished at degree " +
                      std::to_string(last.degree()) + "; multiple root suspected");
    }
    chain.members.push_back(unit_scaled(-1.0 * rem));
  }
  return chain;
}

SignTable sign_table(const SturmChain& chain) {
  SignTable table;
  for (const Polynomial& f : chain.members) {
    table.at_zero.push_back(sign_of(f.coefficient(0)));
    table.at_infinity.push_back(sign_of(f.leading()));
  }
  table.changes_at_zero = sign_changes(table.at_zero);
  table.changes_at_infinity = sign_changes(table.at_infinity);
  return table;
}

int count_positive_roots(const SturmChain& chain) {
  if (chain.members.empty()) return 0;
  const Polynomial& f0 = chain.members.front();
  if (std::abs(f0.coefficient(0)) <= kChainTolerance * f0.max_abs_coefficient()) {
    throw Error(ErrorCode::EndpointIsRoot, "x = 0 is a root of the polynomial");
  }
  return sign_table(chain).positive_roots();
}

int dense_positive_root_count(const Polynomial& poly) {
  if (poly.degree() <= 0) return 0;
  double bound = 0.0;
  for (int k = 0; k < poly.degree(); ++k) {
    bound = std::max(bound, std::abs(poly.coefficient(k) / poly.leading()));
  }
  bound += 1.0;
  const double lo = 1e-9 * bound;
  constexpr int kSamples = 200000;
  const double ratio = std::pow(bound / lo, 1.0 / kSamples);
  int changes = 0;
  double x = lo;
  int last = sign_of(poly(0.0));
  for (int k = 0; k <= kSamples; ++k, x *= ratio) {
    const int s = sign_of(poly(x));
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

Polynomial pole_polynomial(const NormalizedPlant& plant) {
  const Polynomial& a = plant.a();
  const Polynomial& b = plant.b();
  const Polynomial& c = plant.c();
  const Polynomial& d = plant.d();
  const Polynomial in_y = c * c + d * d + a * c + b * d;
  // Even in y by construction; keep the even coefficients as a series in x.
  std::vector<double> in_x;
  for (int k = 0; k <= in_y.degree(); k += 2) in_x.push_back(in_y.coefficient(k));
  return Polynomial(std::move(in_x));
}

PoleCount pole_count_of_e(const NormalizedPlant& plant) {
  const Polynomial f0 = pole_polynomial(plant);
  if (f0.degree() <= 0) return {0, true};
  try {
    return {count_positive_roots(build_chain(f0)), true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MultipleRootSuspected) throw;
    return {dense_positive_root_count(f0), false};
  }
}

}  // namespace delaystab
