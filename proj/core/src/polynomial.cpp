#include "delaystab/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "delaystab/error.hpp"

namespace delaystab {

namespace {

void strip(std::vector<double>& c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  strip(coefficients_);
}

double Polynomial::coefficient(int k) const noexcept {
  if (k < 0 || k > degree()) return 0.0;
  return coefficients_[static_cast<std::size_t>(k)];
}

double Polynomial::leading() const noexcept {
  return coefficients_.empty() ? 0.0 : coefficients_.back();
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (double c : coefficients_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<double> d(coefficients_.size() - 1);
  for (std::size_t k = 1; k < coefficients_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coefficients_[k];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(double relative_tolerance,
                               double reference) const {
  std::vector<double> c = coefficients_;
  const double cutoff = relative_tolerance * reference;
  while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coefficients_.size(), b.coefficients_.size()),
                        0.0);
  for (std::size_t k = 0; k < a.coefficients_.size(); ++k) c[k] += a.coefficients_[k];
  for (std::size_t k = 0; k < b.coefficients_.size(); ++k) c[k] += b.coefficients_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + (-1.0) * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coefficients_.size() + b.coefficients_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j) {
      c[i + j] += a.coefficients_[i] * b.coefficients_[j];
    }
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coefficients_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

PolynomialDivision divide(const Polynomial& numerator,
                          const Polynomial& denominator,
                          double relative_tolerance) {
  if (denominator.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  }
  const int dn = denominator.degree();
  std::vector<double> rem = numerator.coefficients();
  if (numerator.degree() < dn) return {Polynomial{}, numerator};

  std::vector<double> quo(static_cast<std::size_t>(numerator.degree() - dn + 1), 0.0);
  const double lead = denominator.leading();
  for (int k = numerator.degree() - dn; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + dn)] / lead;
    quo[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dn; ++j) {
      rem[static_cast<std::size_t>(k + j)] -= q * denominator.coefficient(j);
    }
    rem[static_cast<std::size_t>(k + dn)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(dn));
  const double cutoff = relative_tolerance * numerator.max_abs_coefficient();
  for (double& v : rem) {
    if (std::abs(v) <= cutoff) v = 0.0;
  }
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  }
  return e;
}

}  // namespace delaystab
