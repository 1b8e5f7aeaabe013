#pragma once

#include <span>
#include <vector>

namespace delaystab {

/// Dense real polynomial, coefficients stored in ascending order of degree.
/// Trailing zero coefficients are stripped, so the zero polynomial has no
/// coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  [[nodiscard]] int degree() const noexcept {
    return static_cast<int>(coefficients_.size()) - 1;
  }
  [[nodiscard]] bool is_zero() const noexcept { return coefficients_.empty(); }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept {
    return coefficients_;
  }
  [[nodiscard]] double coefficient(int k) const noexcept;
  [[nodiscard]] double leading() const noexcept;
  [[nodiscard]] double max_abs_coefficient() const noexcept;

  [[nodiscard]] double operator()(double x) const noexcept;
  [[nodiscard]] Polynomial derivative() const;

  /// Drops leading coefficients whose magnitude is below
  /// `relative_tolerance * reference`.
  [[nodiscard]] Polynomial trimmed(double relative_tolerance,
                                   double reference) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

 private:
  std::vector<double> coefficients_;
};

struct PolynomialDivision {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division. Remainder coefficients smaller than
/// `relative_tolerance * max|numerator|` are treated as exact zeros.
[[nodiscard]] PolynomialDivision divide(const Polynomial& numerator,
                                        const Polynomial& denominator,
                                        double relative_tolerance = 1e-12);

/// e_k(values) for k = 0..size, computed one factor at a time.
[[nodiscard]] std::vector<double> elementary_symmetric(
    std::span<const double> values);

}  // namespace delaystab
