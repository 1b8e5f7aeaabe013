#include "delaystab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "delaystab/error.hpp"
#include "delaystab/roots.hpp"

namespace delaystab {

namespace {

using cplx = std::complex<double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPoleTolerance = 1e-12;

std::vector<cplx> imaginary_product(std::span<const double> sym) {
  std::vector<cplx> c(sym.size());
  cplx jk{1.0, 0.0};
  for (std::size_t k = 0; k < sym.size(); ++k) {
    c[k] = sym[k] * jk;
    jk *= cplx{0.0, 1.0};
  }
  return c;
}

struct Jet {
  cplx v, d1, d2;
};

Jet horner(const std::vector<cplx>& c, double y) {
  Jet j{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    j.d2 = j.d2 * y + 2.0 * j.d1;
    j.d1 = j.d1 * y + j.v;
    j.v = j.v * y + *it;
  }
  return j;
}

struct EParts {
  double numerator = kNaN;
  double denominator = kNaN;
  double root = kNaN;  // sqrt(P^2 + Q^2 - 1)
};

EParts e_parts(const PqDerivatives& d, Branch branch) {
  const double disc = d.p * d.p + d.q * d.q - 1.0;
  if (disc < 0.0) return {};
  const double root = std::sqrt(disc);
  const double s = branch == Branch::Plus ? 1.0 : -1.0;
  return {-d.q + s * root, 1.0 + d.p, root};
}

double branch_value(const EParts& e) {
  if (std::isnan(e.root)) return kNaN;
  if (std::abs(e.denominator) < kPoleTolerance) {
    if (std::abs(e.numerator) < kPoleTolerance) return kNaN;
    const double sign = (e.denominator == 0.0) ? 1.0 : std::copysign(1.0, e.denominator);
    return std::copysign(std::numeric_limits<double>::infinity(),
                         e.numerator * sign);
  }
  return e.numerator / e.denominator;
}

}  // namespace

double default_scan_max(const NormalizedPlant& plant) {
  double smallest = std::numeric_limits<double>::infinity();
  for (double t : plant.t()) smallest = std::min(smallest, std::abs(t));
  for (double z : plant.z()) smallest = std::min(smallest, std::abs(z));
  return std::clamp(10.0 / smallest, 4.0 * std::numbers::pi, 200.0);
}

HarmonicContext::HarmonicContext(NormalizedPlant plant, double scan_max)
    : plant_(std::move(plant)),
      numerator_(imaginary_product(plant_.u_table())),
      denominator_(imaginary_product(plant_.v_table())),
      scan_max_(scan_max > 0.0 ? scan_max : default_scan_max(plant_)) {}

PqDerivatives HarmonicContext::pq(double y) const {
  const Jet n = horner(numerator_, y);
  const Jet d = horner(denominator_, y);
  if (std::norm(d.v) == 0.0) {
    throw Error(ErrorCode::ZeroOnImaginaryAxis,
                "plant numerator vanishes on the imaginary axis");
  }
  const cplx r = n.v / d.v;
  const cplx r1 = (n.d1 - r * d.d1) / d.v;
  const cplx r2 = (n.d2 - 2.0 * r1 * d.d1 - r * d.d2) / d.v;
  return {r.real(), r.imag(), r1.real(), r1.imag(), r2.real(), r2.imag()};
}

cplx HarmonicContext::rational(double y) const {
  const Jet n = horner(numerator_, y);
  const Jet d = horner(denominator_, y);
  if (std::norm(d.v) == 0.0) {
    throw Error(ErrorCode::ZeroOnImaginaryAxis,
                "plant numerator vanishes on the imaginary axis");
  }
  return n.v / d.v;
}

double eval_f1(const HarmonicContext& ctx, double y) {
  const PqDerivatives d = ctx.pq(y);
  return y * (d.q * std::cos(y) + d.p * std::sin(y));
}

double eval_g1(const HarmonicContext& ctx, double y) {
  const PqDerivatives d = ctx.pq(y);
  return -d.p * std::cos(y) + d.q * std::sin(y);
}

FG eval_fg(const HarmonicContext& ctx, const ControllerPoint& point, double y) {
  const double h_e = point.h_i - point.h_d * y * y;
  return {h_e - eval_f1(ctx, y), y * (point.h - eval_g1(ctx, y))};
}

G1Derivatives eval_g1_derivatives(const HarmonicContext& ctx, double y) {
  const PqDerivatives d = ctx.pq(y);
  const double c = std::cos(y);
  const double s = std::sin(y);
  return {(-d.dp + d.q) * c + (d.p + d.dq) * s,
          (d.p - d.d2p + 2.0 * d.dq) * c + (-d.q + d.d2q + 2.0 * d.dp) * s};
}

Phi eval_phi(const NormalizedPlant& plant) {
  const double u1 = plant.u(1);
  const double u2 = plant.u(2);
  const double v1 = plant.v(1);
  const double v2 = plant.v(2);
  return {1.0 + u1 - v1,
          1.0 + 2.0 * u1 + 2.0 * u2 - 2.0 * u1 * v1 + 2.0 * v1 * v1 - 2.0 * v1 -
              2.0 * v2};
}

double eval_e(const HarmonicContext& ctx, double y, Branch branch) {
  if (y == 0.0) {
    double st = 0.0;
    double sz = 0.0;
    for (double t : ctx.plant().t()) st += t * t;
    for (double z : ctx.plant().z()) sz += z * z;
    if (st <= sz) {
      throw Error(ErrorCode::ExistenceFail,
                  "E has no real branch near y = 0 (sum t^2 <= sum z^2)");
    }
    return 0.0;
  }
  const EParts e = e_parts(ctx.pq(y), branch);
  if (std::isnan(e.root)) {
    throw Error(ErrorCode::NoRealBranch, "P^2 + Q^2 < 1: E has no real value");
  }
  return branch_value(e);
}

double eval_e_derivative(const HarmonicContext& ctx, double y, Branch branch) {
  const PqDerivatives d = ctx.pq(y);
  const EParts e = e_parts(d, branch);
  if (std::isnan(e.root) || e.root == 0.0 ||
      std::abs(e.denominator) < kPoleTolerance) {
    return kNaN;
  }
  const double s = branch == Branch::Plus ? 1.0 : -1.0;
  const double droot = (d.p * d.dp + d.q * d.dq) / e.root;
  const double dnum = -d.dq + s * droot;
  return (dnum * e.denominator - e.numerator * d.dp) /
         (e.denominator * e.denominator);
}

ESlopes eval_e_slope_at_zero(const NormalizedPlant& plant) {
  const double u1 = plant.u(1);
  const double v1 = plant.v(1);
  double radicand = u1 * u1 - 2.0 * plant.u(2) - v1 * v1 + 2.0 * plant.v(2);
  if (radicand < 0.0) {
    if (radicand > -1e-12) {
      radicand = 0.0;
    } else {
      throw Error(ErrorCode::ImaginarySlope,
                  "E'(0) is complex: sum t^2 < sum z^2");
    }
  }
  const double base = 0.5 * (-u1 + v1);
  const double half_root = 0.5 * std::sqrt(radicand);
  ESlopes out{base - half_root, base + half_root, 0};
  out.above_half = static_cast<int>(out.minus > 0.5) + static_cast<int>(out.plus > 0.5);
  return out;
}

std::vector<TangencyPoint> eval_ed(const HarmonicContext& ctx) {
  std::vector<TangencyPoint> out;
  for (Branch branch : {Branch::Minus, Branch::Plus}) {
    auto mismatch = [&](double y) {
      const double half_tan = std::tan(0.5 * y);
      return 0.5 * (1.0 + half_tan * half_tan) - eval_e_derivative(ctx, y, branch);
    };
    for (double y : scan_roots(mismatch, 0.0, ctx.scan_max())) {
      const double slope = eval_e_derivative(ctx, y, branch);
      const double residual = mismatch(y);
      if (!std::isfinite(residual) ||
          std::abs(residual) > 1e-8 * std::max(1.0, std::abs(slope))) {
        continue;  // jump across a pole of E or a branch endpoint
      }
      const double e = branch_value(e_parts(ctx.pq(y), branch));
      if (!std::isfinite(e)) continue;
      out.push_back({y, branch, std::tan(0.5 * y) - e});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TangencyPoint& a, const TangencyPoint& b) { return a.y < b.y; });
  return out;
}

double eval_hm(const HarmonicContext& ctx, double y) {
  const PqDerivatives d = ctx.pq(y);
  const double num = d.p * d.p + d.q * d.q + d.p * d.dq - d.dp * d.q;
  const double den = std::hypot(d.dp - d.q, d.p + d.dq);
  return std::abs(num) / den;
}

double eval_hm_derivative(const HarmonicContext& ctx, double y) {
  const PqDerivatives d = ctx.pq(y);
  const double num = d.p * d.p + d.q * d.q + d.p * d.dq - d.dp * d.q;
  const double dnum = 2.0 * d.p * d.dp + 2.0 * d.q * d.dq + d.p * d.d2q - d.d2p * d.q;
  const double x1 = d.dp - d.q;
  const double x2 = d.p + d.dq;
  const double den = std::hypot(x1, x2);
  if (den == 0.0) return kNaN;
  const double dden = (x1 * (d.d2p - d.dq) + x2 * (d.dp + d.d2q)) / den;
  const double sign = num < 0.0 ? -1.0 : 1.0;
  return (sign * dnum * den - std::abs(num) * dden) / (den * den);
}

std::vector<double> g1_stationary_points(const HarmonicContext& ctx, double y_max) {
  auto slope = [&](double y) { return eval_g1_derivatives(ctx, y).first; };
  return scan_roots(slope, 0.0, y_max);
}

HmEnvelope eval_hm_envelope(const HarmonicContext& ctx) {
  HmEnvelope env;
  auto slope = [&](double y) { return eval_hm_derivative(ctx, y); };
  const std::vector<double> critical = scan_roots(slope, 0.0, ctx.scan_max());
  if (!critical.empty()) env.y_r1 = critical.back();

  for (double y : g1_stationary_points(ctx, ctx.scan_max())) {
    const double g1 = eval_g1(ctx, y);
    env.extrema.push_back({y, g1, std::abs(g1)});
    if (!env.y_r1) break;
    if (y > *env.y_r1 && std::abs(g1) > 1.0) break;
  }
  return env;
}

}  // namespace delaystab
