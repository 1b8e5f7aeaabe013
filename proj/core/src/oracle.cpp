#include "delaystab/oracle.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <future>
#include <limits>

#include "delaystab/error.hpp"
#include "delaystab/roots.hpp"

namespace delaystab {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Beyond this real part e^s is kept out of the arithmetic.
constexpr double kFactoredAbove = 50.0;
constexpr double kZeroRatio = 1e-10;
constexpr int kMaxDepth = 30;
constexpr int kPerturbations = 3;
constexpr int kExtensions = 8;

cplx horner(std::span<const double> c, cplx s) {
  cplx acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

struct Sample {
  double angle = 0.0;
  bool near_zero = false;
};

class CharacteristicFunction {
 public:
  CharacteristicFunction(const NormalizedPlant& plant, const ControllerPoint& point)
      : plant_(plant), point_(point) {}

  Sample operator()(cplx s) const {
    const cplx num = horner(plant_.u_table(), s);
    const cplx den = horner(plant_.v_table(), s);
    const cplx pid = point_.h_i + point_.h * s + point_.h_d * s * s;
    if (std::abs(den) == 0.0) return {0.0, true};
    if (s.real() <= kFactoredAbove) {
      const cplx lead = s * std::exp(s) * num / den;
      const cplx value = lead + pid;
      const double scale = std::abs(lead) + std::abs(pid);
      return {std::arg(value), std::abs(value) <= kZeroRatio * scale};
    }
    // H = base e^s (1 + w): phase of e^s is Im s exactly.
    const cplx base = s * num / den;
    const cplx w = pid * std::exp(-s) / base;
    const cplx corr = 1.0 + w;
    return {std::arg(base) + s.imag() + std::arg(corr),
            std::abs(corr) <= kZeroRatio * (1.0 + std::abs(w))};
  }

 private:
  const NormalizedPlant& plant_;
  ControllerPoint point_;
};

double wrapped(double d) { return std::remainder(d, kTwoPi); }

struct EdgeResult {
  double phase = 0.0;
  bool hit = false;
};

class EdgeIntegrator {
 public:
  EdgeIntegrator(const CharacteristicFunction& f, cplx from, cplx to)
      : f_(f), from_(from), to_(to) {}

  EdgeResult run(int samples_per_unit) const {
    const double length = std::abs(to_ - from_);
    const int n = std::max(4, static_cast<int>(std::ceil(length * samples_per_unit)));
    EdgeResult out;
    double t_prev = 0.0;
    Sample s_prev = f_(point(0.0));
    if (s_prev.near_zero) return {0.0, true};
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Sample s = f_(point(t));
      out.phase += refine(t_prev, s_prev, t, s, 0, out.hit);
      if (out.hit) return out;
      t_prev = t;
      s_prev = s;
    }
    return out;
  }

 private:
  cplx point(double t) const { return from_ + t * (to_ - from_); }

  double refine(double ta, const Sample& a, double tb, const Sample& b, int depth,
                bool& hit) const {
    if (b.near_zero) {
      hit = true;
      return 0.0;
    }
    const double d = wrapped(b.angle - a.angle);
    if (std::abs(d) <= kPi / 4.0) return d;
    if (depth >= kMaxDepth) {
      if (std::abs(d) > kPi / 2.0) hit = true;
      return d;
    }
    const double tm = 0.5 * (ta + tb);
    const Sample m = f_(point(tm));
    const double left = refine(ta, a, tm, m, depth + 1, hit);
    if (hit) return 0.0;
    return left + refine(tm, m, tb, b, depth + 1, hit);
  }

  const CharacteristicFunction& f_;
  cplx from_;
  cplx to_;
};

struct Winding {
  bool hit = false;
  double turns = 0.0;
};

Winding winding_number(const CharacteristicFunction& f, double x_max, double y_max,
                       int samples_per_unit) {
  const std::array<std::pair<cplx, cplx>, 4> edges = {{
      {{0.0, -y_max}, {x_max, -y_max}},
      {{x_max, -y_max}, {x_max, y_max}},
      {{x_max, y_max}, {0.0, y_max}},
      {{0.0, y_max}, {0.0, -y_max}},
  }};
  std::array<std::future<EdgeResult>, 4> parts;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    parts[e] = std::async(std::launch::async, [&, e] {
      return EdgeIntegrator(f, edges[e].first, edges[e].second).run(samples_per_unit);
    });
  }
  Winding w;
  for (auto& p : parts) {
    const EdgeResult r = p.get();
    w.hit = w.hit || r.hit;
    w.turns += r.phase / kTwoPi;
  }
  return w;
}

struct Attempt {
  bool hit = false;
  int winding = 0;
  double residual = 0.0;
};

Attempt attempt(const CharacteristicFunction& f, double x_max, double y_max, int spu) {
  Winding w = winding_number(f, x_max, y_max, spu);
  if (w.hit) return {true, 0, 0.0};
  double residual = std::abs(w.turns - std::round(w.turns));
  if (residual >= 0.05) {
    w = winding_number(f, x_max, y_max, 4 * spu);
    if (w.hit) return {true, 0, 0.0};
    residual = std::abs(w.turns - std::round(w.turns));
  }
  return {false, static_cast<int>(std::lround(w.turns)), residual};
}

int enclosed_poles(const NormalizedPlant& plant, double x_max, bool& on_contour) {
  int poles = 0;
  for (double z : plant.z()) {
    if (z >= 0.0) continue;
    const double s = -1.0 / z;
    if (std::abs(s - x_max) < 1e-6) on_contour = true;
    if (s < x_max) ++poles;
  }
  return poles;
}

}  // namespace

RhpCount count_rhp_zeros(const NormalizedPlant& plant, const ControllerPoint& point,
                         const ContourSpec& contour) {
  if (contour.x_max <= 0.0 || contour.y_max <= 0.0 || contour.samples_per_unit < 1) {
    throw Error(ErrorCode::InvalidArgument, "contour extents must be positive");
  }
  const CharacteristicFunction f(plant, point);
  ContourSpec spec = contour;

  for (int tries = 0; tries <= kPerturbations; ++tries) {
    bool pole_on_contour = false;
    const int poles = enclosed_poles(plant, spec.x_max, pole_on_contour);
    Attempt base = pole_on_contour ? Attempt{true, 0, 0.0}
                                   : attempt(f, spec.x_max, spec.y_max, spec.samples_per_unit);
    if (base.hit) {
      spec.y_max += kPi / 7.0;
      spec.x_max += 0.37;
      continue;
    }
    // Grow the rectangle until one more period of height changes nothing.
    for (int ext = 0; ext < kExtensions; ++ext) {
      const Attempt taller =
          attempt(f, spec.x_max, spec.y_max + kTwoPi, spec.samples_per_unit);
      if (taller.hit || taller.winding == base.winding) break;
      spec.y_max += kTwoPi;
      base = taller;
    }
    RhpCount out;
    out.winding = base.winding;
    out.enclosed_poles = poles;
    out.zeros = base.winding + poles;
    out.contour = spec;
    out.residual = base.residual;
    out.certified = base.residual < 0.05;
    return out;
  }
  throw Error(ErrorCode::ContourHitsZero,
              "H vanishes on the contour after 3 perturbations");
}

int grid_count_g_roots(const HarmonicContext& ctx, double h, double y_lo, double y_hi) {
  if (!(y_hi > y_lo)) return 0;
  auto level = [&](double y) { return h - eval_g1(ctx, y); };
  std::vector<double> roots = scan_roots(level, y_lo, y_hi, kPi / 400.0);
  std::erase_if(roots, [](double y) { return std::abs(y) < 1e-6; });
  if (has_close_pair(roots)) {
    throw Error(ErrorCode::Degenerate, "tangency between G1 and the level h");
  }
  const bool covers_zero = y_lo <= 0.0 && 0.0 <= y_hi;
  return static_cast<int>(roots.size()) + (covers_zero ? 1 : 0);
}

int grid_count_tan_e_intersections(const HarmonicContext& ctx, double y_lo, double y_hi) {
  if (!(y_hi > y_lo)) return 0;
  int total = 0;
  for (double sign : {-1.0, 1.0}) {
    // tan(y/2) = (-q + sign sqrt(D)) / (1 + p) with both denominators cleared.
    auto gap = [&](double y) {
      const PqDerivatives d = ctx.pq(y);
      const double disc = d.p * d.p + d.q * d.q - 1.0;
      if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
      const double numer = -d.q + sign * std::sqrt(disc);
      return std::sin(0.5 * y) * (1.0 + d.p) - std::cos(0.5 * y) * numer;
    };
    for (double y : scan_roots(gap, y_lo, y_hi, kPi / 400.0)) {
      if (std::abs(y) < 1e-6) continue;
      const PqDerivatives d = ctx.pq(y);
      const double scale = 1.0 + std::abs(d.p) + std::abs(d.q);
      const double g = gap(y);
      if (!std::isfinite(g) || std::abs(g) > 1e-8 * scale) continue;
      // 1 + p and the numerator vanishing together is a removable 0/0, not
      // an intersection.
      const double numer = -d.q + sign * std::sqrt(d.p * d.p + d.q * d.q - 1.0);
      if (std::abs(1.0 + d.p) < 1e-6 * scale && std::abs(numer) < 1e-6 * scale) continue;
      ++total;
    }
  }
  return total;
}

}  // namespace delaystab
