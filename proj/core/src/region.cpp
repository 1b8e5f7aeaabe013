#include "delaystab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "delaystab/error.hpp"
#include "delaystab/roots.hpp"

namespace delaystab {

namespace {

constexpr double kSlopeTolerance = 1e-12;
constexpr double kVertexMerge = 1e-9;
constexpr int kMaxExtensions = 4;

HalfPlane make_half_plane(HalfPlane::Kind kind, double a, double b, double c) {
  const double norm = std::hypot(a, b);
  HalfPlane hp;
  hp.kind = kind;
  hp.a = a / norm;
  hp.b = b / norm;
  hp.c = c / norm;
  return hp;
}

HalfPlane root_half_plane(double y0, double rhs, Direction dir) {
  const double y2 = y0 * y0;
  HalfPlane hp = dir == Direction::Less
                     ? make_half_plane(HalfPlane::Kind::Root, 1.0, -y2, rhs)
                     : make_half_plane(HalfPlane::Kind::Root, -1.0, y2, -rhs);
  hp.y0 = y0;
  hp.rhs = rhs;
  hp.dir = dir;
  return hp;
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

std::vector<Point2> clip(const std::vector<Point2>& poly, const HalfPlane& hp) {
  std::vector<Point2> out;
  if (poly.empty()) return out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % poly.size()];
    const double sc = hp.slack(cur);
    const double sn = hp.slack(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc >= 0.0) != (sn >= 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back({cur.h_i + t * (nxt.h_i - cur.h_i), cur.h_d + t * (nxt.h_d - cur.h_d)});
    }
  }
  std::vector<Point2> merged;
  for (const Point2& p : out) {
    if (merged.empty() || std::abs(p.h_i - merged.back().h_i) > kVertexMerge ||
        std::abs(p.h_d - merged.back().h_d) > kVertexMerge) {
      merged.push_back(p);
    }
  }
  while (merged.size() > 1 &&
         std::abs(merged.front().h_i - merged.back().h_i) <= kVertexMerge &&
         std::abs(merged.front().h_d - merged.back().h_d) <= kVertexMerge) {
    merged.pop_back();
  }
  if (merged.size() < 3) merged.clear();
  return merged;
}

}  // namespace

std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Inside: return "Stable";
    case PointStatus::Marginal: return "Marginal";
    case PointStatus::Outside: return "Unstable";
  }
  return "Unstable";
}

HInterval admissible_h(const HarmonicContext& ctx, PlantCase kind) {
  HInterval out;
  out.kind = kind;
  const HmEnvelope env = eval_hm_envelope(ctx);
  std::optional<double> nearest;
  for (const Extremum& e : env.extrema) {
    const bool qualifies = kind == PlantCase::Case1 ? e.g1 > -1.0 : e.g1 < -1.0;
    if (!qualifies) continue;
    out.source_extrema.push_back(e);
    if (!nearest || std::abs(e.g1 + 1.0) < std::abs(*nearest + 1.0)) nearest = e.g1;
  }
  if (!nearest) {
    throw Error(ErrorCode::EmptyInterval,
                kind == PlantCase::Case1
                    ? "G1 has no local extremum above -1"
                    : "G1 has no local extremum below -1");
  }
  if (kind == PlantCase::Case1) {
    out.lower = -1.0;
    out.upper = *nearest;
  } else {
    out.lower = *nearest;
    out.upper = -1.0;
  }
  return out;
}

std::vector<double> g_roots(const HarmonicContext& ctx, double h, double y_max) {
  auto level = [&](double y) { return h - eval_g1(ctx, y); };
  std::vector<double> roots = scan_roots(level, 0.0, y_max);
  std::erase_if(roots, [](double y) { return y < kRootTolerance; });
  if (has_close_pair(roots)) {
    throw Error(ErrorCode::Degenerate, "near-double root of G: h touches an extremum of G1");
  }
  return roots;
}

std::vector<HalfPlane> build_constraints(const HarmonicContext& ctx, double h,
                                         std::span<const double> roots, PlantCase kind) {
  (void)h;
  std::vector<HalfPlane> out;
  for (double y0 : roots) {
    const double slope = eval_g1_derivatives(ctx, y0).first;
    if (std::abs(slope) < kSlopeTolerance) {
      throw Error(ErrorCode::Degenerate, "G1' vanishes at a root of G");
    }
    out.push_back(root_half_plane(y0, eval_f1(ctx, y0),
                                  slope > 0.0 ? Direction::Less : Direction::Greater));
  }

  // y = 0 is always a root of G; its condition reduces to (h + 1) h_i > 0.
  HalfPlane axis = kind == PlantCase::Case1
                       ? make_half_plane(HalfPlane::Kind::Axis, -1.0, 0.0, 0.0)
                       : make_half_plane(HalfPlane::Kind::Axis, 1.0, 0.0, 0.0);
  axis.dir = kind == PlantCase::Case1 ? Direction::Greater : Direction::Less;
  out.push_back(axis);

  const NormalizedPlant& plant = ctx.plant();
  if (plant.m() == plant.n() - 1) {
    const double bound = std::abs(plant.u(plant.n()) / plant.v(plant.m()));
    out.push_back(make_half_plane(HalfPlane::Kind::DerivativeBound, 0.0, 1.0, bound));
    out.push_back(make_half_plane(HalfPlane::Kind::DerivativeBound, 0.0, -1.0, bound));
  }
  return out;
}

std::vector<RootPair> pair_roots(const HarmonicContext& ctx, std::span<const double> roots) {
  std::vector<RootPair> pairs;
  for (std::size_t k = 0; k + 1 < roots.size(); k += 2) {
    RootPair p;
    p.index = static_cast<int>(k / 2) + 1;
    p.y_a = roots[k];
    p.y_b = roots[k + 1];
    p.h_ea = eval_f1(ctx, p.y_a);
    p.h_eb = eval_f1(ctx, p.y_b);
    p.slope_a = eval_g1_derivatives(ctx, p.y_a).first;
    p.slope_b = eval_g1_derivatives(ctx, p.y_b).first;
    pairs.push_back(p);
  }
  return pairs;
}

TriangleGeometry triangle_geometry(const HarmonicContext& ctx, const RootPair& pair,
                                   double h, double hi_v1) {
  const double ya2 = pair.y_a * pair.y_a;
  const double yb2 = pair.y_b * pair.y_b;
  const double span = yb2 - ya2;
  TriangleGeometry g;
  g.v = {(yb2 * pair.h_ea - ya2 * pair.h_eb) / span, (pair.h_ea - pair.h_eb) / span};
  g.u = {0.0, -pair.h_eb / yb2};
  g.w = {0.0, -pair.h_ea / ya2};

  auto probe = [&](double y, double h_e) {
    const PqDerivatives d = ctx.pq(y);
    const double radicand = std::max(0.0, d.p * d.p + d.q * d.q - h * h);
    return hi_v1 / (y * y) - sign_of(h_e) * std::sqrt(radicand) / y;
  };
  g.r = {hi_v1, probe(pair.y_b, pair.h_eb)};
  g.s = {hi_v1, probe(pair.y_a, pair.h_ea)};
  return g;
}

double termination_bound(const HarmonicContext& ctx, double h) {
  const std::vector<double> roots = g_roots(ctx, h, ctx.scan_max());
  if (roots.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "G has fewer than two positive roots");
  }
  const std::vector<RootPair> first = pair_roots(ctx, std::span(roots).first(2));
  const RootPair& p1 = first.front();
  const double hi_v1 = triangle_geometry(ctx, p1, h, 0.0).v.h_i;
  const double s_b = sign_of(p1.h_eb);

  // d/dy of  -s_b sqrt(S)/y  and  hi_v1 / y^2 - s_b sqrt(S)/y,  S = P^2+Q^2-h^2.
  auto envelope_slope = [&](double y) {
    const PqDerivatives d = ctx.pq(y);
    const double s = d.p * d.p + d.q * d.q - h * h;
    if (s <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double root = std::sqrt(s);
    const double ds = 2.0 * (d.p * d.dp + d.q * d.dq);
    return -s_b * (ds / (2.0 * root * y) - root / (y * y));
  };
  auto du = envelope_slope;
  auto dr = [&](double y) { return -2.0 * hi_v1 / (y * y * y) + envelope_slope(y); };

  double y_r2 = p1.y_b;
  for (double y : scan_roots(du, p1.y_b, ctx.scan_max())) y_r2 = std::max(y_r2, y);
  for (double y : scan_roots(dr, p1.y_b, ctx.scan_max())) y_r2 = std::max(y_r2, y);
  return y_r2;
}

double Polygon::area() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % vertices.size()];
    acc += a.h_i * b.h_d - b.h_i * a.h_d;
  }
  return 0.5 * acc;
}

Polygon intersect_region(std::span<const HalfPlane> constraints, double box) {
  std::vector<Point2> poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (const HalfPlane& hp : constraints) {
    poly = clip(poly, hp);
    if (poly.empty()) break;
  }
  Polygon out;
  out.vertices = std::move(poly);
  const double edge = box * (1.0 - 1e-12);
  out.unbounded = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const Point2& p) {
    return std::abs(p.h_i) >= edge || std::abs(p.h_d) >= edge;
  });
  return out;
}

PointStatus classify_point(std::span<const HalfPlane> constraints, const Point2& p,
                           double tolerance) {
  double worst = std::numeric_limits<double>::infinity();
  for (const HalfPlane& hp : constraints) worst = std::min(worst, hp.slack(p));
  if (worst < -tolerance) return PointStatus::Outside;
  if (worst <= tolerance) return PointStatus::Marginal;
  return PointStatus::Inside;
}

StabilityRegion build_region(const HarmonicContext& ctx, double h, PlantCase kind,
                             const RegionOptions& options) {
  StabilityRegion region;
  region.h = h;
  region.plant_case = kind;
  region.y_r2 = termination_bound(ctx, h);

  double extent = std::max(ctx.scan_max(), 2.0 * region.y_r2);
  bool slack_verified = false;
  for (int attempt = 0; attempt <= kMaxExtensions; ++attempt) {
    const std::vector<double> all = g_roots(ctx, h, 2.0 * extent);
    const auto split = std::upper_bound(all.begin(), all.end(), extent);
    const std::vector<double> inside(all.begin(), split);
    const std::vector<double> band(split, all.end());

    region.constraints = build_constraints(ctx, h, inside, kind);
    region.polygon = intersect_region(region.constraints, options.box);
    region.y_extent = inside.empty() ? 0.0 : inside.back();

    const std::vector<HalfPlane> later = build_constraints(ctx, h, band, kind);
    slack_verified = std::all_of(later.begin(), later.end(), [&](const HalfPlane& hp) {
      return std::all_of(region.polygon.vertices.begin(), region.polygon.vertices.end(),
                         [&](const Point2& p) { return hp.slack(p) >= -1e-9; });
    });
    if (slack_verified) break;
    extent *= 2.0;
  }

  const std::vector<double> roots = g_roots(ctx, h, region.y_extent);
  region.pairs = pair_roots(ctx, roots);
  if (!region.pairs.empty()) {
    const double hi_v1 = triangle_geometry(ctx, region.pairs.front(), h, 0.0).v.h_i;
    // Everything up to y_r2, plus the first pair past it.
    for (const RootPair& p : region.pairs) {
      region.triangles.push_back(triangle_geometry(ctx, p, h, hi_v1));
      if (p.y_b > region.y_r2) break;
    }
  }

  const NormalizedPlant& plant = ctx.plant();
  if (plant.m() == plant.n() - 1) {
    region.hd_bound = std::abs(plant.u(plant.n()) / plant.v(plant.m()));
  }
  if (region.polygon.vertices.empty()) {
    region.flags.emplace_back("Empty");
  }
  if (region.polygon.unbounded) region.flags.emplace_back("Unbounded");
  if (!slack_verified) region.flags.emplace_back("SlackUnverified");
  return region;
}

std::vector<StabilityRegion> sweep_h(const HarmonicContext& ctx, const HInterval& interval,
                                     int steps, const RegionOptions& options) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one step");
  std::vector<StabilityRegion> out(static_cast<std::size_t>(steps));
  std::vector<std::exception_ptr> errors(out.size());
  const double width = interval.upper - interval.lower;
  const int workers = std::max(
      1, std::min(steps, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int k = w; k < steps; k += workers) {
        const double h = interval.lower + width * (k + 1) / (steps + 1);
        try {
          out[static_cast<std::size_t>(k)] = build_region(ctx, h, interval.kind, options);
        } catch (...) {
          errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const bool all_empty = std::all_of(out.begin(), out.end(), [](const StabilityRegion& r) {
    return r.polygon.vertices.empty();
  });
  if (all_empty) {
    for (StabilityRegion& r : out) r.flags.emplace_back("StabilizableButNotRealized");
  }
  return out;
}

}  // namespace delaystab
