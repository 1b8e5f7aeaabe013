#include <doctest.h>

#include <random>

#include "delaystab/error.hpp"
#include "delaystab/harmonic.hpp"
#include "delaystab/region.hpp"
#include "support/oracles.hpp"

using namespace delaystab;

namespace {

const std::vector<double> kExampleT{0.6, 0.8};

HarmonicContext example() { return HarmonicContext(NormalizedPlant(kExampleT)); }

}  // namespace

TEST_CASE("F1 and G1 at reference points") {
  const HarmonicContext ctx = example();
  CHECK(eval_f1(ctx, 0.0) == 0.0);
  CHECK(eval_g1(ctx, 0.0) == doctest::Approx(-1.0));
  CHECK(std::abs(eval_f1(ctx, 0.863) - 1.099) < 0.002);
  CHECK(std::abs(eval_f1(ctx, 2.498) - (-9.985)) < 0.01);
  CHECK(std::abs(eval_g1(ctx, 1.778) - 2.330) < 0.002);
}

TEST_CASE("F1, G1 and F + jG match the complex characteristic function") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> yd(-20.0, 20.0);
  std::uniform_real_distribution<double> gd(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rp = oracle::random_plant(rng, 5, true);
    const HarmonicContext ctx(NormalizedPlant(rp.t, rp.z));
    const double y = yd(rng);
    const double scale = std::max(1.0, std::abs(oracle::rational_jy(rp.t, rp.z, y)) * (1.0 + std::abs(y)));
    CHECK(std::abs(eval_g1(ctx, y) - oracle::g1(rp.t, rp.z, y)) < 1e-11 * scale);
    CHECK(std::abs(eval_f1(ctx, y) - oracle::f1(rp.t, rp.z, y)) < 1e-11 * scale);
    CHECK(eval_g1(ctx, -y) == doctest::Approx(eval_g1(ctx, y)).epsilon(1e-10));

    const ControllerPoint p{gd(rng), gd(rng), gd(rng)};
    const FG fg = eval_fg(ctx, p, y);
    const oracle::cplx h =
        oracle::characteristic(rp.t, rp.z, p.h, p.h_i, p.h_d, oracle::cplx{0.0, y});
    const double hs = std::max({1.0, std::abs(h), scale, y * y * std::abs(p.h_d)});
    CHECK(std::abs(fg.f - h.real()) < 1e-10 * hs);
    CHECK(std::abs(fg.g - h.imag()) < 1e-10 * hs);
  }
  const FG at0 = eval_fg(example(), {0.3, 1.7, -0.4}, 0.0);
  CHECK(at0.f == doctest::Approx(1.7));
  CHECK(at0.g == 0.0);

  // On the boundary line of the first root, F vanishes.
  const HarmonicContext ctx = example();
  const double y0 = g_roots(ctx, 0.5, 3.0).front();
  const double hd = 0.3;
  const double hi = eval_f1(ctx, y0) + hd * y0 * y0;
  CHECK(std::abs(eval_fg(ctx, {0.5, hi, hd}, y0).f) < 1e-12);
}

TEST_CASE("P, Q derivatives match finite differences") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> yd(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true, 0.2, 2.0);
    const HarmonicContext ctx(NormalizedPlant(rp.t, rp.z));
    const double y = yd(rng);
    auto p = [&](double x) { return oracle::rational_jy(rp.t, rp.z, x).real(); };
    auto q = [&](double x) { return oracle::rational_jy(rp.t, rp.z, x).imag(); };
    const PqDerivatives d = ctx.pq(y);
    const double s = std::max(1.0, std::abs(oracle::rational_jy(rp.t, rp.z, y)));
    CHECK(std::abs(d.dp - oracle::fd1(p, y)) < 1e-6 * s);
    CHECK(std::abs(d.dq - oracle::fd1(q, y)) < 1e-6 * s);
    CHECK(std::abs(d.d2p - oracle::fd1([&](double x) { return ctx.pq(x).dp; }, y)) < 1e-5 * s);
    CHECK(std::abs(d.d2q - oracle::fd1([&](double x) { return ctx.pq(x).dq; }, y)) < 1e-5 * s);
  }
}

TEST_CASE("G1 derivatives: closed form, values at zero and Phi2") {
  const HarmonicContext ctx = example();
  const G1Derivatives at0 = eval_g1_derivatives(ctx, 0.0);
  CHECK(at0.first == doctest::Approx(0.0));
  CHECK(at0.second == doctest::Approx(4.76));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> yd(-6.0, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true, 0.2, 2.0);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    const double y = yd(rng);
    auto g = [&](double x) { return oracle::g1(rp.t, rp.z, x); };
    const G1Derivatives d = eval_g1_derivatives(c, y);
    const double s = std::max(1.0, std::abs(oracle::rational_jy(rp.t, rp.z, y)));
    CHECK(std::abs(d.first - oracle::fd1(g, y)) < 1e-5 * s);
    CHECK(std::abs(d.second - oracle::fd2(g, y)) < 1e-4 * s);
    const G1Derivatives z0 = eval_g1_derivatives(c, 0.0);
    CHECK(std::abs(z0.first) < 1e-12);
    CHECK(z0.second == doctest::Approx(eval_phi(c.plant()).phi2).epsilon(1e-10));
  }
}

TEST_CASE("Phi1, Phi2") {
  const Phi phi = eval_phi(NormalizedPlant(kExampleT));
  CHECK(phi.phi1 == doctest::Approx(2.4));
  CHECK(phi.phi2 == doctest::Approx(4.76));
  const Phi tiny = eval_phi(NormalizedPlant({1e-12, 2e-12}));
  CHECK(tiny.phi1 == doctest::Approx(1.0));
  CHECK(tiny.phi2 == doctest::Approx(1.0));
  // Phi2 from its closed form in U, V.
  const NormalizedPlant np({0.9, -0.4, 1.7}, {0.3, 0.5});
  const double u1 = np.u(1), u2 = np.u(2), v1 = np.v(1), v2 = np.v(2);
  CHECK(eval_phi(np).phi2 ==
        doctest::Approx(1 + 2 * u1 + 2 * u2 - 2 * u1 * v1 + 2 * v1 * v1 - 2 * v1 - 2 * v2));
}

TEST_CASE("E branches") {
  const HarmonicContext ctx = example();
  CHECK(eval_e(ctx, 0.0, Branch::Minus) == 0.0);
  CHECK(eval_e(ctx, 0.0, Branch::Plus) == 0.0);

  // A(+inf) < 0 here, so E_- tends to +1 and E_+ to -1.
  CHECK(eval_e(ctx, 1e5, Branch::Minus) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(eval_e(ctx, 1e5, Branch::Plus) == doctest::Approx(-1.0).epsilon(1e-3));

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> yd(0.05, 12.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    const double y = yd(rng);
    const oracle::cplx r = oracle::rational_jy(rp.t, rp.z, y);
    if (std::norm(r) < 1.0 + 1e-9 || std::abs(1.0 + r.real()) < 1e-6) continue;
    const double em = eval_e(c, y, Branch::Minus);
    const double ep = eval_e(c, y, Branch::Plus);
    // Each branch solves -P cos + Q sin = -1 with cos, sin written in tan(y/2) = e.
    for (double e : {em, ep}) {
      const double lhs = -r.real() * (1 - e * e) / (1 + e * e) + r.imag() * 2 * e / (1 + e * e);
      CHECK(lhs == doctest::Approx(-1.0).epsilon(1e-8));
    }
    // Odd: the branches swap under y -> -y.
    CHECK(eval_e(c, -y, Branch::Plus) == doctest::Approx(-em).epsilon(1e-10));
    CHECK(eval_e(c, -y, Branch::Minus) == doctest::Approx(-ep).epsilon(1e-10));
  }

  const HarmonicContext lossy(NormalizedPlant({0.5}, {2.0}));
  try {
    (void)eval_e(lossy, 1.0, Branch::Minus);
    FAIL("expected NoRealBranch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRealBranch);
  }
  try {
    (void)eval_e(lossy, 0.0, Branch::Minus);
    FAIL("expected ExistenceFail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExistenceFail);
  }
}

TEST_CASE("E slopes at zero") {
  const ESlopes s = eval_e_slope_at_zero(NormalizedPlant(kExampleT));
  CHECK(std::min(s.minus, s.plus) == doctest::Approx(-1.2));
  CHECK(std::max(s.minus, s.plus) == doctest::Approx(-0.2));
  CHECK(s.above_half == 0);

  const ESlopes flat = eval_e_slope_at_zero(NormalizedPlant({1e-9}));
  CHECK(std::abs(flat.minus) < 1e-8);
  CHECK(std::abs(flat.plus) < 1e-8);

  CHECK_THROWS_AS((void)eval_e_slope_at_zero(NormalizedPlant({0.5}, {2.0})), Error);

  std::mt19937_64 rng(41);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 100; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true);
    const NormalizedPlant np(rp.t, rp.z);
    ESlopes sl;
    try {
      sl = eval_e_slope_at_zero(np);
    } catch (const Error&) {
      continue;
    }
    const Phi phi = eval_phi(np);
    if (std::abs(phi.phi1) < 1e-3 || std::abs(phi.phi2) < 1e-3) continue;
    if (std::abs(sl.minus - 0.5) < 1e-3 || std::abs(sl.plus - 0.5) < 1e-3) continue;
    const int table = phi.phi2 < 0.0 ? 1 : (phi.phi1 > 0.0 ? 0 : 2);
    CHECK(sl.above_half == table);

    // Finite-difference slopes of the branches at y = 1e-4.
    const HarmonicContext c(np);
    const double y = 1e-4;
    double fm = 0.0, fp = 0.0;
    try {
      fm = eval_e(c, y, Branch::Minus) / y;
      fp = eval_e(c, y, Branch::Plus) / y;
    } catch (const Error&) {
      continue;
    }
    std::vector<double> fd{fm, fp}, an{sl.minus, sl.plus};
    std::sort(fd.begin(), fd.end());
    std::sort(an.begin(), an.end());
    CHECK(fd[0] == doctest::Approx(an[0]).epsilon(1e-3));
    CHECK(fd[1] == doctest::Approx(an[1]).epsilon(1e-3));
    ++compared;
  }
  CHECK(compared >= 50);
}

TEST_CASE("equal-derivative points satisfy the tangency equation") {
  std::mt19937_64 rng(43);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    std::vector<TangencyPoint> pts;
    try {
      pts = eval_ed(c);
    } catch (const Error&) {
      continue;
    }
    for (const TangencyPoint& p : pts) {
      const double tan_half = std::tan(0.5 * p.y);
      const double slope = eval_e_derivative(c, p.y, p.branch);
      const double fd = oracle::fd1([&](double x) { return eval_e(c, x, p.branch); }, p.y, 1e-7);
      CHECK(std::abs(0.5 * (1 + tan_half * tan_half) - slope) < 1e-8 * std::max(1.0, std::abs(slope)));
      CHECK(slope == doctest::Approx(fd).epsilon(1e-5));
      CHECK(p.e_d == doctest::Approx(tan_half - eval_e(c, p.y, p.branch)));
      ++found;
    }
  }
  CHECK(found > 0);
  CHECK(eval_ed(example()).empty());
}

TEST_CASE("G1 extrema envelope") {
  const HmEnvelope env = eval_hm_envelope(example());
  REQUIRE(!env.extrema.empty());
  CHECK(std::abs(env.extrema.front().y - 1.778) < 0.002);
  CHECK(std::abs(env.extrema.front().h_m - 2.330) < 0.002);

  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    const HmEnvelope e = eval_hm_envelope(c);
    for (const Extremum& x : e.extrema) {
      CHECK(x.h_m == doctest::Approx(std::abs(oracle::g1(rp.t, rp.z, x.y))).epsilon(1e-10));
      CHECK(x.g1 == doctest::Approx(oracle::g1(rp.t, rp.z, x.y)).epsilon(1e-10));
      const double s = std::max(1.0, std::abs(oracle::rational_jy(rp.t, rp.z, x.y)));
      CHECK(std::abs(eval_g1_derivatives(c, x.y).first) < 1e-8 * s);
      CHECK(eval_hm(c, x.y) == doctest::Approx(x.h_m).epsilon(1e-8));
    }
  }
}

TEST_CASE("identities at the roots of G") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> hd(-0.9, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto rp = oracle::random_plant(rng, 4, true);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    const double h = hd(rng);
    std::vector<double> roots;
    try {
      roots = g_roots(c, h, 30.0);
    } catch (const Error&) {
      continue;
    }
    for (double y0 : roots) {
      // G1 carries terms of size |R|; the residual is bounded relative to that.
      const double mag = std::max(1.0, std::abs(oracle::rational_jy(rp.t, rp.z, y0)));
      CHECK(std::abs(h - eval_g1(c, y0)) < 1e-10 * mag);
      // Elimination of sin and cos: h_e^2 + (h y)^2 = y^2 (P^2 + Q^2) with h_e = F1.
      const double he = eval_f1(c, y0);
      const double rhs = y0 * y0 * std::norm(oracle::rational_jy(rp.t, rp.z, y0));
      CHECK(he * he + h * h * y0 * y0 == doctest::Approx(rhs).epsilon(1e-8));
      // G'(y0) = -y0 G1'(y0).
      auto g = [&](double x) { return x * (h - oracle::g1(rp.t, rp.z, x)); };
      const double gp = oracle::fd1(g, y0, 1e-6);
      const double expected = -y0 * eval_g1_derivatives(c, y0).first;
      CHECK(std::abs(gp - expected) < 1e-5 * std::max(1.0, std::abs(expected)));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("G1 = -1 crossings coincide with tan(y/2) = E(y)") {
  std::mt19937_64 rng(59);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto rp = oracle::random_plant(rng, 3, true);
    const HarmonicContext c(NormalizedPlant(rp.t, rp.z));
    std::vector<double> crossings;
    try {
      crossings = g_roots(c, -1.0, 15.0);
    } catch (const Error&) {
      continue;
    }
    for (double y : crossings) {
      if (std::abs(std::cos(0.5 * y)) < 1e-2) continue;  // near a tan pole
      const double t = std::tan(0.5 * y);
      double best = 1e300;
      for (Branch b : {Branch::Minus, Branch::Plus}) {
        try {
          best = std::min(best, std::abs(eval_e(c, y, b) - t));
        } catch (const Error&) {
        }
      }
      // Residual in E converted to y through the slope of tan(y/2).
      CHECK(best / (0.5 * (1 + t * t)) < 1e-6);
      ++compared;
    }
  }
  CHECK(compared > 50);
}
