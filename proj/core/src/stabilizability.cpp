#include "delaystab/stabilizability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "delaystab/error.hpp"
#include "delaystab/roots.hpp"

namespace delaystab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kFirstWindow = 3;
constexpr int kWindowCap = 20;

char sign_char(double v) { return v > 0.0 ? '+' : (v < 0.0 ? '-' : '0'); }

void require_nondegenerate(double value, const char* name) {
  if (std::abs(value) < kClassificationTolerance) {
    throw Error(ErrorCode::Degenerate, std::string(name) + " vanishes");
  }
}

std::string feature_vector(const NormalizedPlant& plant, const Phi& phi,
                           const std::optional<AchievedCounts>& achieved) {
  std::ostringstream os;
  os << "U:" << sign_char(plant.u(plant.n())) << " phi1:" << sign_char(phi.phi1)
     << " phi2:" << sign_char(phi.phi2);
  if (achieved) {
    os << " poles:" << achieved->poles.count << " Ed:";
    if (achieved->tangencies.empty()) {
      os << "none";
    } else {
      for (const TangencyPoint& t : achieved->tangencies) os << sign_char(t.e_d);
    }
  }
  const Polynomial f0 = pole_polynomial(plant);
  if (f0.degree() > 0) {
    try {
      const SignTable table = sign_table(build_chain(f0));
      os << " psi0:";
      for (int s : table.at_zero) os << sign_char(s);
      os << " psiinf:";
      for (int s : table.at_infinity) os << sign_char(s);
    } catch (const Error&) {
      os << " psi:multiple";
    }
  }
  return os.str();
}

// Crossings of G1 with -1 on (0, y], extended on demand.
class CrossingScanner {
 public:
  explicit CrossingScanner(const HarmonicContext& ctx) : ctx_(ctx) {}

  const std::vector<double>& up_to(double y) {
    if (y > scanned_to_) {
      auto level = [this](double v) { return eval_g1(ctx_, v) + 1.0; };
      const std::vector<double> more = scan_roots(level, scanned_to_, y);
      roots_.insert(roots_.end(), more.begin(), more.end());
      scanned_to_ = y;
      if (has_close_pair(roots_)) {
        throw Error(ErrorCode::Degenerate,
                    "an extremum of G1 touches -1 (merging crossings)");
      }
    }
    return roots_;
  }

  int count_below(double y) {
    const std::vector<double>& r = up_to(y);
    return static_cast<int>(std::upper_bound(r.begin(), r.end(), y) - r.begin());
  }

 private:
  const HarmonicContext& ctx_;
  std::vector<double> roots_;
  double scanned_to_ = 0.0;
};

}  // namespace

std::string to_string(PlantCase c) {
  return c == PlantCase::Case1 ? "Case1" : "Case2";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stabilizable: return "Stabilizable";
    case Verdict::NotStabilizable: return "NotStabilizable";
    case Verdict::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

std::string to_string(ZoneLabel z) {
  switch (z) {
    case ZoneLabel::Z1: return "Z1";
    case ZoneLabel::Z2: return "Z2";
    case ZoneLabel::Z3: return "Z3";
  }
  return "";
}

PrincipalTerm check_principal_term(const NormalizedPlant& plant,
                                   std::optional<double> h_d) {
  const int n = plant.n();
  const int m = plant.m();
  if (m >= n) {
    throw Error(ErrorCode::OrderViolation,
                "no principal term: plant has " + std::to_string(m) +
                    " zeros but only " + std::to_string(n) + " poles");
  }
  if (m < n - 1) return {true, "m < n - 1", std::nullopt};

  const double bound = std::abs(plant.u(n) / plant.v(m));
  PrincipalTerm out{true, "m = n - 1: requires |h_d| < " + std::to_string(bound), bound};
  if (h_d && !(std::abs(*h_d) < bound)) {
    out.ok = false;
    out.reason = "m = n - 1 and |h_d V(m,m)| >= |U(n,n)|";
  }
  return out;
}

PlantCase plant_case(const NormalizedPlant& plant) {
  return plant.u(plant.n()) > 0.0 ? PlantCase::Case1 : PlantCase::Case2;
}

RequiredCounts required_counts(const NormalizedPlant& plant) {
  const int n = plant.n();
  const int m = plant.m();
  RequiredCounts out;
  out.epsilon = ((n - m) % 2 == 0) ? 0.0 : 0.5 * kPi;
  out.m_p = plant.nonminimum_phase_zeros();
  out.nr_offset = n + 1 - m + 2 * out.m_p;
  const double orientation = plant.u(n) * eval_phi(plant).phi2;
  out.ne_offset = out.nr_offset - (orientation > 0.0 ? 3 : 1);
  return out;
}

AchievedCounts achieved_counts(const HarmonicContext& ctx) {
  const NormalizedPlant& plant = ctx.plant();
  const Phi phi = eval_phi(plant);
  require_nondegenerate(plant.u(plant.n()), "U(n,n)");
  require_nondegenerate(phi.phi1, "Phi1");
  require_nondegenerate(phi.phi2, "Phi2");

  AchievedCounts out;
  if (phi.phi2 < 0.0) {
    out.ne1_table = 2;
  } else {
    out.ne1_table = phi.phi1 > 0.0 ? 0 : 4;
  }

  const double eps = required_counts(plant).epsilon;
  CrossingScanner scanner(ctx);
  out.ne1 = 2 * scanner.count_below(kPi);

  bool settled = false;
  for (int r0 = kFirstWindow; r0 + 2 <= kWindowCap && !settled; r0 += 3) {
    std::vector<WindowCount> windows;
    for (int r = r0; r < r0 + 3; ++r) {
      const double top = 2.0 * r * kPi;
      windows.push_back({r, scanner.count_below(top + eps) + scanner.count_below(top - eps)});
    }
    const int offset = windows[0].count - 4 * windows[0].r;
    settled = std::all_of(windows.begin(), windows.end(), [&](const WindowCount& w) {
      return w.count - 4 * w.r == offset;
    });
    if (settled) {
      out.windows = std::move(windows);
      out.ne_offset = offset;
    }
  }
  if (!settled) {
    throw Error(ErrorCode::Degenerate,
                "crossing count per period did not settle within 20 periods");
  }

  out.poles = pole_count_of_e(plant);
  out.tangencies = eval_ed(ctx);

  if (plant.m() == 0) {
    const int n = plant.n();
    int ne2_base = -2;
    if (n % 2 == 1) {
      const double ab_sign = -std::pow(-1.0, n) * plant.u(n - 1) * plant.u(n);
      ne2_base = ab_sign > 0.0 ? -1 : -3;
    }
    out.advisory_ne_offset = out.ne1_table + ne2_base + 2 * out.poles.count;
  }
  return out;
}

ZoneClassification classify_zone(const NormalizedPlant& plant,
                                 const StabilizabilityReport& report) {
  ZoneClassification out;
  out.features = report.features.empty()
                     ? feature_vector(plant, report.phi, report.achieved)
                     : report.features;
  if (plant.n() != 2 || plant.m() != 0 || report.verdict != Verdict::Stabilizable) {
    return out;
  }
  const double u = plant.u(2);
  const Phi& phi = report.phi;
  if (u > 0.0 && phi.phi1 > 0.0 && phi.phi2 > 0.0) {
    out.label = ZoneLabel::Z1;
  } else if (u > 0.0 && phi.phi1 < 0.0 && phi.phi2 > 0.0) {
    out.label = ZoneLabel::Z2;
  } else if (u < 0.0 && phi.phi2 < 0.0) {
    out.label = ZoneLabel::Z3;
  }
  return out;
}

StabilizabilityReport analyze(const HarmonicContext& ctx) {
  const NormalizedPlant& plant = ctx.plant();
  StabilizabilityReport report;
  report.phi = eval_phi(plant);
  report.plant_case = plant_case(plant);
  report.required = required_counts(plant);
  report.m_p = report.required.m_p;
  report.epsilon = report.required.epsilon;

  try {
    report.principal_term = check_principal_term(plant);
  } catch (const Error& e) {
    report.principal_term = {false, e.what(), std::nullopt};
    report.verdict = Verdict::NotStabilizable;
    report.diagnostics.emplace_back(std::string("OrderViolation: ") + e.what());
    report.features = feature_vector(plant, report.phi, std::nullopt);
    return report;
  }

  try {
    report.achieved = achieved_counts(ctx);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Degenerate) throw;
    report.verdict = Verdict::Degenerate;
    report.diagnostics.emplace_back(std::string("Degenerate: ") + e.what());
    report.features = feature_vector(plant, report.phi, std::nullopt);
    return report;
  }

  const AchievedCounts& a = *report.achieved;
  report.window_r = a.windows.front().r;
  report.ne_required = report.required.ne(report.window_r);
  report.ne_achieved = a.windows.front().count;
  report.verdict = (a.ne_offset == report.required.ne_offset)
                       ? Verdict::Stabilizable
                       : Verdict::NotStabilizable;

  // The sign table assumes m = 0 and an E without poles.
  if (plant.m() == 0 && a.poles.count == 0 && a.ne1 != a.ne1_table) {
    report.diagnostics.push_back("Ne1 sign table predicts " +
                                 std::to_string(a.ne1_table) + ", direct count is " +
                                 std::to_string(a.ne1));
  }
  if (a.advisory_ne_offset && *a.advisory_ne_offset != a.ne_offset) {
    report.diagnostics.push_back(
        "pole-based estimate gives N_e = 4r" +
        std::string(*a.advisory_ne_offset >= 0 ? "+" : "") +
        std::to_string(*a.advisory_ne_offset) + ", direct count gives 4r" +
        std::string(a.ne_offset >= 0 ? "+" : "") + std::to_string(a.ne_offset));
  }
  if (!a.poles.certified) {
    report.diagnostics.emplace_back("pole count NonCertified (multiple root suspected)");
  }

  report.features = feature_vector(plant, report.phi, report.achieved);
  report.zone = classify_zone(plant, report).label;
  return report;
}

void set_parameter(PlantSpec& plant, const std::string& name, double value) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "empty parameter name");
  const char head = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  if (name.size() == 1 && head == 'L') {
    plant.delay = value;
    return;
  }
  if (name.size() == 1 && head == 'K') {
    plant.gain = value;
    return;
  }
  if ((head == 'T' || head == 'Z') && name.size() > 1) {
    std::size_t index = 0;
    try {
      index = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad parameter name '" + name + "'");
    }
    auto& list = head == 'T' ? plant.time_constants : plant.zero_constants;
    if (index == 0 || index > list.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "parameter '" + name + "' does not exist in the plant");
    }
    list[index - 1] = value;
    return;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + name + "'");
}

namespace {

struct CellFields {
  std::map<std::string, double> values;
};

CellFields classifier_fields(const NormalizedPlant& plant, const StabilizabilityReport& r) {
  CellFields f;
  f.values["phi1"] = r.phi.phi1;
  f.values["phi2"] = r.phi.phi2;
  f.values["U"] = plant.u(plant.n());
  if (r.achieved && !r.achieved->tangencies.empty()) {
    f.values["E_d"] = r.achieved->tangencies.front().e_d;
  }
  const Polynomial f0 = pole_polynomial(plant);
  if (f0.degree() > 0) {
    try {
      const SturmChain chain = build_chain(f0);
      const int d = chain.degree();
      for (int i = 0; i < static_cast<int>(chain.members.size()); ++i) {
        const std::string tag = "psi_" + std::to_string(i);
        f.values[tag + "_0"] = chain.psi(i, 0);
        f.values[tag + "_lead"] = chain.psi(i, d - (i + 1) / 2);
      }
    } catch (const Error&) {
    }
  }
  return f;
}

std::vector<BoundarySegment> march(const ParameterAxis& a1, const ParameterAxis& a2,
                                   const std::vector<CellFields>& fields,
                                   const std::string& key) {
  std::vector<BoundarySegment> out;
  auto value = [&](int i, int j) {
    const auto& m = fields[static_cast<std::size_t>(i * a2.steps + j)].values;
    const auto it = m.find(key);
    return it == m.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  for (int i = 0; i + 1 < a1.steps; ++i) {
    for (int j = 0; j + 1 < a2.steps; ++j) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      std::vector<std::pair<double, double>> hits;
      for (int e = 0; e < 4; ++e) {
        const int k = (e + 1) % 4;
        const double va = value(ci[e], cj[e]);
        const double vb = value(ci[k], cj[k]);
        // Zero counts as non-negative so lines through cell centres survive.
        if (!std::isfinite(va) || !std::isfinite(vb) || (va >= 0.0) == (vb >= 0.0)) continue;
        const double s = va / (va - vb);
        const double xa = a1.value(ci[e]);
        const double xb = a1.value(ci[k]);
        const double ya = a2.value(cj[e]);
        const double yb = a2.value(cj[k]);
        hits.emplace_back(xa + s * (xb - xa), ya + s * (yb - ya));
      }
      for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
        out.push_back({hits[h].first, hits[h].second, hits[h + 1].first,
                       hits[h + 1].second});
      }
    }
  }
  return out;
}

}  // namespace

ZoneScan scan_parameter_plane(const PlantSpec& base, const ParameterAxis& axis1,
                              const ParameterAxis& axis2, double scan_max) {
  if (axis1.steps < 1 || axis2.steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least one step per axis");
  }
  PlantSpec probe = base;
  set_parameter(probe, axis1.name, axis1.value(0));
  set_parameter(probe, axis2.name, axis2.value(0));

  ZoneScan scan{axis1, axis2, {}, {}};
  const std::size_t total = static_cast<std::size_t>(axis1.steps) *
                            static_cast<std::size_t>(axis2.steps);
  scan.cells.resize(total);
  std::vector<CellFields> fields(total);

  auto evaluate = [&](std::size_t index) {
    const int i = static_cast<int>(index) / axis2.steps;
    const int j = static_cast<int>(index) % axis2.steps;
    ZoneCell& cell = scan.cells[index];
    cell.param1 = axis1.value(i);
    cell.param2 = axis2.value(j);
    PlantSpec plant = base;
    set_parameter(plant, axis1.name, cell.param1);
    set_parameter(plant, axis2.name, cell.param2);
    try {
      const HarmonicContext ctx(normalize(plant), scan_max);
      const StabilizabilityReport report = analyze(ctx);
      cell.verdict = report.verdict;
      cell.zone = report.zone;
      cell.features = report.features;
      cell.phi1 = report.phi.phi1;
      cell.phi2 = report.phi.phi2;
      cell.poles = report.achieved ? report.achieved->poles.count
                                   : pole_count_of_e(ctx.plant()).count;
      cell.ne_required = report.ne_required;
      cell.ne_achieved = report.ne_achieved;
      fields[index] = classifier_fields(ctx.plant(), report);
    } catch (const Error& e) {
      cell.verdict = Verdict::Degenerate;
      cell.features = std::string("invalid: ") + e.what();
    }
  };

  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t index = w; index < total; index += workers) evaluate(index);
    });
  }
  for (auto& t : pool) t.join();

  std::vector<std::string> keys;
  for (const CellFields& f : fields) {
    for (const auto& [k, v] : f.values) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  for (const std::string& k : keys) {
    std::vector<BoundarySegment> segs = march(axis1, axis2, fields, k);
    if (!segs.empty()) scan.boundaries[k] = std::move(segs);
  }
  return scan;
}

}  // namespace delaystab
