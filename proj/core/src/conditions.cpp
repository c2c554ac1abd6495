#include "ductflow/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ductflow {

namespace {

constexpr double kSignSlack = 1e-12;
constexpr double kLogBranchTol = 1e-12;  // |b+1| below this routes to b = -1

bool log_branch(double b) { return std::abs(b + 1.0) <= kLogBranchTol; }

const char* status_str(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "n/a";
  }
}

CheckResult from_margin(std::string id, double margin, double witness,
                        std::string note = {}) {
  CheckResult r;
  r.id = std::move(id);
  r.margin = margin;
  r.witness = witness;
  r.note = std::move(note);
  r.status = (std::isfinite(margin) || margin == std::numeric_limits<double>::infinity())
                 ? (margin >= -kSignSlack ? CheckStatus::Pass : CheckStatus::Fail)
                 : CheckStatus::Fail;
  return r;
}

// Tracks the worst (smallest) margin and where it happened.
struct WorstMargin {
  double margin = std::numeric_limits<double>::infinity();
  double witness = 0.0;
  void update(double m, double w) {
    if (std::isnan(m)) m = -std::numeric_limits<double>::infinity();
    if (m < margin) {
      margin = m;
      witness = w;
    }
  }
};

}  // namespace

bool ValidationReport::overall() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

const CheckResult* ValidationReport::find(std::string_view id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "[%s] %-16s margin=%- .6e at %- .6g",
                  c.status == CheckStatus::Pass   ? "PASS"
                  : c.status == CheckStatus::Fail ? "FAIL"
                                                  : " N/A",
                  c.id.c_str(), c.margin, c.witness);
    os << buf;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  os << "overall: " << (overall() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string ValidationReport::key_values() const {
  std::ostringstream os;
  os << "overall = " << (overall() ? "pass" : "fail") << "\n";
  for (const auto& c : checks) {
    char buf[64];
    os << "check." << c.id << " = " << status_str(c.status) << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", c.margin);
    os << "check." << c.id << ".margin = " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", c.witness);
    os << "check." << c.id << ".witness = " << buf << "\n";
  }
  return os.str();
}

CheckResult check_gamma_range(double gamma) {
  const double margin = std::min(gamma - 1.0, 3.0 - gamma);
  CheckResult r = from_margin("gamma-range", margin, gamma);
  r.status = margin > 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckResult check_a1(const DuctProfile& profile, std::span<const double> grid,
                     std::optional<double> c1_norm_limit) {
  if (grid.empty()) throw std::invalid_argument("empty sample grid");
  WorstMargin worst;
  double norm = 0.0;
  for (double x : grid) {
    const ProfileSample s = profile.eval(x);
    if (!std::isfinite(s.k) || !std::isfinite(s.dk)) {
      worst.update(-std::numeric_limits<double>::infinity(), x);
      continue;
    }
    worst.update(s.k, x);  // k >= 0
    norm = std::max({norm, std::abs(s.k), std::abs(s.dk)});
  }
  char note[96];
  std::snprintf(note, sizeof(note), "C1 norm of k: %.6g%s", norm,
                c1_norm_limit ? "" : " (no limit configured)");
  CheckResult r = from_margin("A1", worst.margin, worst.witness, note);
  if (c1_norm_limit && norm > *c1_norm_limit) {
    r.status = CheckStatus::Fail;
    r.margin = *c1_norm_limit - norm;
  }
  return r;
}

namespace {

CheckResult check_data_ordering(std::string id,
                                const std::function<double(double)>& S,
                                const std::function<double(double)>& dS,
                                const std::function<double(double)>& R,
                                const std::function<double(double)>& dR,
                                std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty sample grid");
  WorstMargin worst;
  double norm = 0.0;
  for (double u : grid) {
    const double s = S(u), r = R(u), ds = dS(u), dr = dR(u);
    if (!std::isfinite(s) || !std::isfinite(r) || !std::isfinite(ds) ||
        !std::isfinite(dr)) {
      worst.update(-std::numeric_limits<double>::infinity(), u);
      continue;
    }
    worst.update(std::min(s, r - s), u);  // 0 < S and S < R
    norm = std::max({norm, std::abs(s), std::abs(r), std::abs(ds),
                     std::abs(dr)});
  }
  char note[64];
  std::snprintf(note, sizeof(note), "C1 norm of data: %.6g", norm);
  CheckResult r = from_margin(std::move(id), worst.margin, worst.witness, note);
  if (r.status == CheckStatus::Pass && r.margin <= 0.0) {
    r.status = CheckStatus::Fail;  // ordering is strict
  }
  return r;
}

}  // namespace

CheckResult check_a3(const InitialData& d, std::span<const double> grid) {
  return check_data_ordering("A3", d.S, d.dS, d.R, d.dR, grid);
}

CheckResult check_a4(const BoundaryData& d, std::span<const double> grid) {
  return check_data_ordering("A4", d.S, d.dS, d.R, d.dR, grid);
}

CheckResult check_compatibility(const InitialData& initial,
                                const BoundaryData& boundary,
                                const DuctProfile& profile,
                                const GasParameters& gas, double tol) {
  const double xB = profile.x_begin();
  const RiemannState w0{initial.S(xB), initial.R(xB)};
  const Speeds lam = eigenvalues(w0, gas);
  const double g = source_g(xB, w0, profile, gas);

  const double rS = initial.S(xB) - boundary.S(0.0);
  const double rR = initial.R(xB) - boundary.R(0.0);
  const double eS = boundary.dS(0.0) + lam.lambda1 * initial.dS(xB) - g;
  const double eR = boundary.dR(0.0) + lam.lambda2 * initial.dR(xB) + g;

  const double residual = std::max({std::abs(rS), std::abs(rR), std::abs(eS),
                                    std::abs(eR)});
  char note[96];
  std::snprintf(note, sizeof(note), "corner residual %.3e (tol %.1e)",
                residual, tol);
  return from_margin("A2-compat", tol - residual, xB, note);
}

SlopeChecks check_initial_slopes(const InitialData& initial,
                                 const DuctProfile& profile,
                                 const GasParameters& gas,
                                 std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty sample grid");
  const double b = gas.b();
  WorstMargin wS, wR, wK2;
  for (double x : grid) {
    const double S0 = initial.S(x);
    if (!(S0 > 0.0)) {
      throw std::domain_error("check_initial_slopes: S0 <= 0 at x = " +
                              std::to_string(x));
    }
    const double R0 = initial.R(x);
    const double dS0 = initial.dS(x), dR0 = initial.dR(x);
    const double xi = R0 / S0 - 1.0;
    const double k = profile.k(x);
    double rhsS, rhsR;
    if (log_branch(b)) {
      const double eps = std::log(S0 * xi);  // only defined off vacuum
      rhsS = 0.5 * k * S0 * (1.0 - eps * xi);
      rhsR = 0.5 * k * S0 * (1.0 + xi + eps * xi);
    } else {
      rhsS = 0.5 * k * S0 * (1.0 / (-b) - xi / (b + 1.0));
      rhsR = 0.5 * k * S0 * (1.0 / (-b) - xi / (b * (b + 1.0)));
    }
    wS.update(dS0 - rhsS, x);
    wR.update(dR0 - rhsR, x);
    wK2.update(std::min(dS0 - k * S0 / (-b), dR0 - k * R0 / (-b)), x);
  }
  SlopeChecks out;
  out.exact_S = from_margin("S0-ineq", wS.margin, wS.witness);
  out.exact_R = from_margin("R0-ineq", wR.margin, wR.witness);
  out.simplified = from_margin("k2", wK2.margin, wK2.witness);
  return out;
}

SlopeChecks check_boundary_slopes(const BoundaryData& boundary,
                                  const DuctProfile& profile,
                                  const GasParameters& gas,
                                  std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty sample grid");
  const double b = gas.b();
  const double kB = profile.k(profile.x_begin());
  WorstMargin wS, wR, wK3;
  for (double t : grid) {
    const double SB = boundary.S(t);
    if (!(SB > 0.0)) {
      throw std::domain_error("check_boundary_slopes: SB <= 0 at t = " +
                              std::to_string(t));
    }
    const double RB = boundary.R(t);
    const double dSB = boundary.dS(t), dRB = boundary.dR(t);
    const double xi = RB / SB - 1.0;
    const double half_kS2 = 0.5 * kB * SB * SB;
    double rhsS, rhsR;
    if (log_branch(b)) {
      const double eps = std::log(SB * xi);
      rhsS = half_kS2 * (-1.0 + eps * xi + (2.0 * eps + 1.0) / 6.0 * xi * xi);
      rhsR = half_kS2 *
             (-1.0 - (eps + 2.0) * xi - (4.0 * eps + 5.0) / 6.0 * xi * xi);
    } else {
      rhsS = half_kS2 * (1.0 / b + xi / (b + 1.0) +
                         (1.0 - b) * xi * xi /
                             (2.0 * (b + 1.0) * (1.0 - 2.0 * b)));
      rhsR = half_kS2 * (1.0 / b + (b + 2.0) * xi / (b * (b + 1.0)) -
                         (b * b + 3.0 * b - 2.0) * xi * xi /
                             (2.0 * b * (b + 1.0) * (1.0 - 2.0 * b)));
    }
    wS.update(rhsS - dSB, t);
    wR.update(rhsR - dRB, t);
    wK3.update(std::min(kB * SB * SB / b - dSB, kB * RB * RB / b - dRB), t);
  }
  SlopeChecks out;
  out.exact_S = from_margin("SB-ineq", wS.margin, wS.witness);
  out.exact_R = from_margin("RB-ineq", wR.margin, wR.witness);
  out.simplified = from_margin("k3", wK3.margin, wK3.witness);
  return out;
}

CheckResult check_a5_smallness(const InitialData& initial,
                               const BoundaryData& boundary,
                               const GasParameters& gas, double c_xi,
                               std::span<const double> xgrid,
                               std::span<const double> tgrid) {
  if (!(c_xi > 0.0)) throw std::invalid_argument("c_xi must be positive");
  const double cap = c_xi * std::sqrt(gas.nu());
  WorstMargin worst;
  double sup_xi0 = 0.0, sup_xiB = 0.0;
  for (double x : xgrid) {
    worst.update(initial.dS(x), x);
    worst.update(initial.dR(x), x);
    const double xi = initial.xi0(x);
    sup_xi0 = std::max(sup_xi0, xi);
    worst.update(cap - xi, x);
  }
  for (double t : tgrid) {
    worst.update(-boundary.dS(t), t);
    worst.update(-boundary.dR(t), t);
    const double xi = boundary.xiB(t);
    sup_xiB = std::max(sup_xiB, xi);
    worst.update(cap - xi, t);
  }
  char note[128];
  std::snprintf(note, sizeof(note),
                "sup xi0 %.3e, sup xiB %.3e vs %.3g sqrt(nu) = %.3e "
                "(xiB over sampled horizon only)",
                sup_xi0, sup_xiB, c_xi, cap);
  return from_margin("A5", worst.margin, worst.witness, note);
}

SphericalChecks check_spherical(double x_begin, double x_end, int dim,
                                const GasParameters& gas,
                                const InitialData& initial, double c_light,
                                std::span<const double> grid) {
  if (dim < 2) throw std::invalid_argument("spherical needs dim >= 2");
  if (!(x_begin > 0.0)) throw std::invalid_argument("x_begin must be positive");
  SphericalChecks out;
  const double m = static_cast<double>(dim - 1);
  const double gamma_cap = 1.0 + 2.0 / dim;
  {
    char note[96];
    std::snprintf(note, sizeof(note), "gamma < 1 + 2/N: %.6g vs %.6g (b=%.6g vs -(N-1)/2=%.6g)",
                  gas.gamma(), gamma_cap, gas.b(), -0.5 * m);
    out.gamma_bound = from_margin("spherical-gamma", gamma_cap - gas.gamma(),
                                  gas.gamma(), note);
    if (out.gamma_bound.margin <= 0.0) out.gamma_bound.status = CheckStatus::Fail;
  }
  if (std::isinf(x_end)) {
    out.growth.id = "initial2";
    out.growth.status = CheckStatus::NotApplicable;
    out.growth.note = "infinite domain";
    out.light_speed.id = "light-speed";
    out.light_speed.status = CheckStatus::NotApplicable;
    out.light_speed.note = "infinite domain";
    return out;
  }
  const double b = gas.b();
  const double s_anchor = std::pow(x_begin, m / b) * initial.S(x_begin);
  const double r_anchor = std::pow(x_begin, m / b) * initial.R(x_begin);
  WorstMargin worst;
  for (double x : grid) {
    const double growth = std::pow(x, m / (-b));
    worst.update(initial.S(x) - s_anchor * growth, x);
    worst.update(initial.R(x) - r_anchor * growth, x);
  }
  out.growth = from_margin("initial2", worst.margin, worst.witness);
  out.light_speed = from_margin("light-speed", c_light - initial.R(x_end),
                                x_end);
  if (out.light_speed.margin <= 0.0) out.light_speed.status = CheckStatus::Fail;
  return out;
}

double find_nu_threshold(const std::function<bool(double)>& passes_at,
                         double nu_lo, double nu_hi, int iterations) {
  if (!(0.0 < nu_lo && nu_lo < nu_hi)) {
    throw std::invalid_argument("need 0 < nu_lo < nu_hi");
  }
  if (passes_at(nu_hi)) return nu_hi;
  if (!passes_at(nu_lo)) return 0.0;
  double lo = nu_lo, hi = nu_hi;  // pass at lo, fail at hi
  for (int i = 0; i < iterations; ++i) {
    const double mid = std::sqrt(lo * hi);  // log-scale bisection
    (passes_at(mid) ? lo : hi) = mid;
  }
  return lo;
}

ValidationReport validate_all(const GasParameters& gas,
                              const DuctProfile& profile,
                              const InitialData& initial,
                              const BoundaryData& boundary,
                              const ValidationOptions& opt) {
  double x_end = opt.x_check_end;
  if (x_end <= profile.x_begin()) {
    if (profile.half_line()) {
      throw std::invalid_argument(
          "validate_all needs a finite x_check_end for half-line profiles");
    }
    x_end = profile.x_end();
  }
  const std::vector<double> xgrid = linspace(profile.x_begin(), x_end, opt.grid_n);
  const std::vector<double> tgrid = linspace(0.0, opt.t_horizon, opt.grid_n);

  ValidationReport rep;
  rep.checks.push_back(check_gamma_range(gas.gamma()));
  rep.checks.push_back(check_a1(profile, xgrid, opt.c1_norm_limit));
  rep.checks.push_back(
      check_compatibility(initial, boundary, profile, gas, opt.compat_tol));
  rep.checks.push_back(check_a3(initial, xgrid));
  rep.checks.push_back(check_a4(boundary, tgrid));
  rep.checks.push_back(
      check_a5_smallness(initial, boundary, gas, opt.c_xi, xgrid, tgrid));

  {
    CheckResult k1;
    if (opt.k1_delta) {
      K1Verdict v = check_k1(profile, *opt.k1_delta, xgrid, gas.b());
      char note[96];
      std::snprintf(note, sizeof(note), "delta = %.6g, k'=%.6g vs %.6g",
                    *opt.k1_delta, v.lhs, v.rhs);
      k1 = from_margin("k1", v.margin, v.witness_x, note);
      if (!v.pass) k1.status = CheckStatus::Fail;
    } else {
      auto delta = check_k1_search(profile, xgrid, gas.b());
      if (delta) {
        K1Verdict v = check_k1(profile, *delta, xgrid, gas.b());
        char note[64];
        std::snprintf(note, sizeof(note), "holds for delta = %.6g", *delta);
        k1 = from_margin("k1", v.margin, v.witness_x, note);
      } else {
        K1Verdict v = check_k1(profile, 1.0, xgrid, gas.b());
        k1 = from_margin("k1", v.margin, v.witness_x,
                         "no delta in (0,2) satisfies the shape condition");
        k1.status = CheckStatus::Fail;
      }
    }
    rep.checks.push_back(std::move(k1));
  }

  {
    IntegrabilityVerdict v = check_k_integrability(profile);
    CheckResult c;
    c.id = "k-integrability";
    if (!v.applicable) {
      c.status = CheckStatus::NotApplicable;
      c.note = "finite domain";
    } else {
      c.status = v.pass ? CheckStatus::Pass : CheckStatus::Fail;
      char note[96];
      std::snprintf(note, sizeof(note), "integral k = %.6g, lim k = %.3e",
                    v.integral, v.k_limit);
      c.note = note;
      c.margin = v.pass ? 0.0 : -1.0;
    }
    rep.checks.push_back(std::move(c));
  }

  auto guarded = [&rep](auto&& fn) {
    try {
      fn();
    } catch (const std::domain_error& e) {
      CheckResult c;
      c.id = "S0-ineq";
      c.status = CheckStatus::Fail;
      c.margin = -std::numeric_limits<double>::infinity();
      c.note = e.what();
      rep.checks.push_back(std::move(c));
    }
  };
  guarded([&] {
    SlopeChecks s = check_initial_slopes(initial, profile, gas, xgrid);
    rep.checks.push_back(std::move(s.exact_S));
    rep.checks.push_back(std::move(s.exact_R));
    rep.checks.push_back(std::move(s.simplified));
  });
  guarded([&] {
    SlopeChecks s = check_boundary_slopes(boundary, profile, gas, tgrid);
    rep.checks.push_back(std::move(s.exact_S));
    rep.checks.push_back(std::move(s.exact_R));
    rep.checks.push_back(std::move(s.simplified));
  });

  if (opt.spherical_dim) {
    SphericalChecks s =
        check_spherical(profile.x_begin(), x_end, *opt.spherical_dim, gas,
                        initial, opt.c_light, xgrid);
    rep.checks.push_back(std::move(s.gamma_bound));
    rep.checks.push_back(std::move(s.growth));
    rep.checks.push_back(std::move(s.light_speed));
  }
  return rep;
}

}  // namespace ductflow
