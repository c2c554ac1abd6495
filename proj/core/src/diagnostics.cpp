#include "ductflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ductflow {

std::vector<double> fd_derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n < 5) {
    d[0] = (f[1] - f[0]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    d[n - 1] = (f[n - 1] - f[n - 2]) / dx;
    return d;
  }
  const double s = 1.0 / (12.0 * dx);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
  }
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] +
              6.0 * f[n - 4] - f[n - 5]) * s;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] -
              16.0 * f[n - 4] + 3.0 * f[n - 5]) * s;
  return d;
}

DiagRow compute_norm_row(const FieldSnapshot& snap, const Grid& grid,
                         const GasParameters& gas) {
  DiagRow row;
  row.t = snap.t;
  const std::vector<double> drho = fd_derivative(snap.rho, grid.dx());
  const std::vector<double> dv = fd_derivative(snap.v, grid.dx());
  row.min_S = std::numeric_limits<double>::infinity();
  row.max_R = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snap.rho.size(); ++i) {
    row.sup_rho = std::max(row.sup_rho, std::abs(snap.rho[i]));
    row.sup_v = std::max(row.sup_v, std::abs(snap.v[i]));
    row.sup_rho_x = std::max(row.sup_rho_x, std::abs(drho[i]));
    row.sup_v_x = std::max(row.sup_v_x, std::abs(dv[i]));
    const RiemannState w = riemann_from_primitive({snap.rho[i], snap.v[i]}, gas);
    row.min_S = std::min(row.min_S, w.S);
    row.max_R = std::max(row.max_R, w.R);
    row.sup_xi = std::max(row.sup_xi, w.R / w.S - 1.0);
  }
  return row;
}

NormSeries norm_series(std::span<const FieldSnapshot> snapshots,
                       const Grid& grid, const GasParameters& gas) {
  if (snapshots.empty()) throw std::invalid_argument("norm_series: no snapshots");
  NormSeries s;
  s.rows.reserve(snapshots.size());
  for (const FieldSnapshot& snap : snapshots) {
    s.rows.push_back(compute_norm_row(snap, grid, gas));
  }
  return s;
}

ClaimReport max_principle_check(const FieldSnapshot& snap, const Grid& grid,
                                const GasParameters& gas, double M,
                                double tol) {
  ClaimReport rep;
  rep.claim_id = "max-principle";
  rep.t = snap.t;
  // min S > 0 and S < R are strict; max R <= M + tol is not
  double worst_strict = std::numeric_limits<double>::infinity();
  double worst_cap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snap.rho.size(); ++i) {
    const RiemannState w = riemann_from_primitive({snap.rho[i], snap.v[i]}, gas);
    const double m_strict = std::min(w.S, w.R - w.S);
    const double m_cap = M + tol - w.R;
    if (std::min(m_strict, m_cap) < std::min(worst_strict, worst_cap)) {
      rep.x = grid.x(static_cast<int>(i));
    }
    worst_strict = std::min(worst_strict, m_strict);
    worst_cap = std::min(worst_cap, m_cap);
  }
  rep.worst_margin = std::min(worst_strict, worst_cap);
  rep.pass = worst_strict > 0.0 && worst_cap >= 0.0;
  return rep;
}

double xi_data_envelope(const InitialData& initial,
                        const BoundaryData& boundary, double x_begin,
                        double x_end, double t_horizon, int grid_n) {
  double sup = 0.0;
  for (double x : linspace(x_begin, x_end, grid_n)) {
    sup = std::max(sup, initial.xi0(x));
  }
  for (double t : linspace(0.0, t_horizon, grid_n)) {
    sup = std::max(sup, boundary.xiB(t));
  }
  return sup;
}

ClaimReport xi_bound_check(std::span<const FieldSnapshot> snapshots,
                           const Grid& grid, const GasParameters& gas,
                           double xi_data_sup, double tol) {
  ClaimReport rep;
  rep.claim_id = "xi-bound";
  double worst = std::numeric_limits<double>::infinity();
  for (const FieldSnapshot& snap : snapshots) {
    for (std::size_t i = 0; i < snap.rho.size(); ++i) {
      const RiemannState w =
          riemann_from_primitive({snap.rho[i], snap.v[i]}, gas);
      const double m = xi_data_sup + tol - (w.R / w.S - 1.0);
      if (m < worst) {
        worst = m;
        rep.x = grid.x(static_cast<int>(i));
        rep.t = snap.t;
      }
    }
  }
  rep.worst_margin = worst;
  rep.pass = worst >= 0.0;
  return rep;
}

ClaimReport slope_inequality_check(const FieldSnapshot& snap, const Grid& grid,
                                   const DuctProfile& profile,
                                   const GasParameters& gas, double tol) {
  ClaimReport rep;
  rep.claim_id = "slope-inequality";
  rep.t = snap.t;
  const double b = gas.b();
  const DerivedFields f = derive_fields(snap, gas);
  const std::vector<double> Sx = fd_derivative(f.S, grid.dx());
  const std::vector<double> Rx = fd_derivative(f.R, grid.dx());
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.S.size(); ++i) {
    const double x = grid.x(static_cast<int>(i));
    const double k = profile.k(x);
    const double S = f.S[i];
    const double g = 0.125 * (gas.gamma() - 1.0) * k *
                     (f.R[i] * f.R[i] - S * S);
    const double St = g - f.lambda1[i] * Sx[i];
    const double Rt = -g - f.lambda2[i] * Rx[i];
    const double m_x = std::min(Sx[i], Rx[i]) + tol - k * S / (-4.0 * b);
    const double m_t = k * S * S / (4.0 * b) + tol - std::max(St, Rt);
    const double m = std::min(m_x, m_t);
    if (m < worst) {
      worst = m;
      rep.x = x;
    }
  }
  rep.worst_margin = worst;
  rep.pass = worst >= 0.0;
  return rep;
}

namespace {

int nearest_node(const Grid& grid, double x) {
  const int i = static_cast<int>(std::lround((x - grid.x_begin) / grid.dx()));
  return std::clamp(i, 0, grid.n_cells);
}

}  // namespace

DecayReport decay_check(std::span<const FieldSnapshot> snapshots,
                        const Grid& grid, const InitialData& initial,
                        const DuctProfile& profile, const GasParameters& gas,
                        std::span<const double> probes, double tol) {
  if (snapshots.empty()) throw std::invalid_argument("decay_check: no snapshots");
  DecayReport out;
  out.bound.claim_id = "decay-bound";
  out.envelope.claim_id = "decay-envelope";
  out.monotone.claim_id = "decay-monotone";
  out.rate.claim_id = "decay-rate";
  const double b = gas.b();

  double worst_bound = std::numeric_limits<double>::infinity();
  double worst_env = std::numeric_limits<double>::infinity();
  double worst_mono = std::numeric_limits<double>::infinity();
  double worst_rate_dev = 0.0;
  bool rate_applicable = false;
  bool any_probe = false;

  for (double xp : probes) {
    const int ip = nearest_node(grid, xp);
    const double x = grid.x(ip);
    const double k = profile.k(x);
    if (k == 0.0) continue;  // not applicable at straight-duct probes
    any_probe = true;
    const double S0 = initial.S(x);

    double prev_S = 0.0, prev_R = 0.0, prev_v = 0.0;
    std::vector<double> log_t, log_S;
    const double t_end = snapshots.back().t;
    for (std::size_t j = 0; j < snapshots.size(); ++j) {
      const FieldSnapshot& snap = snapshots[j];
      const RiemannState w = riemann_from_primitive(
          {snap.rho[static_cast<std::size_t>(ip)],
           snap.v[static_cast<std::size_t>(ip)]}, gas);
      const double vv = 0.5 * (w.S + w.R);
      const double cap = 1.0 / (1.0 / S0 + k * snap.t / (-4.0 * b));
      double m = cap + tol - w.S;
      if (m < worst_bound) {
        worst_bound = m;
        out.bound.x = x;
        out.bound.t = snap.t;
      }
      m = 2.0 * w.S + tol - w.R;
      if (m < worst_env) {
        worst_env = m;
        out.envelope.x = x;
        out.envelope.t = snap.t;
      }
      if (j > 0) {
        m = std::min({prev_S + tol - w.S, prev_R + tol - w.R,
                      prev_v + tol - vv});
        if (m < worst_mono) {
          worst_mono = m;
          out.monotone.x = x;
          out.monotone.t = snap.t;
        }
      }
      prev_S = w.S;
      prev_R = w.R;
      prev_v = vv;
      if (snap.t >= 0.5 * t_end && snap.t > 0.0) {
        log_t.push_back(std::log(snap.t));
        log_S.push_back(std::log(w.S));
      }
    }
    // least-squares slope of log S vs log t over the last half of the horizon
    if (log_t.size() >= 3 && t_end >= 4.0) {
      rate_applicable = true;
      double mt = 0, ms = 0;
      for (std::size_t j = 0; j < log_t.size(); ++j) {
        mt += log_t[j];
        ms += log_S[j];
      }
      mt /= static_cast<double>(log_t.size());
      ms /= static_cast<double>(log_t.size());
      double num = 0, den = 0;
      for (std::size_t j = 0; j < log_t.size(); ++j) {
        num += (log_t[j] - mt) * (log_S[j] - ms);
        den += (log_t[j] - mt) * (log_t[j] - mt);
      }
      const double slope = num / den;
      const double dev = std::abs(-slope - 1.0);  // distance of |slope| from 1
      if (dev > worst_rate_dev) {
        worst_rate_dev = dev;
        out.rate.x = x;
        out.rate.t = t_end;
      }
    }
  }

  if (!any_probe) {
    out.bound.pass = out.envelope.pass = out.monotone.pass = out.rate.pass = true;
    return out;
  }
  out.bound.worst_margin = worst_bound;
  out.bound.pass = worst_bound >= 0.0;
  out.envelope.worst_margin = worst_env;
  out.envelope.pass = worst_env >= 0.0;
  out.monotone.worst_margin = worst_mono;
  out.monotone.pass = worst_mono >= 0.0;
  out.rate.worst_margin = 0.2 - worst_rate_dev;
  out.rate.pass = !rate_applicable || worst_rate_dev <= 0.2;
  return out;
}

}  // namespace ductflow
