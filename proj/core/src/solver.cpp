#include "ductflow/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ductflow/diagnostics.hpp"

namespace ductflow {

DerivedFields derive_fields(const FieldSnapshot& snap,
                            const GasParameters& gas) {
  const std::size_t n = snap.rho.size();
  DerivedFields d;
  d.S.resize(n);
  d.R.resize(n);
  d.xi.resize(n);
  d.lambda1.resize(n);
  d.lambda2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RiemannState w =
        riemann_from_primitive({snap.rho[i], snap.v[i]}, gas);
    const Speeds lam = eigenvalues(w, gas);
    d.S[i] = w.S;
    d.R[i] = w.R;
    d.xi[i] = w.R / w.S - 1.0;
    d.lambda1[i] = lam.lambda1;
    d.lambda2[i] = lam.lambda2;
  }
  return d;
}

void ExtendedState::load_interior(std::span<const double> rho_in,
                                  std::span<const double> v_in) {
  if (static_cast<int>(rho_in.size()) != n_nodes ||
      static_cast<int>(v_in.size()) != n_nodes) {
    throw std::invalid_argument("extended state size mismatch");
  }
  std::copy(rho_in.begin(), rho_in.end(), rho.begin() + Grid::ghost_width);
  std::copy(v_in.begin(), v_in.end(), v.begin() + Grid::ghost_width);
}

double weno5_reconstruct(std::span<const double, 5> stencil, WenoBias bias,
                         double epsilon) {
  std::array<double, 5> u;
  if (bias == WenoBias::Left) {
    std::copy(stencil.begin(), stencil.end(), u.begin());
  } else {
    std::reverse_copy(stencil.begin(), stencil.end(), u.begin());
  }
  const double v0 = u[0], v1 = u[1], v2 = u[2], v3 = u[3], v4 = u[4];

  const double b0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2) * (v0 - 2.0 * v1 + v2) +
                    0.25 * (v0 - 4.0 * v1 + 3.0 * v2) * (v0 - 4.0 * v1 + 3.0 * v2);
  const double b1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) * (v1 - 2.0 * v2 + v3) +
                    0.25 * (v1 - v3) * (v1 - v3);
  const double b2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) * (v2 - 2.0 * v3 + v4) +
                    0.25 * (3.0 * v2 - 4.0 * v3 + v4) * (3.0 * v2 - 4.0 * v3 + v4);

  const double p0 = (2.0 * v0 - 7.0 * v1 + 11.0 * v2) / 6.0;
  const double p1 = (-v1 + 5.0 * v2 + 2.0 * v3) / 6.0;
  const double p2 = (2.0 * v2 + 5.0 * v3 - v4) / 6.0;

  const double a0 = 0.1 / ((epsilon + b0) * (epsilon + b0));
  const double a1 = 0.6 / ((epsilon + b1) * (epsilon + b1));
  const double a2 = 0.3 / ((epsilon + b2) * (epsilon + b2));
  return (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2);
}

namespace {

struct BoundaryDerivs {
  double S = 0, R = 0, Sx = 0, Rx = 0, Sxx = 0, Rxx = 0;
};

struct BoundarySlopes {
  double Sx = 0, Rx = 0;
};

// First x-derivatives at the inflow corner from the characteristic form of
// the system: S_x = (g - S_B')/lambda1, R_x = (-g - R_B')/lambda2.
BoundarySlopes inflow_slopes(const BoundaryData& bd, double kB, double gamma,
                             double t) {
  const double S = bd.S(t), R = bd.R(t);
  const double g = 0.125 * (gamma - 1.0) * kB * (R * R - S * S);
  const double cp = 0.25 * (gamma + 1.0), cm = 0.25 * (3.0 - gamma);
  const double lam1 = cp * S + cm * R;
  const double lam2 = cm * S + cp * R;
  return {(g - bd.dS(t)) / lam1, (-g - bd.dR(t)) / lam2};
}

BoundaryDerivs inflow_derivs(const BoundaryData& bd, double kB, double kpB,
                             double gamma, double t) {
  BoundaryDerivs out;
  out.S = bd.S(t);
  out.R = bd.R(t);
  const BoundarySlopes s0 = inflow_slopes(bd, kB, gamma, t);
  out.Sx = s0.Sx;
  out.Rx = s0.Rx;

  // time derivative of the corner slopes, differenced on the analytic map
  const double ht = 1e-4 * std::max(1.0, std::abs(t));
  double Sxt, Rxt;
  if (t >= 2.0 * ht) {
    const BoundarySlopes m2 = inflow_slopes(bd, kB, gamma, t - 2.0 * ht);
    const BoundarySlopes m1 = inflow_slopes(bd, kB, gamma, t - ht);
    const BoundarySlopes p1 = inflow_slopes(bd, kB, gamma, t + ht);
    const BoundarySlopes p2 = inflow_slopes(bd, kB, gamma, t + 2.0 * ht);
    Sxt = (m2.Sx - 8.0 * m1.Sx + 8.0 * p1.Sx - p2.Sx) / (12.0 * ht);
    Rxt = (m2.Rx - 8.0 * m1.Rx + 8.0 * p1.Rx - p2.Rx) / (12.0 * ht);
  } else {
    const BoundarySlopes p1 = inflow_slopes(bd, kB, gamma, t + ht);
    const BoundarySlopes p2 = inflow_slopes(bd, kB, gamma, t + 2.0 * ht);
    Sxt = (-3.0 * s0.Sx + 4.0 * p1.Sx - p2.Sx) / (2.0 * ht);
    Rxt = (-3.0 * s0.Rx + 4.0 * p1.Rx - p2.Rx) / (2.0 * ht);
  }

  const double S = out.S, R = out.R;
  const double cp = 0.25 * (gamma + 1.0), cm = 0.25 * (3.0 - gamma);
  const double lam1 = cp * S + cm * R;
  const double lam2 = cm * S + cp * R;
  const double gx = 0.125 * (gamma - 1.0) *
                    (kpB * (R * R - S * S) +
                     kB * (2.0 * R * out.Rx - 2.0 * S * out.Sx));
  const double lam1x = cp * out.Sx + cm * out.Rx;
  const double lam2x = cm * out.Sx + cp * out.Rx;
  out.Sxx = (gx - Sxt - lam1x * out.Sx) / lam1;
  out.Rxx = (-gx - Rxt - lam2x * out.Rx) / lam2;
  return out;
}

}  // namespace

long apply_boundaries(ExtendedState& ext, double t, const SolverConfig& config,
                      const BoundaryData& boundary) {
  const GasParameters& gas = config.gas;
  const Grid& grid = config.grid;
  const int n = grid.n_nodes() - 1;  // last node index
  const double dx = grid.dx();
  long clips = 0;

  const double SB = boundary.S(t), RB = boundary.R(t);
  const Speeds lam = eigenvalues(RiemannState{SB, RB}, gas);
  if (!(lam.lambda1 > 0.0 && lam.lambda2 > 0.0)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "supersonic inflow required: lambda1 = %.6g at t = %.6g",
                  lam.lambda1, t);
    throw std::domain_error(msg);
  }

  const double xB = grid.x_begin;
  const ProfileSample ps = config.profile.eval(xB);
  const BoundaryDerivs bdv =
      inflow_derivs(boundary, ps.k, ps.dk, gas.gamma(), t);

  // inflow node and ghosts by quadratic Taylor extension in (S,R)
  for (int i = 0; i >= -Grid::ghost_width; --i) {
    const double d = i * dx;
    double Sg = bdv.S + d * bdv.Sx + 0.5 * d * d * bdv.Sxx;
    double Rg = bdv.R + d * bdv.Rx + 0.5 * d * d * bdv.Rxx;
    if (Rg < Sg) {  // grazing vacuum in the extension
      Rg = Sg;
      ++clips;
    }
    const PrimitiveState u = primitive_from_riemann({Sg, Rg}, gas);
    ext.rho_at(i) = u.rho;
    ext.v_at(i) = u.v;
  }

  // outflow ghosts by extrapolation (all characteristics exit)
  for (int j = 1; j <= Grid::ghost_width; ++j) {
    auto extrapolate = [&](auto&& at) {
      switch (config.outflow_order) {
        case 0:
          return at(n);
        case 1:
          return at(n) + j * (at(n) - at(n - 1));
        default: {  // parabola through the last three nodes
          const double jj = static_cast<double>(j);
          return at(n) * (1.0 + jj) * (2.0 + jj) / 2.0 -
                 at(n - 1) * jj * (2.0 + jj) +
                 at(n - 2) * jj * (1.0 + jj) / 2.0;
        }
      }
    };
    double rho_g = extrapolate([&](int i) { return ext.rho_at(i); });
    const double v_g = extrapolate([&](int i) { return ext.v_at(i); });
    if (rho_g < 0.0) {
      rho_g = 0.0;
      ++clips;
    }
    ext.rho_at(n + j) = rho_g;
    ext.v_at(n + j) = v_g;
  }
  return clips;
}

void compute_rhs(const ExtendedState& ext, const RhsInput& in, RhsOutput& out,
                 FluxScratch& s) {
  const int n_nodes = ext.n_nodes;
  const int gw = Grid::ghost_width;
  const std::size_t total = ext.rho.size();
  const double gm1 = in.gamma - 1.0;
  const double sound_coef = std::sqrt(in.nu * gm1);

  s.fpr.resize(total);
  s.fpv.resize(total);
  s.fmr.resize(total);
  s.fmv.resize(total);
  out.drho.resize(static_cast<std::size_t>(n_nodes));
  out.dv.resize(static_cast<std::size_t>(n_nodes));

  // global Lax-Friedrichs splitting speed
  double alpha = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double c = sound_coef * std::pow(ext.rho[i], 0.5 * gm1);
    alpha = std::max(alpha, std::abs(ext.v[i]) + c);
  }
  out.max_speed = alpha;

  for (std::size_t i = 0; i < total; ++i) {
    const double rho = ext.rho[i], vv = ext.v[i];
    const double f1 = rho * vv;
    const double f2 = 0.5 * vv * vv + in.nu * std::pow(rho, gm1);
    s.fpr[i] = 0.5 * (f1 + alpha * rho);
    s.fmr[i] = 0.5 * (f1 - alpha * rho);
    s.fpv[i] = 0.5 * (f2 + alpha * vv);
    s.fmv[i] = 0.5 * (f2 - alpha * vv);
  }

  // interface j+1/2 for j = -1..n; rhs_i = -(F_{i+1/2} - F_{i-1/2})/dx + src
  auto span5 = [](const std::vector<double>& a, std::size_t first) {
    return std::span<const double, 5>(a.data() + first, 5);
  };
  double Fr_prev = 0.0, Fv_prev = 0.0;
  for (int j = -1; j < n_nodes; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j + gw);
    const double Fr =
        weno5_reconstruct(span5(s.fpr, idx - 2), WenoBias::Left, in.weno_epsilon) +
        weno5_reconstruct(span5(s.fmr, idx - 1), WenoBias::Right, in.weno_epsilon);
    const double Fv =
        weno5_reconstruct(span5(s.fpv, idx - 2), WenoBias::Left, in.weno_epsilon) +
        weno5_reconstruct(span5(s.fmv, idx - 1), WenoBias::Right, in.weno_epsilon);
    if (j >= 0) {
      const double rho = ext.rho[idx], vv = ext.v[idx];
      const double k = in.k_nodes[static_cast<std::size_t>(j)];
      out.drho[static_cast<std::size_t>(j)] =
          -(Fr - Fr_prev) / in.dx - k * rho * vv;
      out.dv[static_cast<std::size_t>(j)] = -(Fv - Fv_prev) / in.dx;
    }
    Fr_prev = Fr;
    Fv_prev = Fv;
  }
}

SolverWorkspace::SolverWorkspace(const SolverConfig& config)
    : ext(config.grid.n_nodes()) {
  const int n_nodes = config.grid.n_nodes();
  x_nodes.resize(static_cast<std::size_t>(n_nodes));
  k_nodes.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    x_nodes[static_cast<std::size_t>(i)] = config.grid.x(i);
    k_nodes[static_cast<std::size_t>(i)] =
        config.profile.k(x_nodes[static_cast<std::size_t>(i)]);
  }
  const std::size_t nn = static_cast<std::size_t>(n_nodes);
  stage1_rho.resize(nn);
  stage1_v.resize(nn);
  stage2_rho.resize(nn);
  stage2_v.resize(nn);
  rhs.drho.resize(nn);
  rhs.dv.resize(nn);
}

namespace {

long floor_rho(std::vector<double>& rho) {
  long clips = 0;
  for (double& r : rho) {
    if (r < 0.0) {
      r = 0.0;
      ++clips;
    }
  }
  return clips;
}

}  // namespace

StepOutcome rk3_step(FieldSnapshot& snap, double dt, const SolverConfig& config,
                     const BoundaryData& boundary, SolverWorkspace& ws) {
  const std::size_t nn = snap.rho.size();
  const double t = snap.t;
  StepOutcome oc;

  RhsInput in;
  in.dx = config.grid.dx();
  in.nu = config.gas.nu();
  in.gamma = config.gas.gamma();
  in.weno_epsilon = config.weno_epsilon;
  in.k_nodes = ws.k_nodes;

  auto eval = [&](std::span<const double> rho, std::span<const double> v,
                  double t_stage) {
    ws.ext.load_interior(rho, v);
    oc.clip_events += apply_boundaries(ws.ext, t_stage, config, boundary);
    compute_rhs(ws.ext, in, ws.rhs, ws.scratch);
    oc.max_speed = std::max(oc.max_speed, ws.rhs.max_speed);
  };

  // stage 1: u1 = u + dt L(u, t)
  eval(snap.rho, snap.v, t);
  if (config.cfl_ratio * ws.rhs.max_speed >= 1.0) {
    oc.cfl_violation = true;
    return oc;
  }
  for (std::size_t i = 1; i < nn; ++i) {
    ws.stage1_rho[i] = snap.rho[i] + dt * ws.rhs.drho[i];
    ws.stage1_v[i] = snap.v[i] + dt * ws.rhs.dv[i];
  }
  ws.stage1_rho[0] = snap.rho[0];
  ws.stage1_v[0] = snap.v[0];
  oc.clip_events += floor_rho(ws.stage1_rho);

  // stage 2: u2 = 3/4 u + 1/4 (u1 + dt L(u1, t+dt))
  eval(ws.stage1_rho, ws.stage1_v, t + dt);
  for (std::size_t i = 1; i < nn; ++i) {
    ws.stage2_rho[i] =
        0.75 * snap.rho[i] + 0.25 * (ws.stage1_rho[i] + dt * ws.rhs.drho[i]);
    ws.stage2_v[i] =
        0.75 * snap.v[i] + 0.25 * (ws.stage1_v[i] + dt * ws.rhs.dv[i]);
  }
  ws.stage2_rho[0] = snap.rho[0];
  ws.stage2_v[0] = snap.v[0];
  oc.clip_events += floor_rho(ws.stage2_rho);

  // stage 3: u_next = 1/3 u + 2/3 (u2 + dt L(u2, t+dt/2))
  eval(ws.stage2_rho, ws.stage2_v, t + 0.5 * dt);
  // build into stage1 buffers; commit only if finite
  for (std::size_t i = 1; i < nn; ++i) {
    ws.stage1_rho[i] = snap.rho[i] / 3.0 +
                       2.0 / 3.0 * (ws.stage2_rho[i] + dt * ws.rhs.drho[i]);
    ws.stage1_v[i] =
        snap.v[i] / 3.0 + 2.0 / 3.0 * (ws.stage2_v[i] + dt * ws.rhs.dv[i]);
  }
  oc.clip_events += floor_rho(ws.stage1_rho);
  {
    const PrimitiveState uB = primitive_from_riemann(
        {boundary.S(t + dt), boundary.R(t + dt)}, config.gas);
    ws.stage1_rho[0] = uB.rho;
    ws.stage1_v[0] = uB.v;
  }

  for (std::size_t i = 0; i < nn; ++i) {
    if (!std::isfinite(ws.stage1_rho[i]) || !std::isfinite(ws.stage1_v[i])) {
      oc.nan_detected = true;
      oc.nan_node = static_cast<int>(i);
      return oc;  // snap untouched: caller keeps the last valid state
    }
  }
  snap.rho.swap(ws.stage1_rho);
  snap.v.swap(ws.stage1_v);
  snap.t = t + dt;
  return oc;
}

SimulationRecord run_simulation(const SolverConfig& config,
                                const InitialData& initial,
                                const BoundaryData& boundary) {
  const Grid& grid = config.grid;
  const int n_nodes = grid.n_nodes();
  const double dt = config.dt();
  const long n_steps = std::lround(config.t_final / dt);

  SolverWorkspace ws(config);
  SimulationRecord rec;

  FieldSnapshot snap;
  snap.t = 0.0;
  snap.rho.resize(static_cast<std::size_t>(n_nodes));
  snap.v.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    const double x = ws.x_nodes[static_cast<std::size_t>(i)];
    const PrimitiveState u =
        primitive_from_riemann({initial.S(x), initial.R(x)}, config.gas);
    snap.rho[static_cast<std::size_t>(i)] = u.rho;
    snap.v[static_cast<std::size_t>(i)] = u.v;
  }

  rec.snapshots.push_back(snap);
  rec.diagnostics.push_back(compute_norm_row(snap, grid, config.gas));

  for (long step = 1; step <= n_steps; ++step) {
    const StepOutcome oc = rk3_step(snap, dt, config, boundary, ws);
    rec.clip_events += oc.clip_events;
    if (oc.cfl_violation) {
      rec.abort = AbortReason::Cfl;
      rec.abort_time = snap.t;
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "CFL violated at t = %.6g: cfl_ratio * max|lambda| = %.6g",
                    snap.t, config.cfl_ratio * oc.max_speed);
      rec.abort_detail = msg;
      break;
    }
    if (oc.nan_detected) {
      rec.abort = AbortReason::Nan;
      rec.abort_time = snap.t;
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "non-finite value at node %d (x = %.6g) after t = %.6g",
                    oc.nan_node, grid.x(oc.nan_node), snap.t);
      rec.abort_detail = msg;
      break;
    }
    snap.t = static_cast<double>(step) * dt;
    rec.diagnostics.push_back(compute_norm_row(snap, grid, config.gas));
    if (step % config.snapshot_stride == 0) {
      rec.snapshots.push_back(snap);
    }
  }
  rec.final_state = std::move(snap);
  return rec;
}

}  // namespace ductflow
