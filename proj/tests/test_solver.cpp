#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "ductflow/csv.hpp"
#include "ductflow/solver.hpp"

using namespace ductflow;

namespace {

DuctProfile straight_duct(double lo, double hi) {
  return DuctProfile(lo, hi, [](double) {
    return ProfileSample{1.0, 0.0, 0.0, 0.0};
  });
}

// a = e^x: constant k = 1
DuctProfile unit_k_duct(double lo, double hi) {
  return DuctProfile(lo, hi, [](double x) {
    const double a = std::exp(x);
    return ProfileSample{a, a, 1.0, 0.0};
  });
}

BoundaryData constant_boundary(const RiemannState& w) {
  BoundaryData b;
  b.S = [w](double) { return w.S; };
  b.dS = [](double) { return 0.0; };
  b.R = [w](double) { return w.R; };
  b.dR = [](double) { return 0.0; };
  return b;
}

InitialData constant_initial(const RiemannState& w) {
  InitialData d;
  d.S = [w](double) { return w.S; };
  d.dS = [](double) { return 0.0; };
  d.R = [w](double) { return w.R; };
  d.dR = [](double) { return 0.0; };
  return d;
}

struct Exp1Case {
  GasParameters gas;
  DuctProfile profile = DuctProfile::exp1(1.0, 10.0);
  ExpDataParams params;
  InitialData initial;
  BoundaryData boundary;

  explicit Exp1Case(double nu)
      : gas(GasParameters::from_nu(1.4, nu)),
        params(corner_exp_data(gas, profile)),
        initial(make_exp_initial(params, profile)),
        boundary(make_exp_boundary(params)) {}
};

}  // namespace

TEST_CASE("weno5 point values") {
  const std::array<double, 5> flat{2.5, 2.5, 2.5, 2.5, 2.5};
  CHECK(weno5_reconstruct(flat, WenoBias::Left, 1e-6) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(weno5_reconstruct(flat, WenoBias::Right, 1e-6) ==
        doctest::Approx(2.5).epsilon(1e-15));

  const std::array<double, 5> lin{0.0, 1.0, 2.0, 3.0, 4.0};
  CHECK(weno5_reconstruct(lin, WenoBias::Left, 1e-6) ==
        doctest::Approx(2.5).epsilon(1e-14));
  // right bias reconstructs at the interface left of its center node
  CHECK(weno5_reconstruct(lin, WenoBias::Right, 1e-6) ==
        doctest::Approx(1.5).epsilon(1e-14));

  // Every 3-point candidate reproduces the implicit flux function exactly on
  // quadratic data, so any convex weights give the same interface value
  // h(x+1/2) = q(x+1/2) - dx^2 q''/24 (the sliding-average correction),
  // and the flux difference recovers q' exactly.
  auto quad = [](double x) { return 0.3 * x * x - 0.7 * x + 2.0; };
  const double h_half = quad(0.5) - 0.6 / 24.0;
  const std::array<double, 5> q{quad(-2), quad(-1), quad(0), quad(1), quad(2)};
  CHECK(std::abs(weno5_reconstruct(q, WenoBias::Left, 1e-6) - h_half) <= 1e-10);
  const std::array<double, 5> q2{quad(-1), quad(0), quad(1), quad(2), quad(3)};
  CHECK(std::abs(weno5_reconstruct(q2, WenoBias::Right, 1e-6) - h_half) <=
        1e-10);
  {
    const std::array<double, 5> qm{quad(-3), quad(-2), quad(-1), quad(0),
                                   quad(1)};
    const double h_mhalf = quad(-0.5) - 0.6 / 24.0;
    const double dq = weno5_reconstruct(q, WenoBias::Left, 1e-6) -
                      weno5_reconstruct(qm, WenoBias::Left, 1e-6);
    CHECK(std::abs(dq - (quad(0.5) - quad(-0.5))) <= 1e-10);  // = q'(0) * dx
    CHECK(std::abs(weno5_reconstruct(qm, WenoBias::Left, 1e-6) - h_mhalf) <=
          1e-10);
  }

  const std::array<double, 5> bad{1.0, 2.0, std::nan(""), 3.0, 4.0};
  CHECK(std::isnan(weno5_reconstruct(bad, WenoBias::Left, 1e-6)));
}

TEST_CASE("weno5 operator order on smooth data") {
  // periodic flux-difference of sin against cos
  auto op_error = [](int n) {
    const double dx = 2.0 * std::numbers::pi / n;
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = std::sin(i * dx);
    std::vector<double> F(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::array<double, 5> st;
      for (int m = -2; m <= 2; ++m) {
        st[static_cast<std::size_t>(m + 2)] =
            f[static_cast<std::size_t>(((i + m) % n + n) % n)];
      }
      F[static_cast<std::size_t>(i)] =
          weno5_reconstruct(st, WenoBias::Left, 1e-6);
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d =
          (F[static_cast<std::size_t>(i)] -
           F[static_cast<std::size_t>((i - 1 + n) % n)]) / dx;
      err = std::max(err, std::abs(d - std::cos(i * dx)));
    }
    return err;
  };
  const double e0 = op_error(64), e1 = op_error(128), e2 = op_error(256);
  const double slope = 0.5 * (std::log2(e0 / e1) + std::log2(e1 / e2));
  CHECK(slope >= 4.5);
}

TEST_CASE("rhs preserves free streams and keeps the source") {
  const GasParameters gas = GasParameters::from_nu(1.4, 0.01);
  const int n_cells = 32;
  const int nn = n_cells + 1;
  ExtendedState ext(nn);
  for (double& r : ext.rho) r = 0.7;
  for (double& v : ext.v) v = 1.1;

  std::vector<double> k0(static_cast<std::size_t>(nn), 0.0);
  RhsInput in;
  in.dx = 0.1;
  in.nu = gas.nu();
  in.gamma = gas.gamma();
  in.k_nodes = k0;
  RhsOutput out;
  compute_rhs(ext, in, out);
  for (int i = 0; i < nn; ++i) {
    CHECK(std::abs(out.drho[static_cast<std::size_t>(i)]) <= 1e-12);
    CHECK(std::abs(out.dv[static_cast<std::size_t>(i)]) <= 1e-12);
  }

  std::vector<double> k1(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) k1[static_cast<std::size_t>(i)] = 0.3 + 0.01 * i;
  in.k_nodes = k1;
  compute_rhs(ext, in, out);
  for (int i = 0; i < nn; ++i) {
    const double expected = -k1[static_cast<std::size_t>(i)] * 0.7 * 1.1;
    CHECK(out.drho[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::abs(out.dv[static_cast<std::size_t>(i)]) <= 1e-10);
  }
}

TEST_CASE("rhs matches the analytic operator at high order") {
  const double gamma = 1.4, nu = 0.01;
  auto err_at = [&](int n) {
    const double lo = 1.0;
    const double dx = 2.0 * std::numbers::pi / n;
    const int nn = n + 1;
    ExtendedState ext(nn);
    for (int i = -Grid::ghost_width; i <= n + Grid::ghost_width; ++i) {
      const double x = lo + i * dx;
      ext.rho_at(i) = 2.0 + std::sin(x);
      ext.v_at(i) = 3.0 + std::cos(x);
    }
    std::vector<double> k(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i) {
      const double x = lo + i * dx;
      k[static_cast<std::size_t>(i)] = 1.0 / (x * x);
    }
    RhsInput in;
    in.dx = dx;
    in.nu = nu;
    in.gamma = gamma;
    in.k_nodes = k;
    RhsOutput out;
    compute_rhs(ext, in, out);
    double err = 0.0;
    for (int i = 0; i < nn; ++i) {
      const double x = lo + i * dx;
      const double rho = 2.0 + std::sin(x), v = 3.0 + std::cos(x);
      const double drho_ex = -(std::cos(x) * v - rho * std::sin(x)) -
                             k[static_cast<std::size_t>(i)] * rho * v;
      const double dv_ex =
          -(-v * std::sin(x) +
            nu * (gamma - 1.0) * std::pow(rho, gamma - 2.0) * std::cos(x));
      err = std::max(err,
                     std::abs(out.drho[static_cast<std::size_t>(i)] - drho_ex));
      err = std::max(err, std::abs(out.dv[static_cast<std::size_t>(i)] - dv_ex));
    }
    return err;
  };
  const double e0 = err_at(128), e1 = err_at(256), e2 = err_at(512);
  const double slope = 0.5 * (std::log2(e0 / e1) + std::log2(e1 / e2));
  CHECK(slope >= 4.5);
}

TEST_CASE("boundary filling") {
  const GasParameters gas = GasParameters::from_nu(1.4, 0.01);

  SUBCASE("constant supersonic state fills ghosts with itself") {
    const RiemannState w = riemann_from_primitive({1.0, 1.0}, gas);
    Grid grid{0.0, 4.0, 20};
    SolverConfig cfg(gas, straight_duct(-1.0, 5.0), grid);
    ExtendedState ext(grid.n_nodes());
    for (double& r : ext.rho) r = 1.0;
    for (double& v : ext.v) v = 1.0;
    const long clips = apply_boundaries(ext, 0.3, cfg, constant_boundary(w));
    CHECK(clips == 0);
    for (int i = -3; i <= grid.n_cells + 3; ++i) {
      CHECK(ext.rho_at(i) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(ext.v_at(i) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("reference inflow state at t = 0") {
    const Exp1Case c(0.1);
    Grid grid{1.0, 10.0, 90};
    SolverConfig cfg(c.gas, c.profile, grid);
    ExtendedState ext(grid.n_nodes());
    apply_boundaries(ext, 0.0, cfg, c.boundary);
    CHECK(ext.v_at(0) ==
          doctest::Approx((2.0 - std::sqrt(0.1)) / 2.0).epsilon(1e-12));
    CHECK(ext.rho_at(0) ==
          doctest::Approx(9.8821176880261854e-5).epsilon(1e-12));
  }

  SUBCASE("subsonic boundary data is rejected") {
    Grid grid{0.0, 4.0, 20};
    SolverConfig cfg(gas, straight_duct(-1.0, 5.0), grid);
    ExtendedState ext(grid.n_nodes());
    CHECK_THROWS_AS(
        apply_boundaries(ext, 0.0, cfg, constant_boundary({-1.0, -0.5})),
        std::domain_error);
  }
}

TEST_CASE("rk3 step") {
  const GasParameters gas = GasParameters::from_nu(1.4, 0.01);
  const RiemannState w = riemann_from_primitive({1.0, 1.0}, gas);

  SUBCASE("identity when nothing moves") {
    Grid grid{0.0, 4.0, 40};
    SolverConfig cfg(gas, straight_duct(-1.0, 5.0), grid);
    cfg.cfl_ratio = 0.5;
    SolverWorkspace ws(cfg);
    FieldSnapshot snap;
    snap.t = 0.0;
    snap.rho.assign(static_cast<std::size_t>(grid.n_nodes()), 1.0);
    snap.v.assign(static_cast<std::size_t>(grid.n_nodes()), 1.0);
    const StepOutcome oc =
        rk3_step(snap, cfg.dt(), cfg, constant_boundary(w), ws);
    CHECK_FALSE(oc.cfl_violation);
    for (double r : snap.rho) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : snap.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("source-only mode reproduces the three-term Taylor update") {
    // constant k = 1 and uniform data: interior nodes obey rho' = -rho v,
    // and one TVD-RK3 step is exactly 1 - z + z^2/2 - z^3/6 with z = dt
    Grid grid{0.0, 8.0, 40};
    SolverConfig cfg(gas, unit_k_duct(-1.0, 9.0), grid);
    cfg.cfl_ratio = 0.5;  // dt = 0.1
    SolverWorkspace ws(cfg);
    FieldSnapshot snap;
    snap.rho.assign(static_cast<std::size_t>(grid.n_nodes()), 1.0);
    snap.v.assign(static_cast<std::size_t>(grid.n_nodes()), 1.0);
    const StepOutcome oc =
        rk3_step(snap, cfg.dt(), cfg, constant_boundary(w), ws);
    CHECK_FALSE(oc.cfl_violation);
    const double z = 0.1;
    const double taylor = 1.0 - z + z * z / 2.0 - z * z * z / 6.0;
    const double got = snap.rho[20];
    CHECK(got == doctest::Approx(taylor).epsilon(1e-13));
    CHECK(std::abs(got - std::exp(-z)) <= 5e-6);
    CHECK(snap.v[20] == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("CFL violation aborts the step and reports the speed") {
    Grid grid{0.0, 4.0, 40};
    SolverConfig cfg(gas, straight_duct(-1.0, 5.0), grid);
    cfg.cfl_ratio = 0.9;  // 0.9 * max|lambda| > 1 for v ~ 1.2
    SolverWorkspace ws(cfg);
    FieldSnapshot snap;
    snap.t = 0.0;
    snap.rho.assign(static_cast<std::size_t>(grid.n_nodes()), 1.0);
    snap.v.assign(static_cast<std::size_t>(grid.n_nodes()), 1.2);
    const RiemannState fast = riemann_from_primitive({1.0, 1.2}, gas);
    FieldSnapshot before = snap;
    const StepOutcome oc =
        rk3_step(snap, cfg.dt(), cfg, constant_boundary(fast), ws);
    CHECK(oc.cfl_violation);
    CHECK(oc.max_speed > 1.0 / 0.9);
    CHECK(snap.t == before.t);
    CHECK(snap.rho == before.rho);
  }
}

TEST_CASE("scheme combination is third order on advection") {
  // scalar u_t + u_x = 0, periodic, dt = 0.5 dx, via the same WENO5 kernel
  // and TVD-RK3 stage combination the duct solver uses
  auto advect_error = [](int n) {
    const double dx = 2.0 * std::numbers::pi / n;
    const double T = 1.0;
    const int steps = static_cast<int>(std::ceil(T / (0.5 * dx)));
    const double dt = T / steps;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = std::sin(i * dx);
    auto L = [&](const std::vector<double>& q) {
      std::vector<double> F(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        std::array<double, 5> st;
        for (int m = -2; m <= 2; ++m) {
          st[static_cast<std::size_t>(m + 2)] =
              q[static_cast<std::size_t>(((i + m) % n + n) % n)];
        }
        F[static_cast<std::size_t>(i)] =
            weno5_reconstruct(st, WenoBias::Left, 1e-6);
      }
      std::vector<double> d(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] =
            -(F[static_cast<std::size_t>(i)] -
              F[static_cast<std::size_t>((i - 1 + n) % n)]) / dx;
      }
      return d;
    };
    for (int s = 0; s < steps; ++s) {
      const std::vector<double> l0 = L(u);
      std::vector<double> u1(u), u2(u);
      for (int i = 0; i < n; ++i) {
        u1[static_cast<std::size_t>(i)] += dt * l0[static_cast<std::size_t>(i)];
      }
      const std::vector<double> l1 = L(u1);
      for (int i = 0; i < n; ++i) {
        u2[static_cast<std::size_t>(i)] =
            0.75 * u[static_cast<std::size_t>(i)] +
            0.25 * (u1[static_cast<std::size_t>(i)] +
                    dt * l1[static_cast<std::size_t>(i)]);
      }
      const std::vector<double> l2 = L(u2);
      for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] =
            u[static_cast<std::size_t>(i)] / 3.0 +
            2.0 / 3.0 * (u2[static_cast<std::size_t>(i)] +
                         dt * l2[static_cast<std::size_t>(i)]);
      }
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      err = std::max(err, std::abs(u[static_cast<std::size_t>(i)] -
                                   std::sin(i * dx - T)));
    }
    return err;
  };
  const double e0 = advect_error(64), e1 = advect_error(128),
               e2 = advect_error(256);
  CHECK(std::log2(e0 / e1) >= 3.0);
  CHECK(std::log2(e1 / e2) >= 3.0);
}

TEST_CASE("free streams are fixed points over many steps") {
  const GasParameters gas = GasParameters::from_nu(1.4, 0.01);
  const RiemannState w = riemann_from_primitive({1.0, 1.0}, gas);
  Grid grid{0.0, 1.0, 20};
  SolverConfig cfg(gas, straight_duct(-1.0, 2.0), grid);
  cfg.cfl_ratio = 0.1;
  cfg.t_final = 1e4 * cfg.dt();
  cfg.snapshot_stride = 5000;
  const SimulationRecord rec =
      run_simulation(cfg, constant_initial(w), constant_boundary(w));
  REQUIRE(rec.completed());
  const FieldSnapshot& last = rec.snapshots.back();
  for (std::size_t i = 0; i < last.rho.size(); ++i) {
    CHECK(std::abs(last.rho[i] - 1.0) <= 1e-10);
    CHECK(std::abs(last.v[i] - 1.0) <= 1e-10);
  }
  CHECK(rec.clip_events == 0);
}

TEST_CASE("coarse smoke run completes") {
  const Exp1Case c(0.1);
  Grid grid{1.0, 10.0, 10};
  SolverConfig cfg(c.gas, c.profile, grid);
  cfg.t_final = 1.0;
  cfg.snapshot_stride = 2;
  const SimulationRecord rec = run_simulation(cfg, c.initial, c.boundary);
  CHECK(rec.completed());
  CHECK(rec.snapshots.size() > 2);
  CHECK(rec.diagnostics.size() == 12);  // t = 0 plus 11 steps of dt = 0.09
}

TEST_CASE("runs are deterministic, snapshots byte-identical") {
  const Exp1Case c(0.1);
  Grid grid{1.0, 10.0, 60};
  SolverConfig cfg(c.gas, c.profile, grid);
  cfg.t_final = 0.6;
  cfg.snapshot_stride = 10;
  const SimulationRecord a = run_simulation(cfg, c.initial, c.boundary);
  const SimulationRecord b = run_simulation(cfg, c.initial, c.boundary);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    CHECK(a.snapshots[i].rho == b.snapshots[i].rho);
    CHECK(a.snapshots[i].v == b.snapshots[i].v);
  }

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ductflow_test_determinism";
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const fs::path pa = write_snapshot_csv(dir / "a", a.snapshots.back(), grid, c.gas);
  const fs::path pb = write_snapshot_csv(dir / "b", b.snapshots.back(), grid, c.gas);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(pa) == slurp(pb));
  CHECK_FALSE(slurp(pa).empty());
}

TEST_CASE("self-convergence on the reference setup") {
  // The reference data are only first-order compatible at the inflow corner
  // (the second time-derivatives of the boundary and PDE-propagated initial
  // data differ by O(1)), so the exact solution carries a second-derivative
  // jump along the corner characteristics. Pointwise convergence is capped
  // near that curve and inside the outflow extrapolation layer; away from
  // both, the scheme self-converges at high order.
  const Exp1Case c(0.1);
  auto run_at = [&](int n_cells) {
    Grid grid{1.0, 10.0, n_cells};
    SolverConfig cfg(c.gas, c.profile, grid);
    cfg.t_final = 1.0;
    cfg.snapshot_stride = 1 << 28;
    const SimulationRecord rec = run_simulation(cfg, c.initial, c.boundary);
    REQUIRE(rec.completed());
    return rec.final_state;
  };
  const FieldSnapshot s450 = run_at(450);    // dx = 0.02
  const FieldSnapshot s900 = run_at(900);    // dx = 0.01
  const FieldSnapshot s1800 = run_at(1800);  // dx = 0.005

  auto linf_on_coarse = [](const FieldSnapshot& coarse,
                           const FieldSnapshot& fine, bool trimmed) {
    double err = 0.0;
    const std::size_t n = coarse.v.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
      if (trimmed) {
        const double x = 1.0 + 9.0 * static_cast<double>(i) / n;
        if ((x > 1.4 && x < 2.6) || x > 9.5) continue;
      }
      err = std::max(err, std::abs(coarse.v[i] - fine.v[2 * i]));
      err = std::max(err, std::abs(coarse.rho[i] - fine.rho[2 * i]));
    }
    return err;
  };
  const double full_order =
      std::log2(linf_on_coarse(s450, s900, false) /
                linf_on_coarse(s900, s1800, false));
  CHECK(full_order >= 0.8);  // capped by the corner kink / outflow layer

  const double smooth_coarse = linf_on_coarse(s450, s900, true);
  const double smooth_fine = linf_on_coarse(s900, s1800, true);
  CHECK(std::log2(smooth_coarse / smooth_fine) >= 3.5);
  CHECK(smooth_fine <= 1e-8);
}

TEST_CASE("outflow extrapolation order is a mild sensitivity") {
  const Exp1Case c(0.1);
  Grid grid{1.0, 10.0, 450};
  SolverConfig cfg0(c.gas, c.profile, grid);
  cfg0.t_final = 1.0;
  cfg0.snapshot_stride = 1 << 28;
  SolverConfig cfg1 = cfg0;
  cfg1.outflow_order = 1;
  const SimulationRecord r0 = run_simulation(cfg0, c.initial, c.boundary);
  const SimulationRecord r1 = run_simulation(cfg1, c.initial, c.boundary);
  REQUIRE(r0.completed());
  REQUIRE(r1.completed());
  const std::size_t mid = 200;  // x = 5, far from the outflow
  CHECK(std::abs(r0.final_state.v[mid] - r1.final_state.v[mid]) <= 1e-6);
}

TEST_CASE("non-finite states abort with the last valid snapshot") {
  const GasParameters gas = GasParameters::from_nu(1.4, 0.01);
  Grid grid{0.0, 1.0, 10};
  SolverConfig cfg(gas, straight_duct(-1.0, 2.0), grid);
  cfg.cfl_ratio = 1e-210;  // defeat the CFL gate so overflow reaches the step
  cfg.t_final = cfg.dt();
  // rho stays finite but v^2 (and alpha v) overflow inside the flux split
  const RiemannState huge_state{1e200, 1e200 + 0.1};
  const SimulationRecord rec = run_simulation(cfg, constant_initial(huge_state),
                                              constant_boundary(huge_state));
  CHECK(rec.abort == AbortReason::Nan);
  CHECK(rec.abort_time == 0.0);
  REQUIRE_FALSE(rec.snapshots.empty());
  CHECK(rec.final_state.t == 0.0);  // last valid state is the initial one
  CHECK_FALSE(rec.abort_detail.empty());
}
