#ifndef DUCTFLOW_SOLVER_HPP_
#define DUCTFLOW_SOLVER_HPP_

#include <span>
#include <string>
#include <vector>

#include "ductflow/duct.hpp"
#include "ductflow/flow_data.hpp"
#include "ductflow/gas.hpp"

namespace ductflow {

/// Uniform node grid x_i = x_begin + i dx, i = 0..n_cells. Node 0 carries the
/// inflow Dirichlet data; nodes 1..n_cells are evolved. Three ghost nodes on
/// each side cover the WENO5 stencil radius.
struct Grid {
  double x_begin = 0.0;
  double x_end = 1.0;
  int n_cells = 1;

  static constexpr int ghost_width = 3;

  double dx() const { return (x_end - x_begin) / n_cells; }
  int n_nodes() const { return n_cells + 1; }
  double x(int i) const { return x_begin + dx() * i; }
};

/// Grid-sampled state at one time level. Immutable once recorded.
struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> rho, v;
};

/// Riemann-invariant view of a snapshot.
struct DerivedFields {
  std::vector<double> S, R, xi, lambda1, lambda2;
};
DerivedFields derive_fields(const FieldSnapshot& snap, const GasParameters& gas);

struct SolverConfig {
  GasParameters gas;
  DuctProfile profile;
  Grid grid;
  double cfl_ratio = 0.1;     // dt = cfl_ratio * dx
  double t_final = 10.0;
  int snapshot_stride = 100;  // steps between recorded snapshots
  double weno_epsilon = 1e-6;
  int outflow_order = 0;      // extrapolation order for outflow ghosts (0|1)

  SolverConfig(GasParameters g, DuctProfile p, Grid gr)
      : gas(g), profile(std::move(p)), grid(gr) {}
  double dt() const { return cfl_ratio * grid.dx(); }
};

/// Node values plus ghost cells; index i runs in
/// [-ghost_width, n_nodes-1+ghost_width].
struct ExtendedState {
  int n_nodes = 0;
  std::vector<double> rho, v;

  explicit ExtendedState(int nodes)
      : n_nodes(nodes),
        rho(static_cast<std::size_t>(nodes) + 2 * Grid::ghost_width, 0.0),
        v(static_cast<std::size_t>(nodes) + 2 * Grid::ghost_width, 0.0) {}
  double& rho_at(int i) { return rho[static_cast<std::size_t>(i + Grid::ghost_width)]; }
  double& v_at(int i) { return v[static_cast<std::size_t>(i + Grid::ghost_width)]; }
  double rho_at(int i) const { return rho[static_cast<std::size_t>(i + Grid::ghost_width)]; }
  double v_at(int i) const { return v[static_cast<std::size_t>(i + Grid::ghost_width)]; }

  void load_interior(std::span<const double> rho_in, std::span<const double> v_in);
  void load_interior(const FieldSnapshot& snap) { load_interior(snap.rho, snap.v); }
};

enum class WenoBias { Left, Right };

/// Jiang-Shu WENO5 point value at the i+1/2 interface. Left bias consumes
/// nodes {i-2..i+2}, right bias nodes {i-1..i+3} (pass them in ascending
/// order; the right-biased formula is the mirror image).
double weno5_reconstruct(std::span<const double, 5> stencil, WenoBias bias,
                         double epsilon);

/// Fills ghost nodes and the inflow node from boundary data at time t:
/// inflow by quadratic Taylor extension of (S,R) using PDE-derived
/// x-derivatives, outflow by low-order extrapolation. Returns the number of
/// rho values floored at zero. Throws if the boundary state is not
/// supersonic inflow (lambda1 <= 0).
long apply_boundaries(ExtendedState& ext, double t, const SolverConfig& config,
                      const BoundaryData& boundary);

struct RhsInput {
  double dx = 0.0;
  double nu = 0.0;
  double gamma = 0.0;
  double weno_epsilon = 1e-6;
  std::span<const double> k_nodes;  // k(x_i) for i = 0..n_nodes-1
};

struct RhsOutput {
  std::vector<double> drho, dv;  // one entry per node
  double max_speed = 0.0;        // max |lambda| over the extended range
};

// split-flux scratch sized to the extended range
struct FluxScratch {
  std::vector<double> fpr, fpv, fmr, fmv;
};

/// Conservative WENO5 flux difference of the globally Lax-Friedrichs-split
/// fluxes plus the pointwise source (-k rho v, 0). Ghosts must be filled.
void compute_rhs(const ExtendedState& ext, const RhsInput& in, RhsOutput& out,
                 FluxScratch& scratch);
inline void compute_rhs(const ExtendedState& ext, const RhsInput& in,
                        RhsOutput& out) {
  FluxScratch scratch;
  compute_rhs(ext, in, out, scratch);
}

struct SolverWorkspace {
  explicit SolverWorkspace(const SolverConfig& config);
  std::vector<double> x_nodes, k_nodes;
  ExtendedState ext;
  RhsOutput rhs;
  FluxScratch scratch;
  std::vector<double> stage1_rho, stage1_v, stage2_rho, stage2_v;
};

struct StepOutcome {
  double max_speed = 0.0;
  long clip_events = 0;
  bool cfl_violation = false;
  bool nan_detected = false;
  int nan_node = -1;
};

/// One TVD-RK3 step from snap.t to snap.t + dt; boundary values are taken at
/// the stage times t, t+dt, t+dt/2.
StepOutcome rk3_step(FieldSnapshot& snap, double dt, const SolverConfig& config,
                     const BoundaryData& boundary, SolverWorkspace& ws);

struct DiagRow {
  double t = 0.0;
  double sup_rho = 0.0, sup_v = 0.0;
  double sup_rho_x = 0.0, sup_v_x = 0.0;
  double min_S = 0.0, max_R = 0.0, sup_xi = 0.0;
};

enum class AbortReason { None, Nan, Cfl };

struct SimulationRecord {
  std::vector<FieldSnapshot> snapshots;  // uniformly strided, starting at t=0
  FieldSnapshot final_state;             // last valid state (on abort too)
  std::vector<DiagRow> diagnostics;      // one row per step, including t = 0
  long clip_events = 0;
  AbortReason abort = AbortReason::None;
  double abort_time = 0.0;
  std::string abort_detail;

  bool completed() const { return abort == AbortReason::None; }
};

/// Advances from t = 0 to t_final with fixed dt = cfl_ratio dx, recording
/// snapshots every snapshot_stride steps and one diagnostics row per step.
/// On NaN/CFL abort the record carries the last valid state and the abort
/// detail. Deterministic for a given config.
SimulationRecord run_simulation(const SolverConfig& config,
                                const InitialData& initial,
                                const BoundaryData& boundary);

}  // namespace ductflow

#endif  // DUCTFLOW_SOLVER_HPP_
