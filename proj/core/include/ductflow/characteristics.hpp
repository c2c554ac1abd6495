#ifndef DUCTFLOW_CHARACTERISTICS_HPP_
#define DUCTFLOW_CHARACTERISTICS_HPP_

#include <vector>

#include "ductflow/gas.hpp"
#include "ductflow/solver.hpp"

namespace ductflow {

/// Recorded space-time field with bilinear interpolation in (x,t) of
/// S, R, lambda1, lambda2, v and xi. Snapshots must share one grid and a
/// uniform time stride. Queries outside the record are clamped and flagged.
class SpaceTimeField {
 public:
  SpaceTimeField(std::vector<FieldSnapshot> snapshots, Grid grid,
                 GasParameters gas);

  struct Sample {
    double S = 0, R = 0, lambda1 = 0, lambda2 = 0, v = 0, xi = 0;
    bool clamped = false;
  };
  Sample at(double x, double t) const;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }
  const GasParameters& gas() const { return gas_; }

 private:
  Grid grid_;
  GasParameters gas_;
  double t_begin_ = 0, t_end_ = 0, dt_ = 0;
  std::vector<DerivedFields> fields_;  // one per snapshot
};

enum class TraceFamily { One = 1, Two = 2, Particle = 3 };
enum class ExitReason { LeftDomainRight, ReachedTimeEnd, HitBoundary };

struct TracePoint {
  double t = 0, x = 0, S = 0, R = 0, xi = 0;
};

struct CurveTrace {
  TraceFamily family = TraceFamily::One;
  std::vector<TracePoint> points;  // strictly increasing t, at snapshot times
  ExitReason exit = ExitReason::ReachedTimeEnd;
  // where the curve left the recorded domain (bisected within the final
  // stride); equals the last sample when the record ended first
  double exit_t = 0.0;
  double exit_x = 0.0;
};

/// Integrates dx/dt = lambda1 | lambda2 | v through the field with classical
/// 4-stage steps at the snapshot stride, sampling S, R, xi along the way.
/// Terminates at domain exit (bisected to the crossing) or the record end.
CurveTrace trace(const SpaceTimeField& field, double x0, double t0,
                 TraceFamily family);

/// Nondecreasing S, nonincreasing R and xi along the trace, within tol.
/// Worst violations are signed: negative = violated by that much.
struct MonotonicityReport {
  bool s_increasing_ok = false;
  bool r_decreasing_ok = false;
  bool xi_decreasing_ok = false;
  double worst_s = 0, worst_r = 0, worst_xi = 0;

  bool all_ok() const {
    return s_increasing_ok && r_decreasing_ok && xi_decreasing_ok;
  }
};
MonotonicityReport monotonicity_report(const CurveTrace& trace, double tol);

/// Two-sided equivalence of xi and rho^((gamma-1)/2) along a trace:
///   4 sqrt(nu/(gamma-1)) rho^((gamma-1)/2) / M <= xi <= same / S(start).
/// Requires M >= max R along the trace and S(start) > 0.
struct VacuumEquivalenceReport {
  bool pass = false;
  double worst_margin = 0;
  double t = 0;
};
VacuumEquivalenceReport vacuum_equivalence_check(const CurveTrace& trace,
                                                 const GasParameters& gas,
                                                 double M, double tol = 1e-10);

}  // namespace ductflow

#endif  // DUCTFLOW_CHARACTERISTICS_HPP_
