#include "ductflow/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ductflow {

SpaceTimeField::SpaceTimeField(std::vector<FieldSnapshot> snapshots, Grid grid,
                               GasParameters gas)
    : grid_(grid), gas_(gas) {
  if (snapshots.size() < 2) {
    throw std::invalid_argument("SpaceTimeField needs >= 2 snapshots");
  }
  t_begin_ = snapshots.front().t;
  t_end_ = snapshots.back().t;
  dt_ = (t_end_ - t_begin_) / static_cast<double>(snapshots.size() - 1);
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    const double expected = t_begin_ + dt_ * static_cast<double>(j);
    if (std::abs(snapshots[j].t - expected) > 1e-6 * std::max(1.0, t_end_)) {
      throw std::invalid_argument("snapshot times are not uniformly spaced");
    }
    if (static_cast<int>(snapshots[j].rho.size()) != grid_.n_nodes()) {
      throw std::invalid_argument("snapshot does not conform to the grid");
    }
    fields_.push_back(derive_fields(snapshots[j], gas_));
  }
}

SpaceTimeField::Sample SpaceTimeField::at(double x, double t) const {
  Sample out;
  double tx = (x - grid_.x_begin) / grid_.dx();
  double tt = (t - t_begin_) / dt_;
  const double nx = static_cast<double>(grid_.n_cells);
  const double nt = static_cast<double>(fields_.size() - 1);
  if (tx < 0.0 || tx > nx || tt < 0.0 || tt > nt) out.clamped = true;
  tx = std::clamp(tx, 0.0, nx);
  tt = std::clamp(tt, 0.0, nt);

  const std::size_t i = static_cast<std::size_t>(std::min(tx, nx - 1.0));
  const std::size_t j = static_cast<std::size_t>(std::min(tt, nt - 1.0));
  const double ax = tx - static_cast<double>(i);
  const double at = tt - static_cast<double>(j);

  auto blend = [&](auto&& get) {
    const double f00 = get(fields_[j], i), f10 = get(fields_[j], i + 1);
    const double f01 = get(fields_[j + 1], i), f11 = get(fields_[j + 1], i + 1);
    // increment form: exact on constant data
    const double fx0 = f00 + ax * (f10 - f00);
    const double fx1 = f01 + ax * (f11 - f01);
    return fx0 + at * (fx1 - fx0);
  };
  out.S = blend([](const DerivedFields& f, std::size_t n) { return f.S[n]; });
  out.R = blend([](const DerivedFields& f, std::size_t n) { return f.R[n]; });
  out.lambda1 =
      blend([](const DerivedFields& f, std::size_t n) { return f.lambda1[n]; });
  out.lambda2 =
      blend([](const DerivedFields& f, std::size_t n) { return f.lambda2[n]; });
  out.xi = blend([](const DerivedFields& f, std::size_t n) { return f.xi[n]; });
  out.v = 0.5 * (out.S + out.R);
  return out;
}

namespace {

double speed_of(const SpaceTimeField& field, double x, double t,
                TraceFamily family) {
  const SpaceTimeField::Sample s = field.at(x, t);
  switch (family) {
    case TraceFamily::One: return s.lambda1;
    case TraceFamily::Two: return s.lambda2;
    default: return s.v;
  }
}

// one classical 4-stage step of dx/dt = speed(x,t)
double rk4_step(const SpaceTimeField& field, double x, double t, double h,
                TraceFamily family) {
  const double k1 = speed_of(field, x, t, family);
  const double k2 = speed_of(field, x + 0.5 * h * k1, t + 0.5 * h, family);
  const double k3 = speed_of(field, x + 0.5 * h * k2, t + 0.5 * h, family);
  const double k4 = speed_of(field, x + h * k3, t + h, family);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TracePoint make_point(const SpaceTimeField& field, double x, double t) {
  const SpaceTimeField::Sample s = field.at(x, t);
  return {t, x, s.S, s.R, s.xi};
}

}  // namespace

CurveTrace trace(const SpaceTimeField& field, double x0, double t0,
                 TraceFamily family) {
  const Grid& grid = field.grid();
  if (x0 < grid.x_begin || x0 > grid.x_end || t0 < field.t_begin() ||
      t0 > field.t_end()) {
    throw std::invalid_argument("trace start outside the recorded domain");
  }
  CurveTrace tr;
  tr.family = family;
  tr.points.push_back(make_point(field, x0, t0));

  double x = x0, t = t0;
  const double t_end = field.t_end();
  const double h_full = field.dt();
  while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
    // align steps with the snapshot times (the field is smooth within strides)
    const double next_knot =
        field.t_begin() +
        h_full * std::floor((t - field.t_begin()) / h_full + 1.0 + 1e-9);
    const double t_next = std::min(std::min(next_knot, t + h_full), t_end);
    const double h = t_next - t;
    const double x_next = rk4_step(field, x, t, h, family);

    const bool exits_right = x_next > grid.x_end;
    const bool exits_left = x_next < grid.x_begin;
    if (exits_right || exits_left) {
      const double wall = exits_right ? grid.x_end : grid.x_begin;
      double lo = 0.0, hi = 1.0;  // step fraction bracketing the crossing
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double xm = rk4_step(field, x, t, h * mid, family);
        ((exits_right ? xm > wall : xm < wall) ? hi : lo) = mid;
      }
      tr.exit = exits_right ? ExitReason::LeftDomainRight
                            : ExitReason::HitBoundary;
      tr.exit_t = t + h * hi;
      tr.exit_x = wall;
      return tr;
    }
    x = x_next;
    t = t_next;
    tr.points.push_back(make_point(field, x, t));
  }
  tr.exit = ExitReason::ReachedTimeEnd;
  tr.exit_t = tr.points.back().t;
  tr.exit_x = tr.points.back().x;
  return tr;
}

MonotonicityReport monotonicity_report(const CurveTrace& trace, double tol) {
  if (trace.points.size() < 2) {
    throw std::invalid_argument("monotonicity_report needs >= 2 samples");
  }
  MonotonicityReport rep;
  double ws = 0.0, wr = 0.0, wx = 0.0;  // worst signed increments
  for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
    const TracePoint& a = trace.points[i];
    const TracePoint& b = trace.points[i + 1];
    ws = std::min(ws, b.S - a.S);
    wr = std::min(wr, a.R - b.R);
    wx = std::min(wx, a.xi - b.xi);
  }
  rep.worst_s = ws;
  rep.worst_r = wr;
  rep.worst_xi = wx;
  rep.s_increasing_ok = ws >= -tol;
  rep.r_decreasing_ok = wr >= -tol;
  rep.xi_decreasing_ok = wx >= -tol;
  return rep;
}

VacuumEquivalenceReport vacuum_equivalence_check(const CurveTrace& trace,
                                                 const GasParameters& gas,
                                                 double M, double tol) {
  if (trace.points.empty()) {
    throw std::invalid_argument("empty trace");
  }
  double max_R = 0.0;
  for (const TracePoint& p : trace.points) max_R = std::max(max_R, p.R);
  if (M < max_R) {
    throw std::domain_error("vacuum equivalence needs M >= max R along trace");
  }
  const double S_start = trace.points.front().S;
  if (!(S_start > 0.0)) {
    throw std::domain_error("vacuum equivalence needs S > 0 at trace start");
  }
  VacuumEquivalenceReport rep;
  const double g = gas.gamma();
  const double coef = 4.0 * std::sqrt(gas.nu() / (g - 1.0));
  double worst = std::numeric_limits<double>::infinity();
  for (const TracePoint& p : trace.points) {
    const double rho = primitive_from_riemann({p.S, p.R}, gas).rho;
    const double q = coef * std::pow(rho, 0.5 * (g - 1.0));
    const double m = std::min(p.xi - q / M + tol, q / S_start - p.xi + tol);
    if (m < worst) {
      worst = m;
      rep.t = p.t;
    }
  }
  rep.worst_margin = worst;
  rep.pass = worst >= 0.0;
  return rep;
}

}  // namespace ductflow
