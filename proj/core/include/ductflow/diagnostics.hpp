#ifndef DUCTFLOW_DIAGNOSTICS_HPP_
#define DUCTFLOW_DIAGNOSTICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "ductflow/duct.hpp"
#include "ductflow/flow_data.hpp"
#include "ductflow/gas.hpp"
#include "ductflow/solver.hpp"

namespace ductflow {

/// Fifth-point finite-difference first derivative: 4th-order central in the
/// interior, 4th-order one-sided/biased at the two nodes nearest each edge.
/// Falls back to 2nd order when fewer than 5 nodes are available.
std::vector<double> fd_derivative(std::span<const double> f, double dx);

/// One row of the monitored norms of a snapshot.
DiagRow compute_norm_row(const FieldSnapshot& snap, const Grid& grid,
                         const GasParameters& gas);

struct NormSeries {
  std::vector<DiagRow> rows;
};

/// The monitored-quantity series over a snapshot sequence.
NormSeries norm_series(std::span<const FieldSnapshot> snapshots,
                       const Grid& grid, const GasParameters& gas);

/// Verdict of one quantitative claim checked on computed fields. Fails carry
/// the location of the worst margin so they can be reproduced exactly.
struct ClaimReport {
  std::string claim_id;
  bool pass = false;
  double worst_margin = 0.0;
  double x = 0.0;
  double t = 0.0;
};

/// 0 < S < R <= M + tol pointwise on one snapshot.
ClaimReport max_principle_check(const FieldSnapshot& snap, const Grid& grid,
                                const GasParameters& gas, double M, double tol);

/// sup_{x,t} xi over the run bounded by the data envelope
/// max(sup xi0, sup xiB) + tol. xi_data_sup is that envelope.
ClaimReport xi_bound_check(std::span<const FieldSnapshot> snapshots,
                           const Grid& grid, const GasParameters& gas,
                           double xi_data_sup, double tol);
/// Envelope from the data: sup xi0 over [x_begin, x_end], sup xiB over
/// [0, t_horizon], each on a dense grid.
double xi_data_envelope(const InitialData& initial, const BoundaryData& boundary,
                        double x_begin, double x_end, double t_horizon,
                        int grid_n = 4097);

/// Both halves of the preserved slope inequalities on one snapshot:
/// k S / (-4b) <= min(S_x, R_x) + tol and max(S_t, R_t) <= k S^2/(4b) + tol,
/// with S_t, R_t reconstructed from the characteristic form of the system.
ClaimReport slope_inequality_check(const FieldSnapshot& snap, const Grid& grid,
                                   const DuctProfile& profile,
                                   const GasParameters& gas, double tol);

/// Per-probe decay diagnostics over a recorded run.
struct DecayReport {
  ClaimReport bound;      // S(x_p,t) <= (1/S0(x_p) + k(x_p) t/(-4b))^{-1} + tol
  ClaimReport envelope;   // R <= 2 S pointwise at probes
  ClaimReport monotone;   // S, R, v nonincreasing in t at probes
  ClaimReport rate;       // log-log slope of S vs t over the last half in
                          // [-1.2, -0.8]; n/a (pass) when horizon too short
};
DecayReport decay_check(std::span<const FieldSnapshot> snapshots,
                        const Grid& grid, const InitialData& initial,
                        const DuctProfile& profile, const GasParameters& gas,
                        std::span<const double> probes, double tol);

}  // namespace ductflow

#endif  // DUCTFLOW_DIAGNOSTICS_HPP_
