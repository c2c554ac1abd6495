#ifndef DUCTFLOW_CSV_HPP_
#define DUCTFLOW_CSV_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ductflow/characteristics.hpp"
#include "ductflow/diagnostics.hpp"
#include "ductflow/solver.hpp"

namespace ductflow {

/// Full-precision, locale-independent formatting (%.17g); identical inputs
/// produce byte-identical files.
std::string format_double(double value);

/// Snapshot CSV, header "x,rho,v,S,R,xi", one file per recorded time,
/// filename snap_t<time>.csv.
std::filesystem::path write_snapshot_csv(const std::filesystem::path& dir,
                                         const FieldSnapshot& snap,
                                         const Grid& grid,
                                         const GasParameters& gas);

/// Diagnostics CSV, header "t,sup_rho,sup_v,sup_rho_x,sup_v_x,min_S,max_R,sup_xi".
void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagRow> rows);

/// Claims CSV, header "claim_id,pass,worst_margin,x,t".
void write_claims_csv(const std::filesystem::path& path,
                      std::span<const ClaimReport> claims);
std::vector<ClaimReport> read_claims_csv(const std::filesystem::path& path);

/// Trace CSV, header "t,x,S,R,xi", filename trace_<family>_<x0>_<t0>.csv.
std::filesystem::path write_trace_csv(const std::filesystem::path& dir,
                                      const CurveTrace& trace, double x0,
                                      double t0);

struct SnapshotSet {
  std::vector<FieldSnapshot> snapshots;  // sorted by time
};
/// Reads every snap_t*.csv in a run directory.
SnapshotSet read_snapshots(const std::filesystem::path& dir);

}  // namespace ductflow

#endif  // DUCTFLOW_CSV_HPP_
