#ifndef DUCTFLOW_CONDITIONS_HPP_
#define DUCTFLOW_CONDITIONS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ductflow/duct.hpp"
#include "ductflow/flow_data.hpp"
#include "ductflow/gas.hpp"

namespace ductflow {

enum class CheckStatus { Pass, Fail, NotApplicable };

/// Single validator verdict. margin is signed: the smallest slack of the
/// checked inequality over the grid (negative = violated); witness is the
/// grid point (x or t) where it is attained.
struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::NotApplicable;
  double margin = 0.0;
  double witness = 0.0;
  std::string note;

  bool passed() const { return status != CheckStatus::Fail; }
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool overall() const;
  const CheckResult* find(std::string_view id) const;
  std::string text() const;
  std::string key_values() const;
};

/// gamma strictly inside (1,3); claim id "gamma-range".
CheckResult check_gamma_range(double gamma);

/// (A1): k >= 0, C1 with bounded norm on the sampled domain. The computed
/// C1 norm is reported; a limit is enforced only when supplied.
CheckResult check_a1(const DuctProfile& profile, std::span<const double> grid,
                     std::optional<double> c1_norm_limit = std::nullopt);

/// (A3)/(A4): bounded C1 norms and the strict ordering 0 < S < R.
CheckResult check_a3(const InitialData& initial, std::span<const double> grid);
CheckResult check_a4(const BoundaryData& boundary, std::span<const double> grid);

/// (A2): corner value matching and the two corner ODE-compatibility
/// equations, to absolute tolerance tol.
CheckResult check_compatibility(const InitialData& initial,
                                const BoundaryData& boundary,
                                const DuctProfile& profile,
                                const GasParameters& gas, double tol);

/// Exact initial-slope inequalities (branch on b) plus the simplified
/// sufficient form. ids: "S0-ineq", "R0-ineq", "k2".
struct SlopeChecks {
  CheckResult exact_S;
  CheckResult exact_R;
  CheckResult simplified;
};
SlopeChecks check_initial_slopes(const InitialData& initial,
                                 const DuctProfile& profile,
                                 const GasParameters& gas,
                                 std::span<const double> grid);

/// Boundary analogues. ids: "SB-ineq", "RB-ineq", "k3".
SlopeChecks check_boundary_slopes(const BoundaryData& boundary,
                                  const DuctProfile& profile,
                                  const GasParameters& gas,
                                  std::span<const double> grid);

/// (A5): monotonicity signs and sup xi <= c_xi * sqrt(nu) on both grids.
CheckResult check_a5_smallness(const InitialData& initial,
                               const BoundaryData& boundary,
                               const GasParameters& gas, double c_xi,
                               std::span<const double> xgrid,
                               std::span<const double> tgrid);

/// Spherical-duct constraints: gamma < 1 + 2/dim (equivalently
/// b < -(dim-1)/2), the power-law growth lower bounds on S0 and R0, and
/// R0(x_end) below the configured light speed.
struct SphericalChecks {
  CheckResult gamma_bound;   // "spherical-gamma"
  CheckResult growth;        // "initial2"
  CheckResult light_speed;   // "light-speed"
};
SphericalChecks check_spherical(double x_begin, double x_end, int dim,
                                const GasParameters& gas,
                                const InitialData& initial, double c_light,
                                std::span<const double> grid);

/// Bisection for the largest nu in [nu_lo, nu_hi] whose data pass a
/// nu-dependent predicate (the "sufficiently small nu" threshold surfaced
/// as a utility). Assumes a single monotone transition.
double find_nu_threshold(const std::function<bool(double)>& passes_at,
                         double nu_lo, double nu_hi, int iterations = 60);

struct ValidationOptions {
  double c_xi = 2.0;
  std::optional<double> k1_delta;       // absent -> existence search
  double compat_tol = 1e-9;
  std::optional<double> c1_norm_limit;
  int grid_n = 1001;
  double t_horizon = 10.0;
  double x_check_end = 0.0;             // 0 -> profile x_end (must be finite)
  std::optional<int> spherical_dim;     // set for the spherical preset
  double c_light = 1e8;                 // rescaled units; generous default
};

/// Runs every applicable hypothesis check and assembles the report.
ValidationReport validate_all(const GasParameters& gas,
                              const DuctProfile& profile,
                              const InitialData& initial,
                              const BoundaryData& boundary,
                              const ValidationOptions& opt);

}  // namespace ductflow

#endif  // DUCTFLOW_CONDITIONS_HPP_
