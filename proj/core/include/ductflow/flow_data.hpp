#ifndef DUCTFLOW_FLOW_DATA_HPP_
#define DUCTFLOW_FLOW_DATA_HPP_

#include <filesystem>
#include <functional>

#include "ductflow/duct.hpp"
#include "ductflow/gas.hpp"

namespace ductflow {

/// Initial Riemann-invariant data on the spatial domain: C1 evaluators for
/// S0, R0 and their derivatives.
struct InitialData {
  std::function<double(double)> S, dS, R, dR;
  double xi0(double x) const { return R(x) / S(x) - 1.0; }
};

/// Boundary data at x_begin as functions of t on [0, inf).
struct BoundaryData {
  std::function<double(double)> S, dS, R, dR;
  double xiB(double t) const { return R(t) / S(t) - 1.0; }
};

/// Parameters of the reference data family:
///   S_B(t) = s0/(1+t),             R_B(t) = r0/(1+t),
///   S_0(x) = s0 (a(x)/a(xB))^cs,   R_0(x) = r0 (a(x)/a(xB))^cr,
/// with cs, cr fixed by the corner slopes S0'(xB) = s0_slope,
/// R0'(xB) = r0_slope.
struct ExpDataParams {
  double s0 = 0.0;
  double r0 = 0.0;
  double s0_slope = 0.0;
  double r0_slope = 0.0;
};

/// Corner-compatible slopes: solves the two corner ODE-compatibility
/// equations for S0'(xB), R0'(xB) given the 1/(1+t) boundary family.
/// Defaults s0 = 1 - sqrt(nu), r0 = 1.
ExpDataParams corner_exp_data(const GasParameters& gas,
                              const DuctProfile& profile);
ExpDataParams corner_exp_data(const GasParameters& gas,
                              const DuctProfile& profile, double s0, double r0);

BoundaryData make_exp_boundary(const ExpDataParams& p);
InitialData make_exp_initial(const ExpDataParams& p, const DuctProfile& profile);

/// Three-column text tables (x S R) resp. (t S R) with header
/// "# duct-data v1"; monotone C1 cubic interpolation.
InitialData initial_from_table_file(const std::filesystem::path& path);
BoundaryData boundary_from_table_file(const std::filesystem::path& path);

}  // namespace ductflow

#endif  // DUCTFLOW_FLOW_DATA_HPP_
