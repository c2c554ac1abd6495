#ifndef DUCTFLOW_GAS_HPP_
#define DUCTFLOW_GAS_HPP_

namespace ductflow {

class DuctProfile;

/// Gas constants of the rescaled isentropic system. gamma is restricted to
/// the open interval (1,3); b = -(3-gamma)/(2(gamma-1)) < 0 throughout.
/// nu and eta are tied by nu = gamma/(gamma-1) * eta^(gamma-1).
/// Immutable after construction.
class GasParameters {
 public:
  static GasParameters from_nu(double gamma, double nu);
  static GasParameters from_eta(double gamma, double eta);

  double gamma() const { return gamma_; }
  double nu() const { return nu_; }
  double eta() const { return eta_; }
  double b() const { return b_; }

 private:
  GasParameters(double gamma, double nu, double eta, double b)
      : gamma_(gamma), nu_(nu), eta_(eta), b_(b) {}
  double gamma_;
  double nu_;
  double eta_;
  double b_;
};

/// Rescaled density (>= 0) and velocity at a point.
struct PrimitiveState {
  double rho = 0.0;
  double v = 0.0;
};

/// Riemann invariant pair; S <= R always, S < R exactly when rho > 0.
struct RiemannState {
  double S = 0.0;
  double R = 0.0;
};

struct Speeds {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

double lax_exponent(double gamma);
double nu_from_eta(double eta, double gamma);
double eta_from_nu(double nu, double gamma);

RiemannState riemann_from_primitive(const PrimitiveState& u, const GasParameters& gas);
PrimitiveState primitive_from_riemann(const RiemannState& w, const GasParameters& gas);

/// Undo the density rescaling: the physical (pre-rescaling) density.
double physical_density(double rho, const GasParameters& gas);

/// Characteristic speeds in Riemann-invariant form:
/// lambda1 = (gamma+1)/4 S + (3-gamma)/4 R, lambda2 with coefficients swapped.
Speeds eigenvalues(const RiemannState& w, const GasParameters& gas);
/// Same speeds as v -+ sqrt(nu(gamma-1)) rho^((gamma-1)/2).
Speeds eigenvalues(const PrimitiveState& u, const GasParameters& gas);

/// Geometric source g = (gamma-1)/8 * k(x) * (R^2 - S^2) of the S equation
/// (the R equation carries -g).
double source_g(double x, const RiemannState& w, const DuctProfile& profile,
                const GasParameters& gas);

/// xi = R/S - 1; the relative vacuum distance (meaningful for S > 0).
inline double xi_of(const RiemannState& w) { return w.R / w.S - 1.0; }

}  // namespace ductflow

#endif  // DUCTFLOW_GAS_HPP_
