#include "ductflow/gas.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ductflow/duct.hpp"

namespace ductflow {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 1.0 && gamma < 3.0)) {
    throw std::domain_error("gamma must lie strictly in (1,3), got " +
                            std::to_string(gamma));
  }
}

}  // namespace

double lax_exponent(double gamma) {
  require_gamma(gamma);
  return -(3.0 - gamma) / (2.0 * (gamma - 1.0));
}

double nu_from_eta(double eta, double gamma) {
  require_gamma(gamma);
  if (!(eta > 0.0)) throw std::domain_error("eta must be positive");
  return gamma / (gamma - 1.0) * std::pow(eta, gamma - 1.0);
}

double eta_from_nu(double nu, double gamma) {
  require_gamma(gamma);
  if (!(nu > 0.0)) throw std::domain_error("nu must be positive");
  return std::pow((gamma - 1.0) * nu / gamma, 1.0 / (gamma - 1.0));
}

GasParameters GasParameters::from_nu(double gamma, double nu) {
  return GasParameters(gamma, nu, eta_from_nu(nu, gamma), lax_exponent(gamma));
}

GasParameters GasParameters::from_eta(double gamma, double eta) {
  return GasParameters(gamma, nu_from_eta(eta, gamma), eta,
                       lax_exponent(gamma));
}

RiemannState riemann_from_primitive(const PrimitiveState& u,
                                    const GasParameters& gas) {
  if (!(u.rho >= 0.0)) throw std::domain_error("rho must be nonnegative");
  const double g = gas.gamma();
  const double c = 2.0 * std::sqrt(gas.nu() / (g - 1.0)) *
                   std::pow(u.rho, 0.5 * (g - 1.0));
  return {u.v - c, u.v + c};
}

PrimitiveState primitive_from_riemann(const RiemannState& w,
                                      const GasParameters& gas) {
  if (w.S > w.R) {
    throw std::domain_error("Riemann ordering violated: S > R");
  }
  const double g = gas.gamma();
  const double rho = std::pow((g - 1.0) / (16.0 * gas.nu()), 1.0 / (g - 1.0)) *
                     std::pow(w.R - w.S, 2.0 / (g - 1.0));
  return {rho, 0.5 * (w.S + w.R)};
}

double physical_density(double rho, const GasParameters& gas) {
  const double g = gas.gamma();
  return std::pow((g - 1.0) * gas.nu() / g, 1.0 / (g - 1.0)) * rho;
}

Speeds eigenvalues(const RiemannState& w, const GasParameters& gas) {
  const double g = gas.gamma();
  const double cp = 0.25 * (g + 1.0);
  const double cm = 0.25 * (3.0 - g);
  return {cp * w.S + cm * w.R, cm * w.S + cp * w.R};
}

Speeds eigenvalues(const PrimitiveState& u, const GasParameters& gas) {
  const double g = gas.gamma();
  const double c = std::sqrt(gas.nu() * (g - 1.0)) *
                   std::pow(u.rho, 0.5 * (g - 1.0));
  return {u.v - c, u.v + c};
}

double source_g(double x, const RiemannState& w, const DuctProfile& profile,
                const GasParameters& gas) {
  const double k = profile.k(x);  // domain-checked by the profile
  return 0.125 * (gas.gamma() - 1.0) * k * (w.R * w.R - w.S * w.S);
}

}  // namespace ductflow
