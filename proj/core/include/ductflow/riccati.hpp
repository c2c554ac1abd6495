#ifndef DUCTFLOW_RICCATI_HPP_
#define DUCTFLOW_RICCATI_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ductflow/gas.hpp"

namespace ductflow {

/// Transformed gradient variables Y = e^h S_x + Q1, Z = e^h R_x + Q2 with
/// h = b ln(R-S). The integration functions of S resp. R in the offsets are
/// dropped (negligible near vacuum).
struct LaxQuantities {
  double h = 0.0;
  double Q1 = 0.0;
  double Q2 = 0.0;
  double Y = 0.0;
  double Z = 0.0;
};

LaxQuantities lax_quantities(double S, double R, double Sx, double Rx,
                             double k, const GasParameters& gas);

/// Recover the gradients from the transformed variables.
inline double gradient_from_lax(double W, double Q, double h) {
  return std::exp(-h) * (W - Q);
}

/// Quadratic coefficients of dY/dt = A Y^2 + B Y + C along family 1 and
/// dZ/dt = Ahat Z^2 + Bhat Z + Chat along family 2. A = Ahat < 0 always.
struct RiccatiCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
  double Ahat = 0.0, Bhat = 0.0, Chat = 0.0;
  bool log_branch = false;  // b within 1e-12 of -1
};

RiccatiCoeffs riccati_coeffs(double S, double R, double k, double kprime,
                             const GasParameters& gas);

/// Leading term of C and Chat as xi = R/S - 1 -> 0:
/// S^{b+2} xi^b ( -k^2/(4 b^2) + k'/(2b) ).
double c_sign_leading(double S, double R, double k, double kprime,
                      const GasParameters& gas);

/// Real roots W1 <= 0 <= W2 of A W^2 + B W + C when C >= 0 (sign split is
/// guaranteed by C/A <= 0); absent when C < 0. family selects the plain or
/// hatted triple.
struct RootPair {
  double W1 = 0.0;
  double W2 = 0.0;
};
std::optional<RootPair> split_roots(const RiccatiCoeffs& c, int family);

/// A constant W* with max W1(t) <= W* <= min W2(t) over the common grid
/// (midpoint of the feasible band), if the band is nonempty.
std::optional<double> separating_line(std::span<const double> W1,
                                      std::span<const double> W2);

/// Upper envelope of Lemma-type comparison for
/// dW/dt = A(t) (W - W1(t)) (W - W2(t)), A < 0, W1 <= 0 <= W2, W(T1) >= 0:
///   0 <= W(t) <= W(T1) - 1/4 int_{T1}^t A (W2 - W1)^2.
/// Composite Simpson on knots of width `step` (error O(step^4)); evaluation
/// between knots adds a partial Simpson over the tail piece. Nondecreasing.
class RiccatiUpperBound {
 public:
  RiccatiUpperBound(std::function<double(double)> A,
                    std::function<double(double)> W1,
                    std::function<double(double)> W2, double W0, double t_begin,
                    double t_end, double step);

  double operator()(double t) const;
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

 private:
  double integrand(double t) const;  // -A (W2-W1)^2 / 4 >= 0

  std::function<double(double)> A_, W1_, W2_;
  double W0_, t_begin_, t_end_, step_;
  std::vector<double> knots_, cumulative_;
};

inline RiccatiUpperBound riccati_bound(std::function<double(double)> A,
                                       std::function<double(double)> W1,
                                       std::function<double(double)> W2,
                                       double W0, double t_begin, double t_end,
                                       double step) {
  return RiccatiUpperBound(std::move(A), std::move(W1), std::move(W2), W0,
                           t_begin, t_end, step);
}

}  // namespace ductflow

#endif  // DUCTFLOW_RICCATI_HPP_
