#include "ductflow/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ductflow {

namespace {

constexpr double kLogBranchTol = 1e-12;

void require_order(double S, double R) {
  if (!(R > S)) {
    throw std::domain_error("riccati quantities need R > S (off vacuum)");
  }
}

// C1(S,R,k,k',b) for b != -1; the hatted variant is C1 with S and R swapped.
double c1_poly(double S, double R, double k, double kp, double b) {
  const double b2 = b * b, b3 = b2 * b;
  const double q = b2 + 3.0 * b - 2.0;
  const double p = b3 + 2.0 * b2 + 3.0 * b - 2.0;
  const double k2_part =
      k * k / (8.0 * b2 * (b + 1.0) * (b + 1.0) * (1.0 - 2.0 * b)) *
      (b * (1.0 - b) * (1.0 - b) * R * R + 2.0 * b * q * R * S + p * S * S);
  const double kp_part =
      kp / (4.0 * b * (b + 1.0) * (1.0 - 2.0 * b)) *
      (b * (1.0 - b) * R * R - 2.0 * b2 * R * S +
       (2.0 - 3.0 * b - b2) * S * S);
  return k2_part + kp_part;
}

// b = -1 variant; L = ln(R - S).
double c1_log(double S, double R, double k, double kp) {
  const double d = R - S;
  const double L = std::log(d);
  const double k2_part = k * k / 24.0 *
                         (-2.0 * R * d * L + 8.0 * S * d * L -
                          4.0 * d * d * L * L - 3.0 * R * R - 3.0 * S * S);
  const double kp_part =
      kp / 24.0 * (2.0 * (R * R - S * S) - (4.0 * R + 8.0 * S) * (S - d * L));
  return k2_part + kp_part;
}

double c1hat_log(double S, double R, double k, double kp) {
  const double d = R - S;
  const double L = std::log(d);
  const double k2_part = k * k / 24.0 *
                         (2.0 * S * d * L - 8.0 * R * d * L -
                          4.0 * d * d * L * L - 3.0 * S * S - 3.0 * R * R);
  const double kp_part =
      kp / 24.0 * (2.0 * (S * S - R * R) - (4.0 * S + 8.0 * R) * (R + d * L));
  return k2_part + kp_part;
}

}  // namespace

LaxQuantities lax_quantities(double S, double R, double Sx, double Rx,
                             double k, const GasParameters& gas) {
  require_order(S, R);
  const double b = gas.b();
  const double d = R - S;
  LaxQuantities q;
  q.h = b * std::log(d);
  const double eh = std::pow(d, b);
  if (std::abs(b + 1.0) <= kLogBranchTol) {
    const double L = std::log(d);
    q.Q1 = -0.5 * k * S / d + 0.5 * k * L;
    q.Q2 = -0.5 * k * R / d - 0.5 * k * L;
  } else {
    q.Q1 = k / (2.0 * b) * S * std::pow(d, b) +
           k / (2.0 * (b + 1.0)) * std::pow(d, b + 1.0);
    q.Q2 = k / (2.0 * b) * R * std::pow(d, b) -
           k / (2.0 * (b + 1.0)) * std::pow(d, b + 1.0);
  }
  q.Y = eh * Sx + q.Q1;
  q.Z = eh * Rx + q.Q2;
  return q;
}

RiccatiCoeffs riccati_coeffs(double S, double R, double k, double kprime,
                             const GasParameters& gas) {
  require_order(S, R);
  const double b = gas.b();
  const double d = R - S;
  RiccatiCoeffs c;
  c.log_branch = std::abs(b + 1.0) <= kLogBranchTol;
  if (c.log_branch) {
    const double L = std::log(d);
    c.A = c.Ahat = -2.0 / 3.0 * d;
    c.B = k / 6.0 * (R - 4.0 * S + 4.0 * d * L);
    c.Bhat = k / 6.0 * (S - 4.0 * R - 4.0 * d * L);
    c.C = c1_log(S, R, k, kprime) / d;
    c.Chat = c1hat_log(S, R, k, kprime) / d;
  } else {
    const double q = b * (b * b + 3.0 * b - 2.0);
    const double p = b * b * b + 2.0 * b * b + 3.0 * b - 2.0;
    const double scale = -k / (2.0 * b * (b + 1.0) * (1.0 - 2.0 * b));
    c.A = c.Ahat = -(1.0 - b) / (1.0 - 2.0 * b) * std::pow(d, -b);
    c.B = scale * (q * R + p * S);
    c.Bhat = scale * (q * S + p * R);
    const double db = std::pow(d, b);
    c.C = db * c1_poly(S, R, k, kprime, b);
    c.Chat = db * c1_poly(R, S, k, kprime, b);
  }
  return c;
}

double c_sign_leading(double S, double R, double k, double kprime,
                      const GasParameters& gas) {
  require_order(S, R);
  if (!(S > 0.0)) throw std::domain_error("c_sign_leading needs S > 0");
  const double b = gas.b();
  const double xi = R / S - 1.0;
  return std::pow(S, b + 2.0) * std::pow(xi, b) *
         (-k * k / (4.0 * b * b) + kprime / (2.0 * b));
}

std::optional<RootPair> split_roots(const RiccatiCoeffs& c, int family) {
  double A, B, C;
  if (family == 1) {
    A = c.A;
    B = c.B;
    C = c.C;
  } else if (family == 2) {
    A = c.Ahat;
    B = c.Bhat;
    C = c.Chat;
  } else {
    throw std::invalid_argument("family must be 1 or 2");
  }
  if (!(A < 0.0)) throw std::invalid_argument("split_roots needs A < 0");
  if (C < 0.0) return std::nullopt;

  const double disc = B * B - 4.0 * A * C;  // >= B^2 since A C <= 0
  const double sq = std::sqrt(std::max(disc, 0.0));
  double r1, r2;
  if (C == 0.0) {
    r1 = 0.0;
    r2 = -B / A;
  } else {
    const double qf = -0.5 * (B + std::copysign(sq, B));
    r1 = qf / A;
    r2 = C / qf;
  }
  RootPair out{std::min(r1, r2), std::max(r1, r2)};
  return out;
}

std::optional<double> separating_line(std::span<const double> W1,
                                      std::span<const double> W2) {
  if (W1.empty() || W1.size() != W2.size()) {
    throw std::invalid_argument("separating_line needs matching sample series");
  }
  const double lo = *std::max_element(W1.begin(), W1.end());
  const double hi = *std::min_element(W2.begin(), W2.end());
  if (lo > hi) return std::nullopt;
  return 0.5 * (lo + hi);
}

RiccatiUpperBound::RiccatiUpperBound(std::function<double(double)> A,
                                     std::function<double(double)> W1,
                                     std::function<double(double)> W2,
                                     double W0, double t_begin, double t_end,
                                     double step)
    : A_(std::move(A)),
      W1_(std::move(W1)),
      W2_(std::move(W2)),
      W0_(W0),
      t_begin_(t_begin),
      t_end_(t_end),
      step_(step) {
  if (!(W0 >= 0.0)) throw std::domain_error("W(T1) must be nonnegative");
  if (!(t_end > t_begin)) throw std::invalid_argument("empty horizon");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");

  const int n = std::max(1, static_cast<int>(std::ceil((t_end - t_begin) / step)));
  knots_.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    knots_[static_cast<std::size_t>(i)] =
        t_begin + (t_end - t_begin) * i / static_cast<double>(n);
  }
  auto check = [this](double t) {
    if (!(A_(t) < 0.0)) {
      throw std::domain_error("riccati_bound: A(t) >= 0 at t = " +
                              std::to_string(t));
    }
    if (!(W1_(t) <= 0.0 && 0.0 <= W2_(t))) {
      throw std::domain_error("riccati_bound: root ordering violated at t = " +
                              std::to_string(t));
    }
  };
  cumulative_.assign(knots_.size(), 0.0);
  check(knots_[0]);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double a = knots_[i], bk = knots_[i + 1];
    const double m = 0.5 * (a + bk);
    check(m);
    check(bk);
    cumulative_[i + 1] =
        cumulative_[i] +
        (bk - a) / 6.0 * (integrand(a) + 4.0 * integrand(m) + integrand(bk));
  }
}

double RiccatiUpperBound::integrand(double t) const {
  const double w = W2_(t) - W1_(t);
  return -0.25 * A_(t) * w * w;
}

double RiccatiUpperBound::operator()(double t) const {
  if (t < t_begin_ - 1e-12 || t > t_end_ + 1e-12) {
    throw std::invalid_argument("riccati_bound evaluated outside horizon");
  }
  t = std::clamp(t, t_begin_, t_end_);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t i =
      static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots_.begin() - 1, 0));
  double tail = 0.0;
  if (t > knots_[i]) {
    const double m = 0.5 * (knots_[i] + t);
    tail = (t - knots_[i]) / 6.0 *
           (integrand(knots_[i]) + 4.0 * integrand(m) + integrand(t));
  }
  return W0_ + cumulative_[i] + std::max(tail, 0.0);
}

}  // namespace ductflow
