#include "ductflow/duct.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ductflow/pchip.hpp"

namespace ductflow {

const double DuctProfile::kInfiniteEnd = std::numeric_limits<double>::infinity();

DuctProfile::DuctProfile(double x_begin, double x_end, Evaluator eval,
                         std::string name)
    : x_begin_(x_begin),
      x_end_(x_end),
      eval_(std::move(eval)),
      name_(std::move(name)) {
  if (!(x_end_ > x_begin_)) {
    throw std::invalid_argument("profile domain is empty");
  }
}

bool DuctProfile::half_line() const { return std::isinf(x_end_); }

ProfileSample DuctProfile::eval(double x) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(x_begin_));
  if (x < x_begin_ - slack || x > x_end_ + slack) {
    throw std::domain_error("profile evaluated outside its domain: x = " +
                            std::to_string(x));
  }
  return eval_(x);
}

DuctProfile DuctProfile::exp1(double x_begin, double x_end) {
  if (!(x_begin > 0.5)) {
    throw std::invalid_argument("exp1 needs x_begin > 1/2 (a > 0)");
  }
  return DuctProfile(
      x_begin, x_end,
      [](double x) {
        ProfileSample s;
        s.a = 2.0 - 1.0 / x;
        s.da = 1.0 / (x * x);
        const double q = 2.0 * x * x - x;
        s.k = 1.0 / q;
        s.dk = -(4.0 * x - 1.0) / (q * q);
        return s;
      },
      "exp1");
}

DuctProfile DuctProfile::exp2(double x_begin, double x_end) {
  if (!(x_begin > 0.0)) {
    throw std::invalid_argument("exp2 needs x_begin > 0");
  }
  return DuctProfile(
      x_begin, x_end,
      [](double x) {
        ProfileSample s;
        s.a = std::exp(1.0 - 1.0 / x);
        s.da = s.a / (x * x);
        s.k = 1.0 / (x * x);
        s.dk = -2.0 / (x * x * x);
        return s;
      },
      "exp2");
}

DuctProfile DuctProfile::spherical(int dim, double x_begin, double x_end) {
  if (dim < 2) throw std::invalid_argument("spherical needs dim >= 2");
  if (!(x_begin > 0.0)) {
    throw std::invalid_argument("spherical needs x_begin > 0");
  }
  const double m = static_cast<double>(dim - 1);
  return DuctProfile(
      x_begin, x_end,
      [m](double x) {
        ProfileSample s;
        s.a = std::pow(x, m);
        s.da = m * std::pow(x, m - 1.0);
        s.k = m / x;
        s.dk = -m / (x * x);
        return s;
      },
      "spherical");
}

DuctProfile DuctProfile::from_table(std::vector<double> x,
                                    std::vector<double> a) {
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("table profile needs a > 0");
  }
  const double x_begin = x.front();
  const double x_end = x.back();
  auto p = std::make_shared<Pchip>(std::move(x), std::move(a));
  const double h = p->spacing();
  auto k_of = [p](double x) { return p->derivative(x) / p->value(x); };
  return DuctProfile(
      x_begin, x_end,
      [p, k_of, h, x_begin, x_end](double x) {
        ProfileSample s;
        s.a = p->value(x);
        s.da = p->derivative(x);
        s.k = s.da / s.a;
        // k' by central differencing of k at the table spacing; one-sided
        // second-order next to the domain ends.
        if (x - h >= x_begin && x + h <= x_end) {
          s.dk = (k_of(x + h) - k_of(x - h)) / (2.0 * h);
        } else if (x - h < x_begin) {
          s.dk = (-3.0 * k_of(x) + 4.0 * k_of(x + h) - k_of(x + 2.0 * h)) /
                 (2.0 * h);
        } else {
          s.dk = (3.0 * k_of(x) - 4.0 * k_of(x - h) + k_of(x - 2.0 * h)) /
                 (2.0 * h);
        }
        return s;
      },
      "table");
}

DuctProfile DuctProfile::from_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile table: " + path.string());
  std::string line;
  bool header_seen = false;
  std::vector<double> xs, as;
  while (std::getline(in, line)) {
    if (line.rfind("# duct-profile v1", 0) == 0) {
      header_seen = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, a;
    if (!(ls >> x >> a)) {
      throw std::runtime_error("malformed profile table line: " + line);
    }
    xs.push_back(x);
    as.push_back(a);
  }
  if (!header_seen) {
    throw std::runtime_error("profile table missing '# duct-profile v1' header");
  }
  if (xs.size() < 4) {
    throw std::runtime_error("profile table needs at least 4 rows");
  }
  return from_table(std::move(xs), std::move(as));
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace needs n >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + i * h;
  v.back() = hi;
  return v;
}

K1Verdict check_k1(const DuctProfile& profile, double delta,
                   std::span<const double> grid, double b) {
  if (!(delta > 0.0 && delta < 2.0)) {
    throw std::invalid_argument("delta must lie in (0,2)");
  }
  if (!(b < 0.0)) throw std::invalid_argument("b must be negative");
  if (grid.empty()) throw std::invalid_argument("empty sample grid");

  const double denom = (2.0 - delta) * b;
  K1Verdict v;
  v.pass = true;
  v.margin = std::numeric_limits<double>::infinity();
  auto consider = [&](double x) {
    const ProfileSample s = profile.eval(x);
    const double rhs = s.k * s.k / denom;
    const double margin = rhs - s.dk;
    if (margin < v.margin) {
      v.margin = margin;
      if (v.pass) {  // track worst point while still passing
        v.witness_x = x;
        v.lhs = s.dk;
        v.rhs = rhs;
      }
    }
    if (margin < 0.0 && v.pass) {  // first violation wins the witness
      v.pass = false;
      v.witness_x = x;
      v.lhs = s.dk;
      v.rhs = rhs;
    }
  };
  for (double x : grid) consider(x);

  // refine around the worst coarse sample
  double w = v.witness_x;
  double lo = w, hi = w;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == w) {
      lo = (i > 0) ? grid[i - 1] : w;
      hi = (i + 1 < grid.size()) ? grid[i + 1] : w;
      break;
    }
  }
  for (int level = 0; level < 3 && hi > lo; ++level) {
    const double w_before = v.witness_x;
    for (int j = 0; j <= 16; ++j) consider(lo + (hi - lo) * j / 16.0);
    const double span = (hi - lo) / 8.0;
    lo = std::max(lo, v.witness_x - span);
    hi = std::min(hi, v.witness_x + span);
    if (v.witness_x == w_before && level > 0) break;
  }
  return v;
}

std::optional<double> check_k1_search(const DuctProfile& profile,
                                      std::span<const double> grid, double b,
                                      int n_delta) {
  if (n_delta < 1) throw std::invalid_argument("n_delta must be positive");
  for (int j = 0; j < n_delta; ++j) {
    const double delta = 2.0 * (j + 0.5) / (n_delta + 1);
    if (check_k1(profile, delta, grid, b).pass) return delta;
  }
  return std::nullopt;
}

IntegrabilityVerdict check_k_integrability(const DuctProfile& profile,
                                           double tol) {
  IntegrabilityVerdict v;
  if (!profile.half_line()) {
    v.applicable = false;
    v.pass = true;  // vacuous on finite domains
    return v;
  }
  v.applicable = true;
  const double x0 = profile.x_begin();
  const double log_a0 = std::log(profile.a(x0));

  double X = std::max(2.0 * std::abs(x0), x0 + 1.0);
  double prev_log_a = std::log(profile.a(X));
  double tail = std::numeric_limits<double>::infinity();
  double k_tail = profile.k(X);
  for (int j = 0; j < 40; ++j) {
    const double Xn = 2.0 * X;
    const double an = profile.a(Xn);
    if (!std::isfinite(an)) {  // unbounded area: divergent integral
      v.pass = false;
      v.integral = std::numeric_limits<double>::infinity();
      v.k_limit = k_tail;
      return v;
    }
    const double log_an = std::log(an);
    tail = log_an - prev_log_a;
    prev_log_a = log_an;
    X = Xn;
    k_tail = profile.k(X);
    if (std::abs(tail) < 0.25 * tol && std::abs(k_tail) < 0.25 * tol) break;
  }
  v.integral = prev_log_a - log_a0;
  v.k_limit = k_tail;
  v.pass = std::abs(tail) < tol && std::abs(k_tail) < tol &&
           std::isfinite(v.integral);
  return v;
}

}  // namespace ductflow
