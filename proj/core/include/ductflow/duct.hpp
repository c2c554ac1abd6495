#ifndef DUCTFLOW_DUCT_HPP_
#define DUCTFLOW_DUCT_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ductflow {

struct ProfileSample {
  double a = 0.0;   // cross-sectional area
  double da = 0.0;  // a'
  double k = 0.0;   // a'/a
  double dk = 0.0;  // k'
};

/// Divergent-duct cross-section a(x) on [x_begin, x_end] (x_end may be +inf).
/// Presets are analytic; table profiles interpolate with a monotone C1 cubic
/// and fall back to finite differences for k'. Immutable; evaluation is pure.
class DuctProfile {
 public:
  using Evaluator = std::function<ProfileSample(double)>;

  DuctProfile(double x_begin, double x_end, Evaluator eval,
              std::string name = "custom");

  /// a(x) = 2 - 1/x, k(x) = 1/(2x^2 - x).
  static DuctProfile exp1(double x_begin = 1.0,
                          double x_end = kInfiniteEnd);
  /// a(x) = e^{1 - 1/x}, k(x) = 1/x^2.
  static DuctProfile exp2(double x_begin = 1.0,
                          double x_end = kInfiniteEnd);
  /// a(x) = x^{dim-1}, k(x) = (dim-1)/x; dim >= 2, x_begin > 0.
  static DuctProfile spherical(int dim, double x_begin, double x_end);

  static DuctProfile from_table(std::vector<double> x, std::vector<double> a);
  /// Two-column text file (x, a), strictly increasing x,
  /// header line "# duct-profile v1".
  static DuctProfile from_table_file(const std::filesystem::path& path);

  ProfileSample eval(double x) const;
  double a(double x) const { return eval(x).a; }
  double da(double x) const { return eval(x).da; }
  double k(double x) const { return eval(x).k; }
  double dk(double x) const { return eval(x).dk; }

  double x_begin() const { return x_begin_; }
  double x_end() const { return x_end_; }
  bool half_line() const;
  const std::string& name() const { return name_; }

  static const double kInfiniteEnd;

 private:
  double x_begin_;
  double x_end_;
  Evaluator eval_;
  std::string name_;
};

/// Duct shape condition: k'(x) <= k(x)^2 / ((2-delta) b) on the sample grid,
/// with interval refinement around the worst sample.
struct K1Verdict {
  bool pass = false;
  double witness_x = 0.0;  // first violation if fail, else worst-margin point
  double lhs = 0.0;        // k'(witness)
  double rhs = 0.0;        // k^2/((2-delta) b) at witness
  double margin = 0.0;     // min over samples of rhs - lhs
};
K1Verdict check_k1(const DuctProfile& profile, double delta,
                   std::span<const double> grid, double b);

/// Existence search: smallest delta on a grid in (0,2) for which check_k1
/// passes, if any.
std::optional<double> check_k1_search(const DuctProfile& profile,
                                      std::span<const double> grid, double b,
                                      int n_delta = 64);

/// Tail behavior on half-line domains: lim k = 0 and integral k dx finite
/// (= ln a(inf) - ln a(x_begin)). Vacuous pass on finite domains.
struct IntegrabilityVerdict {
  bool applicable = false;
  bool pass = false;
  double integral = 0.0;
  double k_limit = 0.0;
};
IntegrabilityVerdict check_k_integrability(const DuctProfile& profile,
                                           double tol = 1e-6);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace ductflow

#endif  // DUCTFLOW_DUCT_HPP_
