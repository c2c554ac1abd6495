#ifndef DUCTFLOW_PCHIP_HPP_
#define DUCTFLOW_PCHIP_HPP_

#include <cstddef>
#include <vector>

namespace ductflow {

/// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
/// weighted-harmonic slopes). C1, monotone on monotone data.
class Pchip {
 public:
  Pchip(std::vector<double> x, std::vector<double> y);

  double value(double t) const;
  double derivative(double t) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  /// Median knot spacing; the natural step for finite differencing on top of
  /// the interpolant.
  double spacing() const { return spacing_; }

 private:
  std::size_t interval(double t) const;

  std::vector<double> x_, y_, d_;
  double spacing_ = 0.0;
};

}  // namespace ductflow

#endif  // DUCTFLOW_PCHIP_HPP_
