#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace prandtl_lab {

// Cubic Hermite piece on [x0, x1] with end values f0, f1 and end slopes d0, d1.
double hermite_value(double x0, double x1, double f0, double f1, double d0, double d1,
                     double x);
double hermite_slope(double x0, double x1, double f0, double f1, double d0, double d1,
                     double x);

// Three-point slope estimates for data on strictly increasing nodes.
std::vector<double> three_point_slopes(std::span<const double> x, std::span<const double> f);

// Five-point (fourth-order) slope estimates, one-sided near the ends.
std::vector<double> five_point_slopes(std::span<const double> x, std::span<const double> f);

// Hyman monotonicity filter: clamps slopes so that every Hermite piece of
// monotone data is monotone. Modifies d in place.
void hyman_filter(std::span<const double> x, std::span<const double> f, std::span<double> d);

// Index j with x[j] <= s < x[j+1], clamped to [0, n-2].
std::size_t bracket(std::span<const double> x, double s);

// Shape-preserving piecewise cubic through (x, f) with the given slopes.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> f, std::vector<double> d);
  // Slopes from three-point estimates followed by the Hyman filter.
  static MonotoneCubic from_data(std::vector<double> x, std::vector<double> f);

  double operator()(double s) const;
  double slope(double s) const;
  // Solves value(s) = target on the bracketing piece of increasing data.
  double invert(double target) const;

  const std::vector<double>& nodes() const noexcept { return x_; }

 private:
  std::vector<double> x_;
  std::vector<double> f_;
  std::vector<double> d_;
};

// Integral over [s1, s0] (0 < s1 < s0) of g(s)/s^p for p in {1, 2}, where g is
// linear in s with g(s0) = g0 and g(s1) = g1.
double product_integral(double s0, double s1, double g0, double g1, int p);

}  // namespace prandtl_lab
