#include "prandtl_lab/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prandtl_lab/grid.hpp"

namespace prandtl_lab {

double hermite_value(double x0, double x1, double f0, double f1, double d0, double d1,
                     double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * d1;
}

double hermite_slope(double x0, double x1, double f0, double f1, double d0, double d1,
                     double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (-6 * t2 + 6 * t) * f1) / h + (3 * t2 - 4 * t + 1) * d0 +
         (3 * t2 - 2 * t) * d1;
}

std::vector<double> three_point_slopes(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("need at least three nodes");
  std::vector<double> d(n);
  auto three = [&](std::size_t a, double at) {
    const double x0 = x[a], x1 = x[a + 1], x2 = x[a + 2];
    const double l0 = (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
    return l0 * f[a] + l1 * f[a + 1] + l2 * f[a + 2];
  };
  d[0] = three(0, x[0]);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = three(j - 1, x[j]);
  d[n - 1] = three(n - 3, x[n - 1]);
  return d;
}

std::vector<double> five_point_slopes(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (n < 5) throw std::invalid_argument("need at least five nodes");
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t start = std::min(j < 2 ? 0 : j - 2, n - 5);
    const auto w = fd_weights(x[j], x.subspan(start, 5), 1);
    double acc = 0.0;
    for (std::size_t q = 0; q < 5; ++q) acc += w[q] * f[start + q];
    d[j] = acc;
  }
  return d;
}

void hyman_filter(std::span<const double> x, std::span<const double> f, std::span<double> d) {
  const std::size_t n = x.size();
  std::vector<double> secant(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) secant[j] = (f[j + 1] - f[j]) / (x[j + 1] - x[j]);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? secant[j - 1] : secant[0];
    const double right = j + 1 < n ? secant[j] : secant[n - 2];
    if (left * right <= 0.0) {
      if (j > 0 && j + 1 < n) d[j] = 0.0;
      else if (d[j] * (j > 0 ? left : right) < 0.0) d[j] = 0.0;
      continue;
    }
    const double bound = 3.0 * std::min(std::abs(left), std::abs(right));
    const double sgn = left > 0 ? 1.0 : -1.0;
    if (d[j] * sgn < 0.0) d[j] = 0.0;
    else if (std::abs(d[j]) > bound) d[j] = sgn * bound;
  }
}

std::size_t bracket(std::span<const double> x, double s) {
  const std::size_t n = x.size();
  if (s <= x[0]) return 0;
  if (s >= x[n - 1]) return n - 2;
  const auto it = std::upper_bound(x.begin(), x.end(), s);
  return static_cast<std::size_t>(it - x.begin()) - 1;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> f, std::vector<double> d)
    : x_(std::move(x)), f_(std::move(f)), d_(std::move(d)) {
  if (x_.size() < 2 || f_.size() != x_.size() || d_.size() != x_.size())
    throw std::invalid_argument("interpolant data size mismatch");
}

MonotoneCubic MonotoneCubic::from_data(std::vector<double> x, std::vector<double> f) {
  auto d = three_point_slopes(x, f);
  hyman_filter(x, f, d);
  return MonotoneCubic(std::move(x), std::move(f), std::move(d));
}

double MonotoneCubic::operator()(double s) const {
  const std::size_t j = bracket(x_, s);
  return hermite_value(x_[j], x_[j + 1], f_[j], f_[j + 1], d_[j], d_[j + 1], s);
}

double MonotoneCubic::slope(double s) const {
  const std::size_t j = bracket(x_, s);
  return hermite_slope(x_[j], x_[j + 1], f_[j], f_[j + 1], d_[j], d_[j + 1], s);
}

double MonotoneCubic::invert(double target) const {
  const std::size_t j = bracket(f_, target);
  double lo = x_[j], hi = x_[j + 1];
  double s = lo + (hi - lo) * (target - f_[j]) / (f_[j + 1] - f_[j]);
  s = std::clamp(s, lo, hi);
  for (int it = 0; it < 60; ++it) {
    const double r = hermite_value(x_[j], x_[j + 1], f_[j], f_[j + 1], d_[j], d_[j + 1], s) - target;
    if (r > 0) hi = s;
    else lo = s;
    const double g = hermite_slope(x_[j], x_[j + 1], f_[j], f_[j + 1], d_[j], d_[j + 1], s);
    double next = g > 0 ? s - r / g : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s))) return next;
    s = next;
  }
  return s;
}

double product_integral(double s0, double s1, double g0, double g1, int p) {
  const double slope = (g0 - g1) / (s0 - s1);
  const double intercept = g0 - slope * s0;
  if (p == 1) return intercept * std::log(s0 / s1) + slope * (s0 - s1);
  if (p == 2) return intercept * (1.0 / s1 - 1.0 / s0) + slope * std::log(s0 / s1);
  throw std::invalid_argument("product_integral power must be 1 or 2");
}

}  // namespace prandtl_lab
