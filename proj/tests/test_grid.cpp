#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/grid.hpp"
#include "prandtl_lab/spectral.hpp"

using namespace prandtl_lab;

namespace {

Field sample(const Grid2D& g, double (*f)(double, double)) {
  Field out = g.make_field();
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j) out(i, j) = f(g.x.node(i), g.y.node(j));
  return out;
}

double max_diff(const Grid2D& g, const Field& a, double (*f)(double, double), std::size_t lo = 0,
                std::size_t hi_off = 0) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = lo; j + hi_off < g.y.size(); ++j)
      e = std::max(e, std::abs(a(i, j) - f(g.x.node(i), g.y.node(j))));
  return e;
}

}  // namespace

TEST_CASE("spectral x-derivative of sin is cos") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 64, 1.0, 4);
  const Field f = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_diff(g, d_x(g, f), [](double x, double) { return std::cos(x); }) <= 1e-12);
  CHECK(max_diff(g, d_xx(g, f), [](double x, double) { return -std::sin(x); }) <= 1e-12);
}

TEST_CASE("second y-derivative of y^2 is 2 including boundary stencils") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 8, 3.0, 30);
  const Field f = sample(g, [](double, double y) { return y * y; });
  CHECK(max_diff(g, d_yy(g, f), [](double, double) { return 2.0; }) <= 1e-9);
  CHECK(max_diff(g, d_y(g, f), [](double, double y) { return 2.0 * y; }) <= 1e-10);
}

TEST_CASE("first y-derivative converges at second order") {
  const auto err = [](std::size_t ny) {
    const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 8, 2.0, ny);
    const Field f = sample(g, [](double, double y) { return std::sin(3.0 * y); });
    return max_diff(g, d_y(g, f), [](double, double y) { return 3.0 * std::cos(3.0 * y); });
  };
  const double ratio = err(64) / err(128);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("cumulative integral of one is y and vanishes at the wall") {
  const Grid2D g = Grid2D::uniform(1.0, 8, 5.0, 50);
  const Field one = g.make_field("one", 1.0);
  const Field c = cumulative_integral_y(g, one);
  CHECK(max_diff(g, c, [](double, double y) { return y; }) <= 1e-13);
}

TEST_CASE("non-uniform nodes keep exactness for quadratics") {
  std::vector<double> nodes;
  for (int j = 0; j <= 40; ++j) nodes.push_back(std::pow(j / 40.0, 1.5) * 4.0);
  const Grid2D g = Grid2D::with_nodes(1.0, 8, nodes);
  const Field f = sample(g, [](double, double y) { return 1.0 + y + y * y; });
  CHECK(max_diff(g, d_y(g, f), [](double, double y) { return 1.0 + 2.0 * y; }) <= 1e-9);
  CHECK(max_diff(g, d_yy(g, f), [](double, double) { return 2.0; }) <= 1e-7);
}

TEST_CASE("tridiagonal solve matches a hand-checked system") {
  std::vector<double> sub{0, 1, 1}, diag{4, 4, 4}, sup{1, 1, 0}, rhs{5, 6, 5};
  solve_tridiagonal(sub, diag, sup, rhs);
  for (double v : rhs) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fd weights reproduce the classic central stencil") {
  const double x[] = {-1.0, 0.0, 1.0};
  const auto w = fd_weights(0.0, x, 2);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-2.0));
  CHECK(w[2] == doctest::Approx(1.0));
}

TEST_CASE("trigonometric interpolation is exact for band-limited rows") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 32, 1.0, 8);
  const Field f = sample(g, [](double x, double) { return std::sin(2.0 * x) + 0.5 * std::cos(x); });
  const FourierField spec = forward_fft(f);
  for (double s : {0.1, 1.3, 4.0, 6.1})
    CHECK(trig_interpolate(spec, g.Lx(), 0, s) ==
          doctest::Approx(std::sin(2.0 * s) + 0.5 * std::cos(s)).epsilon(1e-12));
  const Field back = inverse_fft(spec);
  CHECK((back - f).max_abs() <= 1e-14);
}
