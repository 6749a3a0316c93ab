#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/prandtl_solver.hpp"
#include "prandtl_lab/shear_flow.hpp"

using namespace prandtl_lab;

namespace {

double erf_error(std::size_t ny, double dt) {
  const NormalAxis y = NormalAxis::uniform(0.0, 10.0, ny);
  ShearProfile p = shear_erf(y, 0.25);
  const long steps = std::lround(0.5 / dt);
  for (long k = 0; k < steps; ++k) p = shear_step(y, p, dt);
  double e = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    e = std::max(e, std::abs(p.values[j] - std::erf(y.node(j) / (2.0 * std::sqrt(0.75)))));
  return e;
}

// Half-line heat kernel with odd reflection applied to the unit step.
double heat_kernel_step(double y, double t) {
  const int n = 20000;
  const double zmax = y + 40.0 * std::sqrt(t);
  const double h = zmax / n;
  const auto g = [&](double z) {
    const double a = std::exp(-(y - z) * (y - z) / (4.0 * t));
    const double b = std::exp(-(y + z) * (y + z) / (4.0 * t));
    return (a - b) / std::sqrt(4.0 * std::numbers::pi * t);
  };
  double s = g(0.0) + g(zmax);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * g(k * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("erf shear matches the closed form and converges at second order") {
  const double coarse = erf_error(256, 1e-3);
  const double fine = erf_error(512, 5e-4);
  CHECK(coarse <= 1e-4);
  CHECK(coarse / fine >= 3.5);
}

TEST_CASE("erf shear value agrees with heat-kernel quadrature") {
  for (double y : {0.1, 0.5, 1.0, 2.5})
    for (double t : {0.25, 0.8})
      CHECK(std::abs(erf_shear_value(y, t) - heat_kernel_step(y, t)) <= 1e-4);
}

TEST_CASE("linear ramp is a steady state of the shear step") {
  const NormalAxis y = NormalAxis::uniform(0.0, 10.0, 100);
  ShearProfile p = shear_linear(y);
  const auto v0 = p.values;
  for (int k = 0; k < 50; ++k) p = shear_step(y, p, 1e-2);
  for (std::size_t j = 0; j < y.size(); ++j) CHECK(p.values[j] == doctest::Approx(v0[j]).epsilon(1e-12));
}

TEST_CASE("shear decay constants") {
  const NormalAxis y = NormalAxis::uniform(0.0, 10.0, 2000);
  const ShearDecay d = verify_shear_decay(y, shear_exp(y));
  CHECK(d.C0 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(d.C1 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(d.C2 == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_FALSE(d.violated);
  CHECK(verify_shear_decay(y, shear_linear(y)).violated);
}

TEST_CASE("admissible data checks") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 64, 10.0, 256);
  const ShearProfile sh = shear_exp(g.y);
  const AdmissibleDataReport ok = validate_data(g, make_perturbation(PerturbationKind::sine, g, 0.1), sh);
  CHECK(ok.pass);
  CHECK(ok.c_mono > 0.6);
  const AdmissibleDataReport bad =
      validate_data(g, make_perturbation(PerturbationKind::non_monotone, g, 1.5), sh);
  CHECK_FALSE(bad.pass);
  CHECK(bad.c_mono < 0.0);
}

TEST_CASE("zero perturbation stays zero and t_end = 0 observes once") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 32, 10.0, 128);
  const PrandtlState s0 = make_state(g, shear_exp(g.y), g.make_field());
  RunOptions opt;
  opt.t_end = 0.1;
  opt.dt = 1e-3;
  const PrandtlState s1 = run(s0, opt);
  CHECK(s1.utilde.max_abs() == 0.0);
  CHECK(s1.t == doctest::Approx(0.1));

  opt.t_end = 0.0;
  int calls = 0;
  run(s0, opt, [&](const PrandtlState&) { ++calls; });
  CHECK(calls == 1);
}

TEST_CASE("manufactured solution converges") {
  const auto mms = [](std::size_t nx, std::size_t ny, double dt) {
    const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, nx, 10.0, ny);
    const auto ex = [](double t, double x, double y) {
      return std::exp(-t) * std::sin(x) * (std::exp(-y) - std::exp(-2.0 * y));
    };
    Field u0 = g.make_field();
    for (std::size_t i = 0; i < g.Nx(); ++i)
      for (std::size_t j = 0; j + 1 < g.y.size(); ++j) u0(i, j) = ex(0.0, g.x.node(i), g.y.node(j));
    RunOptions o;
    o.t_end = 0.5;
    o.dt = dt;
    o.step.forcing = [&](double t, const PrandtlState& st, Field& G) {
      for (std::size_t i = 0; i < g.Nx(); ++i)
        for (std::size_t j = 0; j < g.y.size(); ++j) {
          const double x = g.x.node(i), y = g.y.node(j), E = std::exp(-t);
          const double ey = std::exp(-y), e2y = std::exp(-2.0 * y);
          const double um = ex(t, x, y);
          const double umx = E * std::cos(x) * (ey - e2y);
          const double umy = E * std::sin(x) * (-ey + 2.0 * e2y);
          const double umyy = E * std::sin(x) * (ey - 4.0 * e2y);
          const double vm = -E * std::cos(x) * ((1.0 - ey) - 0.5 * (1.0 - e2y));
          G(i, j) = -um + (st.shear.values[j] + um) * umx + vm * (st.shear.d1[j] + umy) - umyy;
        }
    };
    const PrandtlState s1 = run(make_state(g, shear_exp(g.y), u0), o);
    double e = 0.0;
    for (std::size_t i = 0; i < g.Nx(); ++i)
      for (std::size_t j = 0; j < g.y.size(); ++j)
        e = std::max(e, std::abs(s1.utilde(i, j) - ex(0.5, g.x.node(i), g.y.node(j))));
    return e;
  };
  const double coarse = mms(32, 128, 2e-3);
  const double fine = mms(64, 256, 1e-3);
  CHECK(fine <= 5e-3);
  CHECK(coarse / fine >= 2.0);
}

TEST_CASE("oversized time step is rejected") {
  const Grid2D g = Grid2D::uniform(2.0 * std::numbers::pi, 128, 10.0, 64);
  const PrandtlState s0 = make_state(g, shear_exp(g.y), make_perturbation(PerturbationKind::sine, g, 0.1));
  CHECK_THROWS_AS(prandtl_step(s0, 10.0), std::domain_error);
}
