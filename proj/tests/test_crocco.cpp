#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/crocco.hpp"
#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/interp.hpp"

using namespace prandtl_lab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PrandtlState shear_state(std::size_t nx, std::size_t ny, double ymax = 10.0) {
  const Grid2D g = Grid2D::uniform(kTwoPi, nx, ymax, ny);
  return make_state(g, shear_exp(g.y), g.make_field());
}

PrandtlState default_state(std::size_t nx = 64, std::size_t ny = 256) {
  const Grid2D g = Grid2D::uniform(kTwoPi, nx, 10.0, ny);
  return make_state(g, shear_exp(g.y), make_perturbation(PerturbationKind::sine, g, 0.1));
}

}  // namespace

TEST_CASE("shear maps to w = 1 - eta") {
  const PrandtlState s = shear_state(8, 8192);
  const CroccoState c = to_crocco(s, crocco_grid_for(s.grid, 256));
  const double top = 1.0 - std::exp(-10.0);
  double e = 0.0;
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i)
    for (std::size_t k = 0; k < c.grid.eta.size(); ++k) {
      const double eta = c.grid.eta.node(k);
      if (eta > top) continue;
      e = std::max(e, std::abs(c.w(i, k) - (1.0 - eta)));
    }
  CHECK(e <= 1e-6);
}

TEST_CASE("linear profile maps to a constant w") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 8, 10.0, 200);
  const PrandtlState s = make_state(g, shear_linear(g.y), g.make_field());
  const CroccoState c = to_crocco(s, crocco_grid_for(g, 64));
  for (std::size_t k = 0; k + 1 < c.grid.eta.size(); ++k)
    CHECK(c.w(0, k) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("envelope of default data") {
  const PrandtlState s = default_state();
  const CroccoState c = to_crocco(s, crocco_grid_for(s.grid, 256));
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i)
    for (std::size_t k = 0; k + 1 < c.grid.eta.size(); ++k) {
      const double r = c.w(i, k) / (1.0 - c.grid.eta.node(k));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  CHECK(lo >= 0.6);
  CHECK(hi <= 1.4);
}

TEST_CASE("non-monotone column is rejected") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 16, 10.0, 128);
  const PrandtlState s =
      make_state(g, shear_exp(g.y), make_perturbation(PerturbationKind::non_monotone, g, 1.5));
  CHECK_THROWS_WITH_AS(to_crocco(s, crocco_grid_for(g, 64)),
                       doctest::Contains("Crocco transform undefined"), CroccoUndefined);
}

TEST_CASE("inverse transform recovers u") {
  const PrandtlState sh = shear_state(8, 1024);
  const CroccoState c = to_crocco(sh, crocco_grid_for(sh.grid, 256));
  CHECK((from_crocco(c, sh.grid) - sh.u).max_abs() <= 1e-5);

  const PrandtlState s = default_state();
  const CroccoState cd = to_crocco(s, crocco_grid_for(s.grid, 256));
  CHECK((from_crocco(cd, s.grid) - s.u).max_abs() <= 1e-4);
}

TEST_CASE("Crocco evolution of the shear matches the physical solver") {
  const PrandtlState s = shear_state(16, 256);
  const CroccoGrid cg = crocco_grid_for(s.grid, 256);
  RunOptions opt;
  opt.t_end = 0.5;
  opt.dt = 1e-3;
  const CroccoState a = to_crocco(run(s, opt), cg);
  const CroccoState b = crocco_run(to_crocco(s, cg), 0.5, 1e-3, 0.0);
  double e = 0.0, spread = 0.0;
  for (std::size_t k = 0; k < cg.eta.size(); ++k) {
    if (cg.eta.node(k) > 0.9) continue;
    for (std::size_t i = 0; i < cg.Nxi(); ++i) {
      e = std::max(e, std::abs(a.w(i, k) - b.w(i, k)));
      spread = std::max(spread, std::abs(b.w(i, k) - b.w(0, k)));
    }
  }
  CHECK(e <= 2e-3);
  CHECK(spread <= 1e-12);
}

TEST_CASE("reconstructed d_x u matches the physical field") {
  const PrandtlState s = default_state(64, 512);
  const CroccoState c = to_crocco(s, crocco_grid_for(s.grid, 256));
  const CroccoDerivatives d = reconstruct_physical_derivatives(c);
  const auto& ys = s.grid.y.nodes();
  double e = 0.0;
  for (std::size_t i = 0; i < c.grid.Nxi(); i += 4) {
    std::vector<double> u(ys.size()), ux(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
      u[j] = s.u(i, j);
      ux[j] = s.ux(i, j);
    }
    for (std::size_t k = 1; k < c.grid.eta.size(); ++k) {
      const double eta = c.grid.eta.node(k);
      if (eta > 0.9) break;
      // Physical height of the level set by bisection on the sampled column.
      std::size_t j = 0;
      while (u[j + 1] < eta) ++j;
      const double r = (eta - u[j]) / (u[j + 1] - u[j]);
      const double ux_phys = ux[j] + r * (ux[j + 1] - ux[j]);
      e = std::max(e, std::abs(d.ux(i, k) - ux_phys));
    }
  }
  CHECK(e <= 1e-2);
}
