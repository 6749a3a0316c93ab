#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/paraproduct.hpp"

using namespace prandtl_lab;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("filterbank size and partition of unity") {
  CHECK(build_filterbank(16, kTwoPi).j_max == 2);
  const DyadicFilterBank b = build_filterbank(128, kTwoPi);
  CHECK(b.partition_residual() <= 1e-14);
  // Independent sum of the multipliers per mode.
  for (std::size_t k = 0; k <= 64; ++k) {
    double s = 0.0;
    for (const auto& m : b.multipliers) s += m[k];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Bony decomposition is exact on seeded pairs") {
  const DyadicFilterBank b = build_filterbank(128, kTwoPi);
  for (std::uint64_t p = 0; p < 50; ++p) {
    const Field f = random_band_limited(128, 1000 + 2 * p);
    const Field g = random_band_limited(128, 1001 + 2 * p);
    Field prod(128, 1);
    for (std::size_t i = 0; i < 128; ++i) prod(i, 0) = f(i, 0) * g(i, 0);
    const Field sum = paraproduct_T(b, f, g) + remainder_R(b, g, f);
    CHECK((sum - prod).max_abs() <= 1e-12 * prod.max_abs());
  }
}

TEST_CASE("paraproduct by a constant is multiplication") {
  const DyadicFilterBank b = build_filterbank(64, kTwoPi);
  const Field g = random_band_limited(64, 7);
  Field c(64, 1, "c", 2.5);
  CHECK((paraproduct_T(b, c, g) - 2.5 * g).max_abs() <= 1e-12);
}

TEST_CASE("random fields are seeded") {
  CHECK((random_band_limited(64, 3) - random_band_limited(64, 3)).max_abs() == 0.0);
  CHECK((random_band_limited(64, 3) - random_band_limited(64, 4)).max_abs() > 0.0);
}

TEST_CASE("paraproduct monitors stay bounded") {
  const DyadicFilterBank b = build_filterbank(128, kTwoPi);
  const RatioSweep s1 = lemma_2_1_monitor(b, 11, 10);
  REQUIRE(s1.orders.size() == 4);
  for (double r : s1.max_ratio) {
    CHECK(std::isfinite(r));
    CHECK(r < 10.0);
  }
  const RatioSweep s2 = lemma_2_2_monitor(b, 11, 10);
  for (double r : s2.max_ratio) CHECK(std::isfinite(r));
}

namespace {

struct Probe {
  double residual;
  double f1_wall;
  double reconstruction;
};

Probe probe(std::size_t nx, std::size_t ny, double dt, double eps) {
  const Grid2D g = Grid2D::uniform(kTwoPi, nx, 10.0, ny);
  const DyadicFilterBank bank = build_filterbank(nx, kTwoPi);
  PrandtlState s = make_state(
      g, shear_exp(g.y),
      make_perturbation(eps > 0.0 ? PerturbationKind::sine : PerturbationKind::none, g, eps));
  RunOptions o;
  o.t_end = 0.1 - dt;
  o.dt = dt;
  s = run(s, o);
  const PrandtlState s1 = prandtl_step(s, dt);
  const PrandtlState s2 = prandtl_step(s1, dt);
  const ResidualReport r = verify_good_unknown_equation(s, s1, s2, bank);
  const GoodUnknownBundle b = build_good_unknown(s1, bank);
  double f1 = 0.0;
  for (std::size_t i = 0; i < nx; ++i) f1 = std::max(f1, std::abs(b.F1(i, 0)));
  return {r.max_norm, f1, good_unknown_reconstruction_error(s1, b, bank)};
}

}  // namespace

TEST_CASE("good unknown: residual, wall source and reconstruction") {
  const Probe coarse = probe(128, 256, 1e-3, 0.1);
  const Probe fine = probe(256, 512, 5e-4, 0.1);
  CHECK(coarse.residual / fine.residual >= 1.5);
  CHECK(coarse.f1_wall <= 1e-3);
  // The identity holds up to the second-order y-quadrature of the good unknown.
  CHECK(coarse.reconstruction <= 1e-5);
  CHECK(coarse.reconstruction / fine.reconstruction >= 3.0);
  CHECK(probe(128, 256, 1e-3, 0.0).residual <= 1e-10);
}
