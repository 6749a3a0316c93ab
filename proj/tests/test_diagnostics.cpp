#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/errors.hpp"

using namespace prandtl_lab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field sample(const Grid2D& g, double (*f)(double, double)) {
  Field out = g.make_field();
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j) out(i, j) = f(g.x.node(i), g.y.node(j));
  return out;
}

}  // namespace

TEST_CASE("blow-up functional of the pure shear is three") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 128, 10.0, 256);
  const PrandtlState s = make_state(g, shear_exp(g.y), g.make_field());
  CHECK(std::abs(blowup_functional_instant(s).value - 3.0) <= 5e-3);
}

TEST_CASE("weighted L2 closed form") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 128, 10.0, 256);
  const Field f = sample(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
  // int sin^2 = pi, int_0^10 e^{y} e^{-2y} = 1 - e^{-10}.
  CHECK(std::abs(weighted_l2_sq(g, f, WeightSpec::mu()) - std::numbers::pi * (1.0 - std::exp(-10.0))) <=
        1e-6);
}

TEST_CASE("weighted norm properties") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 64, 10.0, 256);
  const Field f = sample(g, [](double x, double y) { return std::sin(x) * y * std::exp(-y); });
  const auto mu = WeightSpec::mu();
  CHECK(weighted_norm(g, g.make_field(), 2, 1, mu) == 0.0);
  CHECK(weighted_norm(g, 3.0 * f, 2, 1, mu) == doctest::Approx(3.0 * weighted_norm(g, f, 2, 1, mu)));
  CHECK(weighted_norm_sq(g, f, 2, 1, mu) >= weighted_norm_sq(g, f, 1, 1, mu));
  CHECK(weighted_norm_sq(g, f, 1, 2, mu) >= weighted_norm_sq(g, f, 1, 1, mu));
  // Order (0, 0) is the plain weighted L2 norm.
  CHECK(weighted_norm_sq(g, f, 0, 0, mu) == doctest::Approx(weighted_l2_sq(g, f, mu)));
  // sin(x): the x-derivative doubles the sum at k = 1.
  const Field s = sample(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
  CHECK(weighted_norm_sq(g, s, 1, 0, mu) == doctest::Approx(2.0 * weighted_l2_sq(g, s, mu)).epsilon(1e-9));
}

TEST_CASE("interpolation inequality ratio") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 128, 10.0, 256);
  const Field f = sample(g, [](double x, double y) { return std::sin(x) * y * std::exp(-y); });
  CHECK(interpolation_ratio(g, f, 1, 1) <= 1.05);
  CHECK(interpolation_ratio(g, f, 2, 1) <= 1.05);
}

TEST_CASE("verdicts") {
  const CriterionConfig cfg;
  CHECK(criterion_verdict(0.5, 2.0, 3.0, 1.0, cfg).label() == "healthy");
  CHECK(criterion_verdict(0.01, 2.0, 3.0, 1.0, cfg).label() == "monotonicity_lost");
  CHECK(criterion_verdict(0.5, 20.0, 3.0, 1.0, cfg).label() == "criterion_tripped:upper_envelope");
  CHECK(criterion_verdict(0.5, 2.0, 300.0, 1.0, cfg).label() == "criterion_tripped:A");
  CHECK(criterion_verdict(0.5, 2.0, 3.0, 50.0, cfg).label() == "criterion_tripped:curvature");
  CHECK(criterion_verdict(NAN, 2.0, 3.0, 1.0, cfg).label() == "monotonicity_lost");
}

TEST_CASE("shear-only diagnostics vanish and Gronwall is undefined") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 32, 10.0, 128);
  DiagnosticsObserver obs(build_filterbank(32, kTwoPi), CriterionConfig{});
  RunOptions o;
  o.t_end = 0.2;
  o.dt = 1e-3;
  o.observer_interval = 0.05;
  run(make_state(g, shear_exp(g.y), g.make_field()), o, [&](const PrandtlState& s) { obs.observe(s); });
  REQUIRE(obs.reports().size() == 5);
  for (const auto& r : obs.reports()) {
    CHECK(r.E == 0.0);
    CHECK(r.calE == 0.0);
    CHECK(r.calD == 0.0);
    CHECK(r.verdict.label() == "healthy");
  }
  for (const auto& p : gronwall_monitor(obs.reports())) CHECK_FALSE(p.defined);
}

TEST_CASE("curvature spike trips the curvature criterion") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 64, 10.0, 256);
  DiagnosticsObserver obs(build_filterbank(64, kTwoPi), CriterionConfig{});
  const auto r = obs.observe(
      make_state(g, shear_exp(g.y), make_perturbation(PerturbationKind::curvature_spike, g, 0.1)));
  CHECK(r.verdict.label() == "criterion_tripped:curvature");
}

TEST_CASE("destabilised run is flagged by Gronwall before it breaks down") {
  const Grid2D g = Grid2D::uniform(kTwoPi, 32, 10.0, 128);
  const Forcing push = [](double, const PrandtlState& s, Field& G) { G = 40.0 * s.utilde; };
  DiagnosticsObserver obs(build_filterbank(32, kTwoPi), CriterionConfig{}, push);
  RunOptions o;
  o.t_end = 1.0;
  o.dt = 1e-3;
  o.observer_interval = 0.01;
  o.step.forcing = push;
  try {
    run(make_state(g, shear_exp(g.y), make_perturbation(PerturbationKind::sine, g, 0.01)), o,
        [&](const PrandtlState& s) { obs.observe(s); });
  } catch (const SolverDiverged&) {
  }
  const auto pts = gronwall_monitor(obs.reports());
  std::size_t first = pts.size();
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (pts[k].flagged) {
      first = k;
      break;
    }
  REQUIRE(first < pts.size());
  CHECK(std::isfinite(obs.reports()[first].calE));
  CHECK(std::isfinite(obs.reports()[first].E));
}
