#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prandtl_lab/barriers.hpp"
#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/spectral.hpp"

using namespace prandtl_lab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CroccoTrajectory shear_trajectory(double t_end) {
  const Grid2D g = Grid2D::uniform(kTwoPi, 32, 10.0, 256);
  const PrandtlState s = make_state(g, shear_exp(g.y), g.make_field());
  CroccoTrajectory traj;
  crocco_run(to_crocco(s, crocco_grid_for(g, 128)), t_end, 1e-3, 0.1,
             [&](const CroccoState& c) { traj.push_back(c); });
  return traj;
}

CroccoState synthetic(const CroccoGrid& g, double t, double (*w)(double, double)) {
  Field f = g.make_field();
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k) f(i, k) = w(g.eta.node(k), g.xi.node(i));
  return make_crocco_state(g, std::move(f), t);
}

}  // namespace

TEST_CASE("discrete operator is exact on quadratics in eta") {
  const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 16, 64);
  Field f = g.make_field(), w = g.make_field();
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k) {
      const double eta = g.eta.node(k);
      f(i, k) = eta * eta;
      w(i, k) = 1.0 - 0.5 * eta;
    }
  const Field L = discrete_operator_L(f, f, w, 1e-3, g);
  for (std::size_t k = 1; k + 1 < g.eta.size(); ++k) {
    const double eta = g.eta.node(k);
    CHECK(L(3, k) == doctest::Approx(2.0 * (1.0 - 0.5 * eta) * (1.0 - 0.5 * eta)).epsilon(1e-10));
  }
}

TEST_CASE("barrier candidates carry consistent derivatives") {
  const BarrierCandidate up = upper_candidate(0.01, 1.1);
  const BarrierCandidate lo = lower_candidate(0.05, 4.0, 0.01);
  const double h = 1e-5;
  for (const auto* c : {&up, &lo})
    for (double eta : {0.1, 0.4, 0.8})
      for (double t : {0.2, 0.7}) {
        const double xi = 1.0;
        CHECK(c->d_eta(eta, xi, t) ==
              doctest::Approx((c->value(eta + h, xi, t) - c->value(eta - h, xi, t)) / (2 * h)).epsilon(1e-6));
        CHECK(c->d_etaeta(eta, xi, t) ==
              doctest::Approx((c->value(eta + h, xi, t) - 2 * c->value(eta, xi, t) +
                               c->value(eta - h, xi, t)) / (h * h)).epsilon(1e-4));
        CHECK(c->d_t(eta, xi, t) ==
              doctest::Approx((c->value(eta, xi, t + h) - c->value(eta, xi, t - h)) / (2 * h)).epsilon(1e-6));
      }
}

TEST_CASE("sine bound pre-check and envelope") {
  const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 8, 128);
  double worst = -1.0;
  CHECK(sine_bound_precheck(g.eta, &worst));
  CHECK(worst >= 0.0);
  const auto [c, C] = crocco_envelope(synthetic(g, 0.0, [](double eta, double) { return 2.0 * (1.0 - eta); }));
  CHECK(c == doctest::Approx(2.0));
  CHECK(C == doctest::Approx(2.0));
}

TEST_CASE("comparison constants") {
  const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 8, 128);
  CHECK_THROWS_WITH_AS(prop_4_1_constants(0.9, 1.1, 0.95, 1.0, g.eta),
                       doctest::Contains("inadmissible initial envelope"), InadmissibleEnvelope);
  double prev = 1.0;
  for (double T : {0.25, 0.5, 1.0, 2.0}) {
    const Prop41Constants k = prop_4_1_constants(0.9, 1.1, 0.01, T, g.eta);
    CHECK(k.c1 < prev);
    CHECK(k.c1 == doctest::Approx(k.alpha * std::exp(-k.beta * T)));
    CHECK(k.alpha == doctest::Approx((0.9 - 0.01) / (2.0 * std::exp(std::numbers::pi / 2) * std::numbers::pi / 2)));
    prev = k.c1;
  }
}

TEST_CASE("shear-in-Crocco comparison audit") {
  const CroccoTrajectory traj = shear_trajectory(1.0);
  const Prop41Result r = audit_prop_4_1(traj, 0.01);
  CHECK(r.identity_max_rel_error <= 1e-6);
  CHECK(r.upper.passed());
  CHECK(r.lower.passed());
  CHECK(r.direct_upper_pass);
  CHECK(r.direct_lower_pass);
  // Independent direct check of the lower bound.
  bool ok = true;
  for (const auto& c : traj)
    for (std::size_t i = 0; i < c.grid.Nxi(); ++i)
      for (std::size_t k = 0; k < c.grid.eta.size(); ++k)
        ok = ok && c.w(i, k) >= r.c1 * (1.0 - c.grid.eta.node(k)) - 1e-14;
  CHECK(ok);
}

TEST_CASE("gradient barrier passes for the shear and respects the curvature gate") {
  const CroccoTrajectory traj = shear_trajectory(1.0);
  BernsteinOptions opt;
  CHECK(audit_lemma_5_5_5_6(traj, opt).audit.passed());
  opt.curvature_bound = 0.01;
  const BernsteinReport gated = audit_lemma_5_5_5_6(traj, opt);
  CHECK_FALSE(gated.audit.applicable);
}

TEST_CASE("eta^3 monitor") {
  const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 64, 256);
  CroccoTrajectory flat, ripple;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    flat.push_back(synthetic(g, t, [](double eta, double) { return 1.0 - eta; }));
    ripple.push_back(synthetic(g, t, [](double eta, double xi) {
      return (1.0 - eta) + 0.1 * std::pow(eta, 4) * std::sin(3.0 * xi) * (1.0 - eta);
    }));
  }
  CHECK(eta3_monitor(flat, 0.2, 1.0).constant <= 1e-14);
  // Designed value: max over region nodes of a k eta^7 (1 - eta), attained at xi = 0.
  double designed = 0.0;
  for (std::size_t k = 0; k < g.eta.size(); ++k) {
    const double eta = g.eta.node(k);
    if (eta < 0.75 * 0.2) designed = std::max(designed, 0.1 * 3.0 * std::pow(eta, 7) * (1.0 - eta));
  }
  CHECK(eta3_monitor(ripple, 0.2, 1.0).constant == doctest::Approx(designed).epsilon(0.1));
}

TEST_CASE("Holder modulus of a synthetic ripple") {
  const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 128, 128);
  const CroccoState c = synthetic(g, 1.0, [](double eta, double xi) {
    return (1.0 - eta) * (1.0 + 0.1 * std::sin(xi));
  });
  const double eta0 = 0.5, xi0 = 0.3;
  const HolderReport h = audit_lemma_5_3(c, eta0, xi0, 1.0);
  const double window = (1.0 - h.eta0) * (1.0 - h.eta0) / 2.0;
  double analytic = 0.0;
  for (int n = 1; n <= 200000; ++n) {
    const double d = window * n / 200000.0;
    analytic = std::max(analytic, 0.1 * std::abs(std::sin(xi0 + d) - std::sin(xi0)) / std::sqrt(d));
  }
  CHECK(h.C_sqrt == doctest::Approx(analytic).epsilon(0.05));
  CHECK(h.consistent);
  CHECK_THROWS_AS(audit_lemma_5_3(synthetic(g, 0.1, [](double eta, double) { return 1.0 - eta; }), eta0,
                                  xi0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("cut-off function") {
  const double T = 1.0;
  CHECK(zeta_cutoff(0.2, -0.1, T).value == doctest::Approx(1.0));
  CHECK(zeta_cutoff(0.8, -0.1, T).value == 0.0);
  CHECK(zeta_cutoff(0.2, -0.5, T).value == 0.0);
  const double h = 1e-6;
  for (double xi : {-0.6, 0.55, 0.7})
    for (double t : {-0.3, -0.1}) {
      const Cutoff z = zeta_cutoff(xi, t, T);
      CHECK(z.d_xi == doctest::Approx((zeta_cutoff(xi + h, t, T).value - zeta_cutoff(xi - h, t, T).value) /
                                      (2 * h)).epsilon(1e-5));
      CHECK(z.d_t == doctest::Approx((zeta_cutoff(xi, t + h, T).value - zeta_cutoff(xi, t - h, T).value) /
                                     (2 * h)).epsilon(1e-5));
    }
  CHECK(smooth_step(-0.1) == 0.0);
  CHECK(smooth_step(1.1) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("kinetic cube against a mapped lattice") {
  const double x0 = 0.3, v0 = 0.7, t0 = 1.0, r = 0.5;
  const double r3 = r * r * r;
  // Interior lattice of the sheared box maps inside; points pushed past a face map outside.
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = 0; c < 5; ++c) {
        const double da = 0.95 * r3 * a / 4.0, db = 0.95 * r * b / 4.0, s = -0.95 * r * r * c / 4.0;
        const double x = x0 + da + s * v0, v = v0 + db, t = t0 + s;
        CHECK(in_kinetic_cube(x, v, t, x0, v0, t0, r));
        CHECK_FALSE(in_kinetic_cube(x + 2.0 * r3, v, t, x0, v0, t0, r));
        CHECK_FALSE(in_kinetic_cube(x, v0 + (b < 0 ? -1.05 : 1.05) * r, t, x0, v0, t0, r));
      }
  CHECK_FALSE(in_kinetic_cube(x0, v0, t0 + 0.01, x0, v0, t0, r));
  CHECK_FALSE(in_kinetic_cube(x0, v0, t0 - r * r, x0, v0, t0, r));
}
