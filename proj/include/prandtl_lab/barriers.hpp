#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "prandtl_lab/crocco.hpp"
#include "prandtl_lab/grid.hpp"

namespace prandtl_lab {

// Observer snapshots of one Crocco run, in time order.
using CroccoTrajectory = std::vector<CroccoState>;

enum class BarrierKind { upper_4_1, lower_4_1, holder_5_3, lipschitz_5_4, bernstein_5_1, bernstein_5_6 };

std::string to_string(BarrierKind kind);

// Sub-rectangle of the Crocco domain plus a time window.
struct BarrierRegion {
  double eta_lo = 0.0;
  double eta_hi = 1.0;
  double xi_lo = 0.0;
  double xi_hi = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct BarrierSpec {
  BarrierKind kind = BarrierKind::upper_4_1;
  std::map<std::string, double> constants;
  BarrierRegion region;

  // Throws std::invalid_argument when a constant is not strictly positive
  // or the region leaves [0, 1] in eta.
  void validate() const;
};

struct BarrierAudit {
  BarrierSpec spec;
  double interior_sign_pass_fraction = 1.0;
  std::size_t interior_nodes = 0;
  std::size_t inconclusive_nodes = 0;
  std::map<std::string, bool> boundary_pass;
  bool conclusion_pass = false;
  double worst_margin = 0.0;
  double noise_floor = 0.0;
  bool applicable = true;
  std::map<std::string, std::string> notes;

  bool passed() const;
};

// Explicit candidate g(eta, xi, t) with closed-form partial derivatives; the
// barrier is f = g + w.
struct BarrierCandidate {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> d_t;
  std::function<double(double, double, double)> d_xi;
  std::function<double(double, double, double)> d_eta;
  std::function<double(double, double, double)> d_etaeta;
};

// f = -(eps + C)(1 - eta) + eps (1 - eta)^3 + w.
BarrierCandidate upper_candidate(double eps, double C);
// f = -e^{-beta t} alpha phi - eps (1 - eta)^3 + w, phi = e^{a eta} sin(a (1 - eta)), a = pi/2.
BarrierCandidate lower_candidate(double alpha, double beta, double eps);

// g + w sampled at the state's time.
Field candidate_field(const BarrierCandidate& cand, const CroccoState& c);

// Discrete operator of the Crocco step applied to a field pair,
//   -(f^{n+1} - f^n)/dt - eta D^-_xi f^n + (w^n)^2 D_etaeta f^{n+1},
// with the reflected ghost row at eta = 0. The eta = 1 row is zero.
Field discrete_operator_L(const Field& f_prev, const Field& f_next, const Field& w_prev,
                          double dt, const CroccoGrid& grid);

// L f = -g_t - eta g_xi + (w^n)^2 g_etaeta + L_h w, analytic in g and discrete
// in w. Requires c.has_prev.
Field crocco_operator_L(const BarrierCandidate& cand, const CroccoState& c);

// Smallest and largest w / (1 - eta) over the nodes with eta < 1.
std::pair<double, double> crocco_envelope(const CroccoState& c);

struct Prop41Constants {
  double c = 0.0;
  double C = 0.0;
  double eps = 0.0;
  double eps_low = 0.0;
  double C2 = 0.0;
  double alpha = 0.0;
  double C1 = 0.0;
  double beta = 0.0;
  double T = 0.0;
  double c1 = 0.0;
};

// alpha = (c - eps) / (2 C2), beta doubled from 1 until
// C1 (1 - eta) cos(pi/2 (1 - eta)) <= 0.9 beta at every eta node, and
// c1 = alpha e^{-beta T}. Throws InadmissibleEnvelope when c <= 0 or eps >= c.
Prop41Constants prop_4_1_constants(double c, double C, double eps, double T,
                                   const NormalAxis& eta);

struct Prop41Result {
  BarrierAudit upper;
  BarrierAudit lower;
  Prop41Constants constants;
  double identity_max_rel_error = 0.0;
  bool direct_upper_pass = false;
  bool direct_lower_pass = false;
  double direct_lower_margin = 0.0;
  double c1 = 0.0;
};

// Audits both comparison functions over every snapshot; (c, C) are measured
// from the first snapshot and T is the last snapshot time.
Prop41Result audit_prop_4_1(const CroccoTrajectory& traj, double eps, double tol = 1e-6);

// 1 - eta <= sin(pi/2 (1 - eta)) <= pi/2 (1 - eta) at every node.
bool sine_bound_precheck(const NormalAxis& eta, double* worst_margin = nullptr);

struct HolderReport {
  double eta0 = 0.0;
  double xi0 = 0.0;
  double t0 = 0.0;
  double window_sqrt = 0.0;
  double window_lin = 0.0;
  double c_lin = 0.0;
  double C_sqrt = 0.0;
  double C_sqrt_on_lin = 0.0;
  double C_lin = 0.0;
  std::size_t samples = 0;
  bool wrapped = false;
  bool consistent = false;
};

// Modulus |w(eta0, xi) - w(eta0, xi0)| / (1 - eta0) against C sqrt(xi - xi0)
// on [xi0, xi0 + (1 - eta0)^2 / 2] and against C (xi - xi0) on
// [xi0, xi0 + c (1 - eta0)^2 / (8 sqrt 2)], sampled by trigonometric
// interpolation on the eta node nearest eta0. c makes the linear lemma's
// time window fit inside [T/2, T]. Throws std::invalid_argument when
// t0 < burn_in * T or eta0 rounds to 1.
HolderReport audit_lemma_5_3(const CroccoState& c, double eta0, double xi0, double T,
                             double burn_in = 0.5, std::size_t samples = 256);

struct Eta3Report {
  double constant = 0.0;
  double eta_limit = 0.0;
  double t_from = 0.0;
  std::size_t nodes = 0;
  double at_eta = 0.0;
  double at_xi = 0.0;
  double at_t = 0.0;
};

// sup |d_xi w| eta^3 over eta < 3 eps1 / 4 and t >= T / 8.
Eta3Report eta3_monitor(const CroccoTrajectory& traj, double epsilon1, double T);

// Cut-off equal to 1 on |xi| <= 1/2, t in [-T/4, 0] and 0 for |xi| >= 3/4 or
// t <= -3T/8, built from the e^{-1/s} smooth step.
struct Cutoff {
  double value = 0.0;
  double d_xi = 0.0;
  double d_t = 0.0;
};
Cutoff zeta_cutoff(double xi_bar, double t_bar, double T);

// Smooth step: 0 for s <= 0, 1 for s >= 1, with its derivative.
double smooth_step(double s);
double smooth_step_derivative(double s);

// Kinetic cube membership: |x - x0 - (t - t0) v0| < r^3, |v - v0| < r,
// t in (t0 - r^2, t0].
bool in_kinetic_cube(double x, double v, double t, double x0, double v0, double t0, double r);

struct BernsteinOptions {
  double epsilon1 = 0.2;
  double curvature_bound = 10.0;
  double xi0 = 0.0;
};

struct BernsteinReport {
  BarrierAudit audit;
  std::map<std::string, double> ladder;
  std::map<std::string, double> gammas;
  double a = 0.0;
  double A = 0.0;
  double grad_eta_max = 0.0;
  double analytic_worst_margin = 0.0;
  double max_f = 0.0;
  double max_boundary_f = 0.0;
  double bound_lhs_max = 0.0;
};

// Evaluates the weighted gradient function
//   f = |w_xi|^2 eta^2 z + M1 (|w_xi|^2 + 1)^{2/3} z + M2 (|w_xi|^2 + B)^{1/3} |w_eta|^2 z
//       + M3 |w_eta|^2 z - M4 t_bar + eta,  z = zeta^10,
// on eta < eps1 / 2, |xi - xi0| < 1, t - T in (-T/2, 0], after selecting the
// constants in the prescribed order. Marked not applicable when
// |w_eta| exceeds the curvature bound on the region.
BernsteinReport audit_lemma_5_5_5_6(const CroccoTrajectory& traj, const BernsteinOptions& opt);

}  // namespace prandtl_lab
