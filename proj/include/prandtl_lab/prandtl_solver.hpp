#pragma once

#include <functional>

#include "prandtl_lab/grid.hpp"
#include "prandtl_lab/shear_flow.hpp"

namespace prandtl_lab {

// Perturbation u~ on top of the shear u^s, with cached derived fields.
struct PrandtlState {
  Grid2D grid;
  double t = 0.0;
  Field utilde;
  ShearProfile shear;

  Field u;     // u^s + u~
  Field v;     // -int_0^y d_x u~
  Field ux;    // d_x u~ (= d_x u)
  Field uy;    // d_y u
  Field uyy;   // d_y^2 u
  Field uxy;   // d_x d_y u
  Field utilde_yy;

  // Explicit-term history for the two-step Adams-Bashforth part.
  Field explicit_prev;
  double dt_prev = 0.0;
  bool has_history = false;

  // Recomputes every cached field from utilde and shear.
  void refresh();
};

PrandtlState make_state(const Grid2D& grid, ShearProfile shear, Field utilde, double t = 0.0);

enum class PerturbationKind { none, sine, curvature_spike, non_monotone };

// Initial perturbations. Each vanishes at y = 0 and y = Ymax; the smooth
// profiles are corrected by a linear ramp so the far-field row is exactly 0.
//   sine:            eps sin(x) (e^{-y} - e^{-2y})
//   curvature_spike: sine plus h/2 at the node nearest y = 0.3
//   non_monotone:    -eps y e^{-y}
Field make_perturbation(PerturbationKind kind, const Grid2D& grid, double eps);

struct AdmissibleDataReport {
  double c_mono = 0.0;
  double C_env = 0.0;
  bool pass = false;
};

AdmissibleDataReport validate_data(const Grid2D& grid, const Field& utilde0,
                                   const ShearProfile& shear0, double ceiling = 10.0);

// min and max over nodes of e^y d_y u.
double min_weighted_slope(const PrandtlState& s);
double max_weighted_slope(const PrandtlState& s);

// Extra source G(t, x, y) added to the right-hand side of the u~ equation.
using Forcing = std::function<void(double t, const PrandtlState& s, Field& G)>;

struct StepOptions {
  double cfl = 0.4;
  bool enforce_cfl = true;
  double blowup_ceiling = 1e3;
  double monotone_floor = 1e-6;
  Forcing forcing;
};

// Largest dt allowed by cfl * min(dx / max|u|, dy / max|v|).
double admissible_dt(const PrandtlState& s, double cfl);

// Explicit advection (AB2, Euler on the first step) with Crank-Nicolson
// diffusion in y; the shear profile advances by the same dt.
PrandtlState prandtl_step(const PrandtlState& s, double dt, const StepOptions& opt = {});

// Algebraic d_t u~ = -u d_x u~ - v d_y u + d_y^2 u~ (+ G).
Field utilde_time_derivative(const PrandtlState& s, const Forcing& forcing = {});

struct RunOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  double observer_interval = 0.05;
  StepOptions step;
};

using Observer = std::function<void(const PrandtlState&)>;

// Advances to t_end with a uniform step no larger than opt.dt and calls the
// observer at t = 0, at every observer interval, and at t_end.
PrandtlState run(PrandtlState s0, const RunOptions& opt, const Observer& observer = {});

}  // namespace prandtl_lab
