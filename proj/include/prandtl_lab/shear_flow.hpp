#pragma once

#include <vector>

#include "prandtl_lab/grid.hpp"

namespace prandtl_lab {

// Background shear u^s(t, y) sampled on the normal-axis nodes, with cached
// finite-difference derivatives. far_value is the Dirichlet value at Ymax.
struct ShearProfile {
  double t = 0.0;
  std::vector<double> values;
  std::vector<double> d1;
  std::vector<double> d2;
  double far_value = 1.0;
};

enum class ShearKind { exp, erf, linear };

// Builds a profile from samples and fills the derivative caches.
ShearProfile make_shear(const NormalAxis& y, double t, std::vector<double> values);

// 1 - e^{-y}.
ShearProfile shear_exp(const NormalAxis& y);
// erf(y / (2 sqrt(t0))), the half-line heat solution started from the unit step.
ShearProfile shear_erf(const NormalAxis& y, double t0);
// y / Ymax.
ShearProfile shear_linear(const NormalAxis& y);
ShearProfile make_shear(ShearKind kind, const NormalAxis& y, double t0);

double erf_shear_value(double y, double t);

// Crank-Nicolson step of u_t = u_yy with u(0) = 0 and u(Ymax) = far_value.
ShearProfile shear_step(const NormalAxis& y, const ShearProfile& p, double dt);

struct ShearDecay {
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  bool violated = false;
};

// C_k = max_y e^y |d^k (u^s - 1)|, flagged when any exceeds the ceiling.
ShearDecay verify_shear_decay(const NormalAxis& y, const ShearProfile& p, double ceiling = 10.0);

}  // namespace prandtl_lab
