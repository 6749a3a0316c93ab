#include "prandtl_lab/shear_flow.hpp"

#include <cmath>
#include <stdexcept>

namespace prandtl_lab {

ShearProfile make_shear(const NormalAxis& y, double t, std::vector<double> values) {
  if (values.size() != y.size()) throw std::invalid_argument("shear profile size mismatch");
  ShearProfile p;
  p.t = t;
  p.values = std::move(values);
  p.d1.resize(y.size());
  p.d2.resize(y.size());
  normal_derivative_column(y, p.values, p.d1, 1);
  normal_derivative_column(y, p.values, p.d2, 2);
  p.far_value = p.values.back();
  return p;
}

ShearProfile shear_exp(const NormalAxis& y) {
  std::vector<double> v(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) v[j] = -std::expm1(-y.node(j));
  return make_shear(y, 0.0, std::move(v));
}

double erf_shear_value(double y, double t) { return std::erf(y / (2.0 * std::sqrt(t))); }

ShearProfile shear_erf(const NormalAxis& y, double t0) {
  if (!(t0 > 0.0)) throw std::invalid_argument("erf shear needs t0 > 0");
  std::vector<double> v(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) v[j] = erf_shear_value(y.node(j), t0);
  return make_shear(y, 0.0, std::move(v));
}

ShearProfile shear_linear(const NormalAxis& y) {
  std::vector<double> v(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) v[j] = y.node(j) / y.back();
  return make_shear(y, 0.0, std::move(v));
}

ShearProfile make_shear(ShearKind kind, const NormalAxis& y, double t0) {
  switch (kind) {
    case ShearKind::exp: return shear_exp(y);
    case ShearKind::erf: return shear_erf(y, t0);
    case ShearKind::linear: return shear_linear(y);
  }
  throw std::invalid_argument("unknown shear kind");
}

ShearProfile shear_step(const NormalAxis& y, const ShearProfile& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::size_t n = y.size();
  std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n);
  rhs[0] = 0.0;
  rhs[n - 1] = p.far_value;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const auto& s = y.second(j);
    const double a = 0.5 * dt * s.w[0], b = 0.5 * dt * s.w[1], c = 0.5 * dt * s.w[2];
    sub[j] = -a;
    diag[j] = 1.0 - b;
    sup[j] = -c;
    rhs[j] = p.values[j] + a * p.values[j - 1] + b * p.values[j] + c * p.values[j + 1];
  }
  solve_tridiagonal(sub, diag, sup, rhs);
  ShearProfile out = make_shear(y, p.t + dt, std::move(rhs));
  out.far_value = p.far_value;
  return out;
}

ShearDecay verify_shear_decay(const NormalAxis& y, const ShearProfile& p, double ceiling) {
  ShearDecay d;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double e = std::exp(y.node(j));
    d.C0 = std::max(d.C0, e * std::abs(p.values[j] - 1.0));
    d.C1 = std::max(d.C1, e * std::abs(p.d1[j]));
    d.C2 = std::max(d.C2, e * std::abs(p.d2[j]));
  }
  d.violated = d.C0 > ceiling || d.C1 > ceiling || d.C2 > ceiling;
  return d;
}

}  // namespace prandtl_lab
