#include "prandtl_lab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/parallel.hpp"
#include "prandtl_lab/spectral.hpp"

namespace prandtl_lab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double laplacian_at(const Field& f, std::size_t i, std::size_t k, double inv_h2) {
  if (k == 0) return 2.0 * (f(i, 1) - f(i, 0)) * inv_h2;
  return (f(i, k + 1) - 2.0 * f(i, k) + f(i, k - 1)) * inv_h2;
}

double first_derivative_at(const NormalAxis& axis, std::span<const double> col, std::size_t k) {
  const auto& s = axis.first(k);
  double acc = 0.0;
  for (std::size_t q = 0; q < s.len; ++q) acc += s.w[q] * col[s.start + q];
  return acc;
}

// Signed periodic offset of s from s0 in (-L/2, L/2].
double periodic_offset(double s, double s0, double L) {
  double d = std::fmod(s - s0, L);
  if (d > 0.5 * L) d -= L;
  if (d <= -0.5 * L) d += L;
  return d;
}

struct SignTally {
  std::size_t nodes = 0;
  std::size_t failures = 0;
  std::size_t inconclusive = 0;
  double worst = std::numeric_limits<double>::infinity();

  void add(double margin, double noise) {
    ++nodes;
    worst = std::min(worst, margin);
    if (margin > 0.0) return;
    if (std::abs(margin) <= noise)
      ++inconclusive;
    else
      ++failures;
  }
  void write(BarrierAudit& a) const {
    a.interior_nodes = nodes;
    a.inconclusive_nodes = inconclusive;
    a.interior_sign_pass_fraction =
        nodes == 0 ? 1.0 : static_cast<double>(nodes - failures) / static_cast<double>(nodes);
    a.worst_margin = nodes == 0 ? 0.0 : worst;
  }
};

}  // namespace

std::string to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::upper_4_1: return "upper_4_1";
    case BarrierKind::lower_4_1: return "lower_4_1";
    case BarrierKind::holder_5_3: return "holder_5_3";
    case BarrierKind::lipschitz_5_4: return "lipschitz_5_4";
    case BarrierKind::bernstein_5_1: return "bernstein_5_1";
    case BarrierKind::bernstein_5_6: return "bernstein_5_6";
  }
  return "unknown";
}

void BarrierSpec::validate() const {
  for (const auto& [name, value] : constants)
    if (!(value > 0.0))
      throw std::invalid_argument(fmt::format("barrier constant {} must be positive", name));
  if (region.eta_lo < 0.0 || region.eta_hi > 1.0 || region.eta_lo > region.eta_hi)
    throw std::invalid_argument("barrier region outside the Crocco domain");
  if (region.t_lo > region.t_hi) throw std::invalid_argument("barrier time window is empty");
}

bool BarrierAudit::passed() const {
  if (!applicable) return false;
  if (interior_sign_pass_fraction < 1.0 || !conclusion_pass) return false;
  return std::all_of(boundary_pass.begin(), boundary_pass.end(),
                     [](const auto& kv) { return kv.second; });
}

BarrierCandidate upper_candidate(double eps, double C) {
  BarrierCandidate b;
  b.value = [=](double eta, double, double) {
    const double s = 1.0 - eta;
    return -(eps + C) * s + eps * s * s * s;
  };
  b.d_t = [](double, double, double) { return 0.0; };
  b.d_xi = [](double, double, double) { return 0.0; };
  b.d_eta = [=](double eta, double, double) {
    const double s = 1.0 - eta;
    return (eps + C) - 3.0 * eps * s * s;
  };
  b.d_etaeta = [=](double eta, double, double) { return 6.0 * eps * (1.0 - eta); };
  return b;
}

BarrierCandidate lower_candidate(double alpha, double beta, double eps) {
  const double a = kHalfPi;
  BarrierCandidate b;
  b.value = [=](double eta, double, double t) {
    const double s = 1.0 - eta;
    return -std::exp(-beta * t) * alpha * std::exp(a * eta) * std::sin(a * s) - eps * s * s * s;
  };
  b.d_t = [=](double eta, double, double t) {
    return beta * std::exp(-beta * t) * alpha * std::exp(a * eta) * std::sin(a * (1.0 - eta));
  };
  b.d_xi = [](double, double, double) { return 0.0; };
  b.d_eta = [=](double eta, double, double t) {
    const double s = 1.0 - eta;
    const double dphi = a * std::exp(a * eta) * (std::sin(a * s) - std::cos(a * s));
    return -std::exp(-beta * t) * alpha * dphi + 3.0 * eps * s * s;
  };
  b.d_etaeta = [=](double eta, double, double t) {
    const double s = 1.0 - eta;
    const double d2phi = -2.0 * a * a * std::exp(a * eta) * std::cos(a * s);
    return -std::exp(-beta * t) * alpha * d2phi - 6.0 * eps * s;
  };
  return b;
}

Field candidate_field(const BarrierCandidate& cand, const CroccoState& c) {
  Field f = c.w;
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i)
    for (std::size_t k = 0; k < c.grid.eta.size(); ++k)
      f(i, k) += cand.value(c.grid.eta.node(k), c.grid.xi.node(i), c.t);
  return f;
}

Field discrete_operator_L(const Field& f_prev, const Field& f_next, const Field& w_prev,
                          double dt, const CroccoGrid& grid) {
  if (!grid.matches(f_prev) || !grid.matches(f_next) || !grid.matches(w_prev))
    throw std::invalid_argument("field/grid mismatch");
  const std::size_t nxi = grid.Nxi();
  const std::size_t ne = grid.eta.size();
  const double dxi = grid.xi.spacing();
  const double deta = grid.deta();
  const double inv_h2 = 1.0 / (deta * deta);
  Field out = grid.make_field("Lf");
  parallel_for(nxi, [&](std::size_t i) {
    const std::size_t im = (i + nxi - 1) % nxi;
    for (std::size_t k = 0; k + 1 < ne; ++k) {
      const double trans = grid.eta.node(k) * (f_prev(i, k) - f_prev(im, k)) / dxi;
      const double w = w_prev(i, k);
      out(i, k) = -(f_next(i, k) - f_prev(i, k)) / dt - trans +
                  w * w * laplacian_at(f_next, i, k, inv_h2);
    }
  });
  return out;
}

Field crocco_operator_L(const BarrierCandidate& cand, const CroccoState& c) {
  if (!c.has_prev) throw std::invalid_argument("operator needs a state with a previous step");
  Field out = discrete_operator_L(c.w_prev, c.w, c.w_prev, c.dt_last, c.grid);
  const std::size_t ne = c.grid.eta.size();
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i) {
    const double xi = c.grid.xi.node(i);
    for (std::size_t k = 0; k + 1 < ne; ++k) {
      const double eta = c.grid.eta.node(k);
      const double w = c.w_prev(i, k);
      out(i, k) += -cand.d_t(eta, xi, c.t) - eta * cand.d_xi(eta, xi, c.t) +
                   w * w * cand.d_etaeta(eta, xi, c.t);
    }
  }
  return out;
}

std::pair<double, double> crocco_envelope(const CroccoState& c) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i)
    for (std::size_t k = 0; k + 1 < c.grid.eta.size(); ++k) {
      const double r = c.w(i, k) / (1.0 - c.grid.eta.node(k));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  return {lo, hi};
}

Prop41Constants prop_4_1_constants(double c, double C, double eps, double T,
                                   const NormalAxis& eta) {
  if (!(c > 0.0) || !(eps < c))
    throw InadmissibleEnvelope(fmt::format(
        "inadmissible initial envelope: c={:.6g}, epsilon={:.6g} (need 0 < epsilon < c)", c, eps));
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  Prop41Constants k;
  k.c = c;
  k.C = C;
  k.eps = eps;
  k.T = T;
  k.C2 = std::exp(kHalfPi) * kHalfPi;
  k.alpha = (c - eps) / (2.0 * k.C2);
  k.C1 = 2.0 * C * C * kHalfPi * kHalfPi * std::exp(kHalfPi);
  double need = 0.0;
  for (double e : eta.nodes()) {
    const double s = 1.0 - e;
    need = std::max(need, k.C1 * s * std::cos(kHalfPi * s));
  }
  k.beta = 1.0;
  while (need > 0.9 * k.beta) k.beta *= 2.0;
  k.c1 = k.alpha * std::exp(-k.beta * T);
  k.eps_low = std::min(eps, std::exp(-k.beta * T) * kHalfPi * k.alpha / 6.0);
  return k;
}

Prop41Result audit_prop_4_1(const CroccoTrajectory& traj, double eps, double tol) {
  if (traj.empty()) throw std::invalid_argument("empty Crocco trajectory");
  const auto [c, C] = crocco_envelope(traj.front());
  const double T = traj.back().t;
  const CroccoGrid& grid = traj.front().grid;
  Prop41Result out;
  out.constants = prop_4_1_constants(c, C, eps, T, grid.eta);
  const Prop41Constants& k = out.constants;
  out.c1 = k.c1;

  const BarrierCandidate up = upper_candidate(eps, C);
  const BarrierCandidate lo = lower_candidate(k.alpha, k.beta, k.eps_low);
  const std::size_t nxi = grid.Nxi();
  const std::size_t ne = grid.eta.size();
  const BarrierRegion region{0.0, 1.0, 0.0, grid.xi.length, traj.front().t, T};

  out.upper.spec = {BarrierKind::upper_4_1, {{"epsilon", eps}, {"C", C}}, region};
  out.lower.spec = {BarrierKind::lower_4_1,
                    {{"epsilon", k.eps_low},
                     {"c", c},
                     {"C", C},
                     {"C2", k.C2},
                     {"alpha", k.alpha},
                     {"C1", k.C1},
                     {"beta", k.beta},
                     {"c1", k.c1}},
                    region};

  // Solver residual on interior nodes: sign violations below it are inconclusive.
  double noise = 0.0;
  for (const auto& s : traj) {
    if (!s.has_prev) continue;
    const Field r = discrete_operator_L(s.w_prev, s.w, s.w_prev, s.dt_last, grid);
    for (std::size_t i = 0; i < nxi; ++i)
      for (std::size_t j = 1; j + 1 < ne; ++j) noise = std::max(noise, std::abs(r(i, j)));
  }
  out.upper.noise_floor = noise;
  out.lower.noise_floor = noise;

  SignTally up_tally, lo_tally;
  bool up_eta1 = true, lo_eta1 = true, up_eta0 = true, lo_eta0 = true;
  bool up_concl = true, lo_concl = true;
  double wall_defect = 0.0;
  out.direct_upper_pass = true;
  out.direct_lower_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : traj) {
    const Field fu = candidate_field(up, s);
    const Field fl = candidate_field(lo, s);
    for (std::size_t i = 0; i < nxi; ++i) {
      for (std::size_t j = 0; j < ne; ++j) {
        const double sj = 1.0 - grid.eta.node(j);
        if (fu(i, j) > tol) up_concl = false;
        if (fl(i, j) < -tol) lo_concl = false;
        if (s.w(i, j) > C * sj + tol) out.direct_upper_pass = false;
        out.direct_lower_margin = std::min(out.direct_lower_margin, s.w(i, j) - k.c1 * sj);
      }
      if (fu(i, ne - 1) > tol) up_eta1 = false;
      if (fl(i, ne - 1) < -tol) lo_eta1 = false;
      if (s.t > 0.0) {
        // The reflected ghost node makes the scheme's d_eta w vanish at eta = 0;
        // the one-sided estimate is kept as a Neumann defect.
        wall_defect = std::max(wall_defect, std::abs(first_derivative_at(grid.eta, s.w.column(i), 0)));
        const double dw0 = 0.0;
        const double xi = grid.xi.node(i);
        if (!(up.d_eta(0.0, xi, s.t) + dw0 > 0.0)) up_eta0 = false;
        if (!(lo.d_eta(0.0, xi, s.t) + dw0 < 0.0)) lo_eta0 = false;
      }
    }
    if (!s.has_prev) continue;

    // Fully discrete operator on the assembled upper barrier against 6 w^2 eps (1 - eta).
    Field fu_prev = s.w_prev;
    for (std::size_t i = 0; i < nxi; ++i)
      for (std::size_t j = 0; j < ne; ++j)
        fu_prev(i, j) += up.value(grid.eta.node(j), grid.xi.node(i), s.t - s.dt_last);
    const Field Lfu_disc = discrete_operator_L(fu_prev, fu, s.w_prev, s.dt_last, grid);
    const Field Lfu = crocco_operator_L(up, s);
    const Field Lfl = crocco_operator_L(lo, s);
    for (std::size_t i = 0; i < nxi; ++i)
      for (std::size_t j = 1; j + 1 < ne; ++j) {
        const double w = s.w_prev(i, j);
        const double expected = 6.0 * w * w * eps * (1.0 - grid.eta.node(j));
        if (expected > 0.0)
          out.identity_max_rel_error =
              std::max(out.identity_max_rel_error, std::abs(Lfu_disc(i, j) - expected) / expected);
        up_tally.add(Lfu(i, j), noise);
        lo_tally.add(-Lfl(i, j), noise);
      }
  }
  const auto& first = traj.front();
  const Field fu0 = candidate_field(up, first);
  const Field fl0 = candidate_field(lo, first);
  bool up_init = true, lo_init = true;
  for (std::size_t n = 0; n < fu0.size(); ++n) {
    if (fu0.values()[n] > tol) up_init = false;
    if (fl0.values()[n] < -tol) lo_init = false;
  }

  up_tally.write(out.upper);
  lo_tally.write(out.lower);
  out.upper.boundary_pass = {{"initial", up_init}, {"eta_one", up_eta1}, {"eta_zero", up_eta0}};
  out.lower.boundary_pass = {{"initial", lo_init}, {"eta_one", lo_eta1}, {"eta_zero", lo_eta0}};
  out.upper.conclusion_pass = up_concl;
  out.lower.conclusion_pass = lo_concl;
  out.direct_lower_pass = out.direct_lower_margin >= -1e-14;
  out.upper.notes["identity_max_rel_error"] = fmt::format("{:.6e}", out.identity_max_rel_error);
  out.lower.notes["horizon"] = fmt::format("T={:.6g}", T);
  out.upper.notes["wall_neumann_defect"] = fmt::format("{:.6e}", wall_defect);
  out.lower.notes["wall_neumann_defect"] = fmt::format("{:.6e}", wall_defect);
  return out;
}

bool sine_bound_precheck(const NormalAxis& eta, double* worst_margin) {
  double worst = std::numeric_limits<double>::infinity();
  for (double e : eta.nodes()) {
    const double s = 1.0 - e;
    const double v = std::sin(kHalfPi * s);
    worst = std::min({worst, v - s, kHalfPi * s - v});
  }
  if (worst_margin) *worst_margin = worst;
  return worst >= -1e-15;
}

HolderReport audit_lemma_5_3(const CroccoState& c, double eta0, double xi0, double T,
                             double burn_in, std::size_t samples) {
  if (c.t < burn_in * T)
    throw std::invalid_argument(fmt::format(
        "audit time t0={:.6g} precedes the burn-in {:.6g} of the horizon {:.6g}", c.t,
        burn_in * T, T));
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  const auto& eta = c.grid.eta;
  const std::size_t row = static_cast<std::size_t>(std::lround(std::clamp(eta0, 0.0, 1.0) *
                                                               static_cast<double>(c.grid.Neta())));
  const double s0 = 1.0 - eta.node(row);
  if (!(s0 > 0.0)) throw std::invalid_argument("eta0 rounds to the eta = 1 row");

  HolderReport r;
  r.eta0 = eta.node(row);
  r.xi0 = xi0;
  r.t0 = c.t;
  r.samples = samples;
  r.window_sqrt = s0 * s0 / 2.0;
  r.c_lin = std::min(0.99, 0.99 * 2.0 * (T / 6.0) * (T / 6.0) / (s0 * s0));
  r.window_lin = r.c_lin * s0 * s0 / (8.0 * std::sqrt(2.0));
  const double L = c.grid.xi.length;
  r.wrapped = xi0 + r.window_sqrt >= L || xi0 < 0.0;

  const FourierField spec = forward_fft(c.w);
  auto sample = [&](double s) {
    double m = std::fmod(s, L);
    if (m < 0.0) m += L;
    return trig_interpolate(spec, L, row, m);
  };
  const double w0 = sample(xi0);
  for (std::size_t m = 1; m <= samples; ++m) {
    const double frac = static_cast<double>(m) / static_cast<double>(samples);
    const double d = r.window_sqrt * frac;
    r.C_sqrt = std::max(r.C_sqrt, std::abs(sample(xi0 + d) - w0) / s0 / std::sqrt(d));
    if (r.window_lin > 0.0) {
      const double dl = r.window_lin * frac;
      const double mod = std::abs(sample(xi0 + dl) - w0) / s0;
      r.C_lin = std::max(r.C_lin, mod / dl);
      r.C_sqrt_on_lin = std::max(r.C_sqrt_on_lin, mod / std::sqrt(dl));
    }
  }
  r.consistent = r.C_lin >= r.C_sqrt_on_lin;
  return r;
}

Eta3Report eta3_monitor(const CroccoTrajectory& traj, double epsilon1, double T) {
  Eta3Report r;
  r.eta_limit = 0.75 * epsilon1;
  r.t_from = T / 8.0;
  for (const auto& s : traj) {
    if (s.t < r.t_from) continue;
    for (std::size_t k = 1; k < s.grid.eta.size(); ++k) {
      const double eta = s.grid.eta.node(k);
      if (!(eta < r.eta_limit)) break;
      const double e3 = eta * eta * eta;
      for (std::size_t i = 0; i < s.grid.Nxi(); ++i) {
        ++r.nodes;
        const double v = std::abs(s.dw_dxi(i, k)) * e3;
        if (v > r.constant) {
          r.constant = v;
          r.at_eta = eta;
          r.at_xi = s.grid.xi.node(i);
          r.at_t = s.t;
        }
      }
    }
  }
  return r;
}

namespace {

double step_kernel(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = step_kernel(s), b = step_kernel(1.0 - s);
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = step_kernel(s), b = step_kernel(1.0 - s);
  const double da = a / (s * s), db = -b / ((1.0 - s) * (1.0 - s));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

Cutoff zeta_cutoff(double xi_bar, double t_bar, double T) {
  // Spatial factor: 1 - S((|xi| - 1/2) / (1/4)).
  const double ax = std::abs(xi_bar);
  const double sx = (ax - 0.5) / 0.25;
  const double px = 1.0 - smooth_step(sx);
  const double dpx = -smooth_step_derivative(sx) / 0.25 * (xi_bar < 0.0 ? -1.0 : 1.0);
  // Temporal factor: S((t + 3T/8) / (T/8)).
  const double st = (t_bar + 0.375 * T) / (0.125 * T);
  const double pt = smooth_step(st);
  const double dpt = smooth_step_derivative(st) / (0.125 * T);
  return {px * pt, dpx * pt, px * dpt};
}

bool in_kinetic_cube(double x, double v, double t, double x0, double v0, double t0, double r) {
  if (!(t > t0 - r * r && t <= t0)) return false;
  if (!(std::abs(v - v0) < r)) return false;
  return std::abs(x - x0 - (t - t0) * v0) < r * r * r;
}

namespace {

struct GradientFields {
  Field p;  // d_xi w
  Field q;  // d_eta w
  Field r;  // d_eta d_xi w
  Field s;  // d_eta^2 w
};

GradientFields gradients(const CroccoGrid& g, const Field& w) {
  GradientFields d;
  d.p = d_xi(g, w);
  d.q = d_eta(g, w);
  d.r = d_eta(g, d.p);
  d.s = d_etaeta(g, w);
  return d;
}

struct Ladder {
  double M1 = 0, M2 = 0, M3 = 0, M4 = 0, B = 0;
};

double weight_G(const Ladder& m, double eta, double p, double q) {
  const double p2 = p * p, q2 = q * q;
  return p2 * eta * eta + m.M1 * std::pow(p2 + 1.0, 2.0 / 3.0) +
         m.M2 * std::cbrt(p2 + m.B) * q2 + m.M3 * q2;
}

Field weight_field(const CroccoGrid& g, const GradientFields& d, const Ladder& m) {
  Field G = g.make_field("G");
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k)
      G(i, k) = weight_G(m, g.eta.node(k), d.p(i, k), d.q(i, k));
  return G;
}

// d/dp and d^2/dp^2 of (p^2 + K)^e.
double pow_d1(double p, double K, double e) { return 2.0 * e * p * std::pow(p * p + K, e - 1.0); }
double pow_d2(double p, double K, double e) {
  const double b = p * p + K;
  return 2.0 * e * std::pow(b, e - 1.0) + 4.0 * e * (e - 1.0) * p * p * std::pow(b, e - 2.0);
}

// L G from the chain rule and the identities L w_xi = -2 w w_xi w_etaeta,
// L w_eta = -2 w w_eta w_etaeta + w_xi.
double analytic_LG(const Ladder& m, double eta, double w, double p, double q, double r,
                   double s) {
  const double q2 = q * q;
  const double Fp = 2.0 * p * eta * eta + m.M1 * pow_d1(p, 1.0, 2.0 / 3.0) +
                    m.M2 * pow_d1(p, m.B, 1.0 / 3.0) * q2;
  const double Fq = 2.0 * (m.M2 * std::cbrt(p * p + m.B) + m.M3) * q;
  const double Fpp = 2.0 * eta * eta + m.M1 * pow_d2(p, 1.0, 2.0 / 3.0) +
                     m.M2 * pow_d2(p, m.B, 1.0 / 3.0) * q2;
  const double Fpq = m.M2 * pow_d1(p, m.B, 1.0 / 3.0) * 2.0 * q;
  const double Fqq = 2.0 * (m.M2 * std::cbrt(p * p + m.B) + m.M3);
  const double Lp = -2.0 * w * p * s;
  const double Lq = -2.0 * w * q * s + p;
  return Fp * Lp + Fq * Lq +
         w * w * (2.0 * p * p + 8.0 * eta * p * r + Fpp * r * r + 2.0 * Fpq * r * s + Fqq * s * s);
}

CroccoGrid coarsened(const CroccoGrid& g) {
  return CroccoGrid::uniform(g.xi.length, g.Nxi() / 2, g.Neta() / 2);
}

Field subsample(const Field& f) {
  Field out(f.n_periodic() / 2, (f.n_normal() - 1) / 2 + 1);
  for (std::size_t i = 0; i < out.n_periodic(); ++i)
    for (std::size_t k = 0; k < out.n_normal(); ++k) out(i, k) = f(2 * i, 2 * k);
  return out;
}

}  // namespace

BernsteinReport audit_lemma_5_5_5_6(const CroccoTrajectory& traj, const BernsteinOptions& opt) {
  if (traj.empty()) throw std::invalid_argument("empty Crocco trajectory");
  BernsteinReport rep;
  BarrierAudit& audit = rep.audit;
  const CroccoGrid& g = traj.front().grid;
  const double T = traj.back().t;
  const double eta_top = 0.5 * opt.epsilon1;
  const double L = g.xi.length;
  audit.spec.kind = BarrierKind::bernstein_5_6;
  audit.spec.region = {0.0, eta_top, opt.xi0 - 1.0, opt.xi0 + 1.0, 0.5 * T, T};
  audit.notes["time_window"] = fmt::format("t in [T/2, T] with T = t_end = {:.6g}", T);
  audit.notes["cutoff"] = "zeta = 1 for |xi-xi0| <= 1/2 and t-T >= -T/4; 0 for |xi-xi0| >= 3/4 or t-T <= -3T/8";

  std::size_t k_top = 0;
  while (k_top + 1 < g.eta.size() && g.eta.node(k_top + 1) <= eta_top + 1e-12) ++k_top;
  std::vector<std::size_t> cols;
  std::vector<double> xbar;
  for (std::size_t i = 0; i < g.Nxi(); ++i) {
    const double d = periodic_offset(g.xi.node(i), opt.xi0, L);
    if (std::abs(d) <= 1.0) {
      cols.push_back(i);
      xbar.push_back(d);
    }
  }
  std::vector<const CroccoState*> window;
  for (const auto& s : traj)
    if (s.t >= 0.5 * T && T > 0.0) window.push_back(&s);
  if (k_top < 2 || cols.empty() || window.empty()) {
    audit.applicable = false;
    audit.notes["reason"] = "region or time window holds no audit nodes";
    return rep;
  }

  rep.a = std::numeric_limits<double>::infinity();
  for (const auto* s : window) {
    const Field q = d_eta(g, s->w);
    for (std::size_t i : cols)
      for (std::size_t k = 0; k <= k_top; ++k) {
        rep.a = std::min(rep.a, s->w(i, k));
        rep.A = std::max(rep.A, s->w(i, k));
        rep.grad_eta_max = std::max(rep.grad_eta_max, std::abs(q(i, k)));
      }
  }
  if (rep.grad_eta_max > opt.curvature_bound) {
    audit.applicable = false;
    audit.notes["reason"] = fmt::format("curvature hypothesis fails: max |d_eta w| = {:.6g} > {:.6g}",
                                        rep.grad_eta_max, opt.curvature_bound);
    return rep;
  }
  if (!(rep.a > 0.0)) {
    audit.applicable = false;
    audit.notes["reason"] = "w vanishes on the region";
    return rep;
  }

  // Stand-ins for the constants that depend only on the envelope.
  const double a2 = rep.a * rep.a;
  rep.gammas = {{"gamma1", a2}, {"gamma2", a2 / 3.0}, {"gamma3", a2 / 2.0}, {"gamma4", a2 / 4.0}};
  const double g1 = a2, g2 = a2 / 3.0, g4 = a2 / 4.0;
  const double K = (1.0 + rep.A) * (1.0 + rep.A) * (1.0 + rep.grad_eta_max) * (1.0 + rep.grad_eta_max);
  auto Cb = [K](double beta) { return K / beta; };
  Ladder m;
  const double beta1 = a2 / 2.0;
  m.M1 = 1.1 * 100.0 * Cb(beta1) / g2;
  const double beta2 = 0.5 * g1 / (100.0 * m.M1);
  m.M2 = 1.1 * (m.M1 * Cb(beta2) + Cb(beta1)) / g4;
  const double beta5 = 0.25 * m.M1 / (2.0 * m.M2) * g2;
  const double beta7 = beta5;
  m.B = std::pow(K / beta7, 3.0);
  const double beta4 = g1 / (100.0 * m.M2) / 6.0;
  m.M3 = 1.1 * Cb(beta5) * m.M2 / a2;
  const double beta9 = 0.5 * g1 / (100.0 * m.M3);

  // Step 9: M4 above the negative part of the analytic L of the cut-off terms.
  auto interior_col = [&](std::size_t n) { return std::abs(xbar[n]) < 1.0 - g.xi.spacing(); };
  double C_neg = 0.0;
  for (const auto* s : window) {
    const GradientFields d = gradients(g, s->w);
    for (std::size_t n = 0; n < cols.size(); ++n) {
      if (!interior_col(n)) continue;
      const std::size_t i = cols[n];
      const Cutoff z = zeta_cutoff(xbar[n], s->t - T, T);
      const double z10 = std::pow(z.value, 10.0);
      const double z9 = z.value > 0.0 ? std::pow(z.value, 9.0) : 0.0;
      for (std::size_t k = 1; k < k_top; ++k) {
        const double eta = g.eta.node(k);
        const double Lz10 = -10.0 * z9 * (z.d_t + eta * z.d_xi);
        const double G = weight_G(m, eta, d.p(i, k), d.q(i, k));
        const double v = z10 * analytic_LG(m, eta, s->w(i, k), d.p(i, k), d.q(i, k), d.r(i, k),
                                           d.s(i, k)) +
                         G * Lz10;
        C_neg = std::max(C_neg, -v);
      }
    }
  }
  m.M4 = 1.1 * C_neg + 1.0;
  rep.ladder = {{"beta1", beta1}, {"M1", m.M1},       {"beta2", beta2}, {"M2", m.M2},
                {"beta5", beta5}, {"beta7", beta7},   {"B", m.B},       {"beta4", beta4},
                {"beta6", beta4}, {"beta10", beta4},  {"M3", m.M3},     {"beta9", beta9},
                {"M4", m.M4},     {"K", K}};
  audit.spec.constants = {{"M1", m.M1}, {"M2", m.M2}, {"M3", m.M3}, {"M4", m.M4}, {"B", m.B}};

  // Interior margins: discrete L_h of G against the coarsened pair.
  const bool can_coarsen = g.Nxi() >= 16 && g.Neta() % 2 == 0;
  const CroccoGrid gc = can_coarsen ? coarsened(g) : g;
  SignTally tally;
  double noise = 0.0;
  rep.analytic_worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> margins;
  double max_interior_f = -std::numeric_limits<double>::infinity();
  double max_boundary_f = -std::numeric_limits<double>::infinity();
  bool eta_zero = true;
  double wall_defect = 0.0;
  const double t_first = window.front()->t;
  for (const auto* s : window) {
    const GradientFields d = gradients(g, s->w);
    const Field G = weight_field(g, d, m);
    Field LhG;
    Field LhG_coarse;
    if (s->has_prev) {
      const Field Gp = weight_field(g, gradients(g, s->w_prev), m);
      LhG = discrete_operator_L(Gp, G, s->w_prev, s->dt_last, g);
      if (can_coarsen) {
        const Field wc = subsample(s->w), wcp = subsample(s->w_prev);
        const Field Gc = weight_field(gc, gradients(gc, wc), m);
        const Field Gcp = weight_field(gc, gradients(gc, wcp), m);
        LhG_coarse = discrete_operator_L(Gcp, Gc, wcp, s->dt_last, gc);
      }
    }
    const double tb = s->t - T;
    for (std::size_t n = 0; n < cols.size(); ++n) {
      const std::size_t i = cols[n];
      const Cutoff z = zeta_cutoff(xbar[n], tb, T);
      const double z10 = std::pow(z.value, 10.0);
      const double z9 = z.value > 0.0 ? std::pow(z.value, 9.0) : 0.0;
      const bool boundary_time = s->t == t_first;
      for (std::size_t k = 0; k <= k_top; ++k) {
        const double eta = g.eta.node(k);
        const double f = G(i, k) * z10 - m.M4 * tb + eta;
        const bool on_boundary = boundary_time || k == k_top || !interior_col(n);
        if (k == 0) {
          // Ghost closure: d_eta w = 0 and d_eta d_xi w = 0 at the wall, so
          // d_eta G = F_eta + F_p w_xieta + F_q w_etaeta reduces to F_q w_etaeta with F_q = 0.
          const double p = d.p(i, 0), q = 0.0;
          const double Fq = 2.0 * (m.M2 * std::cbrt(p * p + m.B) + m.M3) * q;
          if (!(1.0 + z10 * Fq * d.s(i, 0) > 0.0)) eta_zero = false;
          wall_defect = std::max(wall_defect, std::abs(d.q(i, 0)));
        }
        if (on_boundary)
          max_boundary_f = std::max(max_boundary_f, f);
        else
          max_interior_f = std::max(max_interior_f, f);
        rep.bound_lhs_max =
            std::max(rep.bound_lhs_max, m.M1 * std::pow(d.p(i, k) * d.p(i, k) + 1.0, 2.0 / 3.0) * z10);
        if (on_boundary || k == 0 || !s->has_prev) continue;
        const double Lz10 = -10.0 * z9 * (z.d_t + eta * z.d_xi);
        const double an = z10 * analytic_LG(m, eta, s->w(i, k), d.p(i, k), d.q(i, k), d.r(i, k),
                                            d.s(i, k)) +
                          G(i, k) * Lz10 + m.M4;
        rep.analytic_worst_margin = std::min(rep.analytic_worst_margin, an);
        margins.push_back(z10 * LhG(i, k) + G(i, k) * Lz10 + m.M4);
        if (can_coarsen && i % 2 == 0 && k % 2 == 0)
          noise = std::max(noise, z10 * std::abs(LhG(i, k) - LhG_coarse(i / 2, k / 2)));
      }
    }
  }
  for (double margin : margins) tally.add(margin, noise);
  tally.write(audit);
  audit.noise_floor = noise;
  if (margins.empty()) rep.analytic_worst_margin = 0.0;
  rep.max_f = std::max(max_interior_f, max_boundary_f);
  rep.max_boundary_f = max_boundary_f;
  audit.boundary_pass = {{"eta_zero", eta_zero}, {"parabolic_finite", std::isfinite(max_boundary_f)}};
  audit.conclusion_pass = max_interior_f <= max_boundary_f + noise && rep.bound_lhs_max <= rep.max_f;
  audit.notes["wall_neumann_defect"] = fmt::format("{:.6e}", wall_defect);
  if (!can_coarsen) audit.notes["noise_floor"] = "grid too coarse to halve; noise floor not estimated";
  return rep;
}

}  // namespace prandtl_lab
