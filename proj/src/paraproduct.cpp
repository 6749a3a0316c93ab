#include "prandtl_lab/paraproduct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/spectral.hpp"

namespace prandtl_lab {

namespace {

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

Field times(const Field& a, const Field& b) { return hadamard(a, b); }

}  // namespace

double lp_cutoff(double tau) {
  const double a = std::abs(tau);
  if (a <= 0.75) return 1.0;
  if (a >= 4.0 / 3.0) return 0.0;
  const double s = (a - 0.75) / (4.0 / 3.0 - 0.75);
  const double up = bump(1.0 - s);
  return up / (up + bump(s));
}

double DyadicFilterBank::partition_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < multipliers.front().size(); ++k) {
    double sum = 0.0;
    for (const auto& m : multipliers) sum += m[k];
    worst = std::max(worst, std::abs(1.0 - sum));
  }
  return worst;
}

DyadicFilterBank build_filterbank(std::size_t Nx, double Lx) {
  if (!is_power_of_two(Nx) || Nx < 16)
    throw std::invalid_argument("filter bank needs Nx a power of two and at least 16");
  DyadicFilterBank bank;
  bank.Nx = Nx;
  bank.Lx = Lx;
  bank.j_max = static_cast<int>(std::lround(std::log2(static_cast<double>(Nx)))) - 2;
  const std::size_t modes = Nx / 2 + 1;
  bank.multipliers.assign(static_cast<std::size_t>(bank.j_max) + 2, std::vector<double>(modes));
  for (std::size_t k = 0; k < modes; ++k) {
    const double tau = 2.0 * std::numbers::pi * static_cast<double>(k) / Lx;
    bank.multipliers[0][k] = lp_cutoff(tau);
    for (int j = 0; j <= bank.j_max; ++j) {
      const double st = std::ldexp(tau, -j);
      bank.multipliers[static_cast<std::size_t>(j) + 1][k] = lp_cutoff(st / 2.0) - lp_cutoff(st);
    }
    double sum = 0.0;
    for (const auto& m : bank.multipliers) sum += m[k];
    if (sum <= 0.0) {
      // Frequencies above every shell go to the top shell.
      for (auto& m : bank.multipliers) m[k] = 0.0;
      bank.multipliers.back()[k] = 1.0;
      continue;
    }
    for (auto& m : bank.multipliers) m[k] /= sum;
  }
  return bank;
}

std::vector<Field> dyadic_blocks(const DyadicFilterBank& bank, const Field& f) {
  if (f.n_periodic() != bank.Nx) throw std::invalid_argument("field does not match filter bank");
  const FourierField spec = forward_fft(f);
  std::vector<Field> out;
  out.reserve(bank.bands());
  for (const auto& m : bank.multipliers) out.push_back(apply_multiplier(spec, m));
  return out;
}

Field paraproduct_T(const DyadicFilterBank& bank, const Field& f, const Field& g) {
  if (!f.same_shape(g)) throw std::invalid_argument("field shape mismatch");
  const auto df = dyadic_blocks(bank, f);
  const auto dg = dyadic_blocks(bank, g);
  const std::size_t nb = bank.bands();
  // Band index q = b + 1. S_{b-1} f sums Delta_a f for a <= b - 2, i.e. band
  // indices below q - 1; S_j = S_0 for j < 0 covers q = 0 and q = 1.
  Field out(f.n_periodic(), f.n_normal(), "T");
  Field low = df[0];
  for (std::size_t q = 0; q < nb; ++q) {
    if (q >= 3) low += df[q - 2];
    out += times(low, dg[q]);
  }
  return out;
}

Field remainder_R(const DyadicFilterBank& bank, const Field& g, const Field& f) {
  if (!f.same_shape(g)) throw std::invalid_argument("field shape mismatch");
  const auto df = dyadic_blocks(bank, f);
  const auto dg = dyadic_blocks(bank, g);
  const std::size_t nb = bank.bands();
  Field out(f.n_periodic(), f.n_normal(), "R");
  // sum_{a >= 0} Delta_a f S_1 g.
  Field high_f(f.n_periodic(), f.n_normal());
  for (std::size_t p = 1; p < nb; ++p) high_f += df[p];
  out += times(high_f, dg[0] + dg[1]);
  // sum over b >= 1 of (sum_{a >= b - 1} Delta_a f) Delta_b g.
  for (std::size_t q = 2; q < nb; ++q) {
    Field tail(f.n_periodic(), f.n_normal());
    for (std::size_t p = q - 1; p < nb; ++p) tail += df[p];
    out += times(tail, dg[q]);
  }
  return out;
}

GoodUnknownBundle build_good_unknown(const PrandtlState& s, const DyadicFilterBank& bank,
                                     const Forcing& forcing, double floor) {
  const Grid2D& g = s.grid;
  const std::size_t nx = g.Nx(), ny = g.y.size();
  GoodUnknownBundle out;
  out.b = s.uy;
  out.b.rename("b");
  out.a = g.make_field("a");
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double b = s.uy(i, j);
      if (!(b >= floor))
        throw std::domain_error("good unknown needs d_y u above the monotonicity floor");
      out.a(i, j) = 1.0 / b;
    }
  auto T = [&](const Field& f, const Field& h) { return paraproduct_T(bank, f, h); };
  const Field& ut = s.utilde;
  const Field& a = out.a;
  const Field& b = out.b;

  Field G;
  if (forcing) {
    G = g.make_field("G");
    forcing(s.t, s, G);
  }

  // d_t a = d_y^2 a + (u u_xy + v u_yy) / b^2 - 2 u_yy^2 / b^3 (- d_y G / b^2).
  const Field a_yy = d_yy(g, a);
  out.a_t = g.make_field("a_t");
  const Field Gy = forcing ? d_y(g, G) : Field();
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double bb = b(i, j);
      double v = a_yy(i, j) + (s.u(i, j) * s.uxy(i, j) + s.v(i, j) * s.uyy(i, j)) / (bb * bb) -
                 2.0 * s.uyy(i, j) * s.uyy(i, j) / (bb * bb * bb);
      if (forcing) v -= Gy(i, j) / (bb * bb);
      out.a_t(i, j) = v;
    }

  out.W = T(a, ut).rename("W");
  out.w_good = d_y(g, out.W).rename("w");

  out.f_low = remainder_R(bank, s.ux, ut);
  out.f_low += remainder_R(bank, s.v, b);
  out.f_low *= -1.0;
  if (forcing) out.f_low += G;
  out.f_low.rename("f");

  const Field a_x = d_x(g, a);
  const Field ab = hadamard(a, b);
  const Field T_ax_ut = T(a_x, ut);

  Field F1 = T(out.a_t, ut);
  F1 -= T(a, T(s.u, s.ux)) - T(s.u, T(a, s.ux));
  F1 += T(ab, s.v) - T(a, T(b, s.v));
  F1 -= d_yy(g, out.W) - T(a, s.utilde_yy);
  F1 += T(a, out.f_low);
  F1 += T(s.u, T_ax_ut);
  out.F1 = std::move(F1.rename("F1"));

  Field F2 = T(hadamard(b, a), s.ux) - T(b, T(a, s.ux));
  F2 -= T(b, T_ax_ut);
  out.F2 = std::move(F2.rename("F2"));
  return out;
}

ResidualReport verify_good_unknown_equation(const PrandtlState& before, const PrandtlState& at,
                                            const PrandtlState& after,
                                            const DyadicFilterBank& bank,
                                            const Forcing& forcing) {
  const Grid2D& g = at.grid;
  const double dt_pair = after.t - before.t;
  if (!(dt_pair > 0.0)) throw std::invalid_argument("probe states must be ordered in time");
  const auto gb = build_good_unknown(before, bank, forcing);
  const auto ga = build_good_unknown(at, bank, forcing);
  const auto gn = build_good_unknown(after, bank, forcing);

  Field r = gn.w_good - gb.w_good;
  r *= 1.0 / dt_pair;
  r += paraproduct_T(bank, at.u, d_x(g, ga.w_good));
  r -= d_yy(g, ga.w_good);
  r -= d_y(g, ga.F1);
  r -= ga.F2;
  ResidualReport rep;
  const std::size_t ny = g.y.size();
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (j < kResidualBand || j + kResidualBand >= ny) {
        rep.boundary_band_max = std::max(rep.boundary_band_max, std::abs(r(i, j)));
        r(i, j) = 0.0;
      }
  rep.max_norm = r.max_abs();
  rep.weighted_norm = weighted_norm(g, r, 3, 0, WeightSpec::nu());
  rep.residual = std::move(r.rename("residual"));
  return rep;
}

double good_unknown_reconstruction_error(const PrandtlState& s, const GoodUnknownBundle& g,
                                         const DyadicFilterBank& bank) {
  const Field integral = cumulative_integral_y(s.grid, g.w_good);
  Field rebuilt = paraproduct_T(bank, g.b, integral);
  rebuilt += paraproduct_T(bank, hadamard(g.b, g.a), s.utilde);
  rebuilt -= paraproduct_T(bank, g.b, paraproduct_T(bank, g.a, s.utilde));
  rebuilt -= s.utilde;
  return rebuilt.max_abs();
}

double periodic_sobolev_norm(const Field& f, double Lx, double s) {
  const FourierField spec = forward_fft(f);
  const double n = static_cast<double>(spec.n);
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.modes(); ++k) {
    const double tau = 2.0 * std::numbers::pi * static_cast<double>(k) / Lx;
    const double w = std::pow(1.0 + tau * tau, s);
    const double mult = (k == 0 || (spec.n % 2 == 0 && k == spec.n / 2)) ? 1.0 : 2.0;
    for (std::size_t j = 0; j < spec.n_normal; ++j) acc += mult * w * std::norm(spec.at(k, j));
  }
  return std::sqrt(acc / (n * n));
}

namespace {

// SplitMix64 stream; portable across standard libraries.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

double max_abs_field(const Field& f) { return f.max_abs(); }

}  // namespace

Field random_band_limited(std::size_t Nx, std::uint64_t seed, double decay) {
  SplitMix rng{seed};
  Field f(Nx, 1, "random");
  const std::size_t kmax = Nx / 4;
  std::vector<double> ca(kmax + 1), cb(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double scale = std::pow(1.0 + static_cast<double>(k), -decay);
    ca[k] = (2.0 * rng.uniform() - 1.0) * scale;
    cb[k] = (2.0 * rng.uniform() - 1.0) * scale;
  }
  for (std::size_t i = 0; i < Nx; ++i) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(Nx);
    double v = ca[0];
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double kx = static_cast<double>(k) * x;
      v += ca[k] * std::cos(kx) + cb[k] * std::sin(kx);
    }
    f(i, 0) = v;
  }
  return f;
}

RatioSweep lemma_2_1_monitor(const DyadicFilterBank& bank, std::uint64_t seed, int pairs) {
  RatioSweep r;
  r.orders = {0, 1, 2, 3};
  r.max_ratio.assign(4, 0.0);
  for (int p = 0; p < pairs; ++p) {
    const Field f = random_band_limited(bank.Nx, seed + 2 * static_cast<std::uint64_t>(p));
    const Field g = random_band_limited(bank.Nx, seed + 2 * static_cast<std::uint64_t>(p) + 1);
    const Field t = paraproduct_T(bank, f, g);
    for (std::size_t q = 0; q < 4; ++q) {
      const double s = r.orders[q];
      const double ratio = periodic_sobolev_norm(t, bank.Lx, s) /
                           (max_abs_field(f) * periodic_sobolev_norm(g, bank.Lx, s));
      r.max_ratio[q] = std::max(r.max_ratio[q], ratio);
    }
  }
  return r;
}

RatioSweep lemma_2_2_monitor(const DyadicFilterBank& bank, std::uint64_t seed, int triples) {
  RatioSweep r;
  r.orders = {1, 2, 3};
  r.max_ratio.assign(3, 0.0);
  const PeriodicAxis axis{bank.Lx, bank.Nx};
  for (int p = 0; p < triples; ++p) {
    const std::uint64_t base = seed + 3 * static_cast<std::uint64_t>(p);
    const Field a = random_band_limited(bank.Nx, base, 2.0);
    const Field b = random_band_limited(bank.Nx, base + 1, 2.0);
    const Field f = random_band_limited(bank.Nx, base + 2);
    Field comm = paraproduct_T(bank, a, paraproduct_T(bank, b, f));
    comm -= paraproduct_T(bank, hadamard(a, b), f);
    const double a_inf = max_abs_field(a), b_inf = max_abs_field(b);
    const double a_w = a_inf + periodic_derivative(axis, a, 1).max_abs();
    const double b_w = b_inf + periodic_derivative(axis, b, 1).max_abs();
    const double denom = a_w * b_inf + a_inf * b_w;
    for (std::size_t q = 0; q < 3; ++q) {
      const double s = r.orders[q];
      const double ratio = periodic_sobolev_norm(comm, bank.Lx, s) /
                           (denom * periodic_sobolev_norm(f, bank.Lx, s - 1.0));
      r.max_ratio[q] = std::max(r.max_ratio[q], ratio);
    }
  }
  return r;
}

}  // namespace prandtl_lab
