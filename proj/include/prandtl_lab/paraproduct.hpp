#pragma once

#include <cstdint>
#include <vector>

#include "prandtl_lab/grid.hpp"
#include "prandtl_lab/prandtl_solver.hpp"

namespace prandtl_lab {

// Smooth cutoff: 1 for |tau| <= 3/4, 0 for |tau| >= 4/3.
double lp_cutoff(double tau);

// Littlewood-Paley multipliers on the discrete frequencies k = 0..Nx/2 with
// physical frequency tau = 2 pi k / Lx. Index 0 holds S_0 (= Delta_{-1}),
// index j + 1 holds Delta_j for j = 0..j_max. The stack is divided by its
// sum so that it is a partition of unity on every discrete frequency.
struct DyadicFilterBank {
  std::size_t Nx = 0;
  double Lx = 0.0;
  int j_max = 0;
  std::vector<std::vector<double>> multipliers;

  std::size_t bands() const noexcept { return multipliers.size(); }
  // Largest |1 - sum of multipliers| over the discrete frequencies.
  double partition_residual() const;
};

// j_max = log2(Nx) - 2. Requires Nx >= 16 and a power of two.
DyadicFilterBank build_filterbank(std::size_t Nx, double Lx);

// Delta_a f for every band a = -1..j_max (index a + 1).
std::vector<Field> dyadic_blocks(const DyadicFilterBank& bank, const Field& f);

// T_f g = sum_b S_{b-1} f Delta_b g, with S_j = S_0 for j < 0.
Field paraproduct_T(const DyadicFilterBank& bank, const Field& f, const Field& g);

// R_g f = sum of Delta_a f Delta_b g over the pairs not in T_f g, assembled
// directly from the blocks (not as fg - T_f g).
Field remainder_R(const DyadicFilterBank& bank, const Field& g, const Field& f);

struct GoodUnknownBundle {
  Field a;       // 1 / d_y u
  Field b;       // d_y u
  Field a_t;     // from the evolution identity for a
  Field W;       // T_a u~
  Field w_good;  // d_y T_a u~
  Field f_low;   // -R_{d_x u~} u~ - R_v b (+ G)
  Field F1;
  Field F2;
};

// Assembles the good unknown and the source terms of its evolution equation:
//   F1 = T_{a_t} u~ - [T_a, T_u] u~_x + (T_{ab} - T_a T_b) v - [d_y^2, T_a] u~
//        + T_a f + T_u T_{a_x} u~
//   F2 = (T_{ba} - T_b T_a) u~_x - T_b T_{a_x} u~
// Throws std::domain_error when d_y u falls below floor.
GoodUnknownBundle build_good_unknown(const PrandtlState& s, const DyadicFilterBank& bank,
                                     const Forcing& forcing = {}, double floor = 1e-10);

struct ResidualReport {
  double max_norm = 0.0;
  double weighted_norm = 0.0;  // H^{3,0} with weight e^{-y/2}
  double boundary_band_max = 0.0;
  Field residual;
};

// Rows within this many nodes of either end are excluded from the residual:
// there the nested one-sided stencils do not commute.
inline constexpr std::size_t kResidualBand = 3;

// r = d_t w + T_u d_x w - d_y^2 w - d_y F1 - F2 at the middle state, with d_t w
// from the centered difference of w across the neighbours. The norms cover
// rows kResidualBand..Ny-kResidualBand; boundary_band_max reports the rest.
ResidualReport verify_good_unknown_equation(const PrandtlState& before, const PrandtlState& at,
                                            const PrandtlState& after,
                                            const DyadicFilterBank& bank,
                                            const Forcing& forcing = {});

// max |T_b(int_0^y w) + (T_{ba} - T_b T_a) u~ - u~|.
double good_unknown_reconstruction_error(const PrandtlState& s, const GoodUnknownBundle& g,
                                         const DyadicFilterBank& bank);

// Sobolev norm in x of a one-row field: sqrt(mean over modes of (1+tau^2)^s |f_k|^2).
double periodic_sobolev_norm(const Field& f, double Lx, double s);

struct RatioSweep {
  std::vector<double> orders;
  std::vector<double> max_ratio;
};

// Random band-limited one-row fields with coefficients up to Nx/4.
Field random_band_limited(std::size_t Nx, std::uint64_t seed, double decay = 1.0);

// max over pairs of ||T_f g||_{H^s} / (||f||_inf ||g||_{H^s}) for s = 0..3.
RatioSweep lemma_2_1_monitor(const DyadicFilterBank& bank, std::uint64_t seed, int pairs);

// max over triples of ||(T_a T_b - T_{ab}) f||_{H^s} /
// ((||a||_{W^{1,inf}} ||b||_inf + ||a||_inf ||b||_{W^{1,inf}}) ||f||_{H^{s-1}}), s = 1..3.
RatioSweep lemma_2_2_monitor(const DyadicFilterBank& bank, std::uint64_t seed, int triples);

}  // namespace prandtl_lab
