#pragma once

#include <cstddef>
#include <functional>

#include "prandtl_lab/grid.hpp"
#include "prandtl_lab/prandtl_solver.hpp"

namespace prandtl_lab {

// w(eta, xi, t) = d_y u at the point where u = eta.
struct CroccoState {
  CroccoGrid grid;
  double t = 0.0;
  Field w;
  Field dw_deta;
  Field dw_dxi;

  // Discrete operator residual of the last step,
  //   -(w^{n+1} - w^n)/dt - eta D^-_xi w^n + (w^n)^2 D_etaeta w^{n+1},
  // zero on the eta = 1 row. Only meaningful when has_prev.
  Field residual;
  Field w_prev;
  double dt_last = 0.0;
  bool has_prev = false;
  std::size_t clip_count = 0;

  void refresh();
};

CroccoState make_crocco_state(const CroccoGrid& grid, Field w, double t = 0.0);

// Crocco rectangle matching the periodic direction of a physical grid.
CroccoGrid crocco_grid_for(const Grid2D& grid, std::size_t Neta);

enum class InterpKind { monotone_cubic, linear };

// Inverts y -> u(x, y) per column and samples d_y u at the preimages.
// Throws CroccoUndefined when a column is not strictly increasing.
CroccoState to_crocco(const PrandtlState& s, const CroccoGrid& g,
                      InterpKind kind = InterpKind::monotone_cubic);

// Height y(eta) = int_0^eta deta'/w per xi column for eta up to 1 - deta;
// rows beyond are left at +infinity.
Field crocco_heights(const CroccoState& c);

// Reconstructs u on the physical grid from w. Beyond y(1 - deta) the profile
// continues as 1 - (1 - eta_max) e^{-kappa (y - y_max)}.
Field from_crocco(const CroccoState& c, const Grid2D& g);

// Explicit upwind transport in xi followed by a frozen-coefficient implicit
// diffusion solve in eta; Neumann at eta = 0, w = 0 at eta = 1.
CroccoState crocco_step(const CroccoState& c, double dt);

using CroccoObserver = std::function<void(const CroccoState&)>;
CroccoState crocco_run(CroccoState c0, double t_end, double dt, double observer_interval,
                       const CroccoObserver& observer = {});

struct CroccoDerivatives {
  Field uyy;
  Field ux;
  Field uxy;
};

// u_yy = w d_eta w, u_x = w int_0^eta d_xi w / w^2, u_xy = d_eta w u_x + d_xi w.
CroccoDerivatives reconstruct_physical_derivatives(const CroccoState& c);

}  // namespace prandtl_lab
