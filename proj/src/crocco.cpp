#include "prandtl_lab/crocco.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/interp.hpp"
#include "prandtl_lab/parallel.hpp"

namespace prandtl_lab {

void CroccoState::refresh() {
  if (!grid.matches(w)) throw std::invalid_argument("Crocco field does not match grid");
  dw_deta = d_eta(grid, w).rename("dw_deta");
  dw_dxi = d_xi(grid, w).rename("dw_dxi");
}

CroccoState make_crocco_state(const CroccoGrid& grid, Field w, double t) {
  CroccoState c;
  c.grid = grid;
  c.t = t;
  c.w = std::move(w);
  c.w.rename("w");
  c.residual = grid.make_field("residual");
  c.refresh();
  return c;
}

CroccoGrid crocco_grid_for(const Grid2D& grid, std::size_t Neta) {
  return CroccoGrid::uniform(grid.Lx(), grid.Nx(), Neta);
}

CroccoState to_crocco(const PrandtlState& s, const CroccoGrid& g, InterpKind kind) {
  if (g.Nxi() != s.grid.Nx() || std::abs(g.xi.length - s.grid.Lx()) > 1e-12 * s.grid.Lx())
    throw std::invalid_argument("Crocco grid does not match the periodic direction");
  const auto& y = s.grid.y.nodes();
  const std::size_t ny = y.size();
  const std::size_t ne = g.eta.size();
  Field w = g.make_field("w");

  for (std::size_t i = 0; i < s.grid.Nx(); ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const bool rising = j == 0 || s.u(i, j) > s.u(i, j - 1);
      if (!(s.uy(i, j) > 0.0) || !rising)
        throw CroccoUndefined(fmt::format("Crocco transform undefined: d_y u <= 0 at (x,y)=({:.6g},{:.6g})",
                                          s.grid.x.node(i), y[j]));
    }
  }

  parallel_for(s.grid.Nx(), [&](std::size_t i) {
    const auto u = s.u.column(i);
    // Fourth-order slopes keep the transform error below the inverse-map tolerance.
    const std::vector<double> b = five_point_slopes(y, u);
    const auto c = s.uyy.column(i);
    std::vector<double> slopes = b;
    hyman_filter(y, u, slopes);
    const double u_top = u[ny - 1];
    for (std::size_t k = 0; k + 1 < ne; ++k) {
      const double eta = g.eta.node(k);
      double val;
      if (eta >= u_top) {
        val = b[ny - 1] * (1.0 - eta) / (1.0 - u_top);
      } else {
        const std::size_t j = bracket(u, eta);
        if (kind == InterpKind::linear) {
          const double th = (eta - u[j]) / (u[j + 1] - u[j]);
          val = b[j] + th * (b[j + 1] - b[j]);
        } else {
          MonotoneCubic piece({y[j], y[j + 1]}, {u[j], u[j + 1]}, {slopes[j], slopes[j + 1]});
          const double ys = piece.invert(eta);
          val = hermite_value(y[j], y[j + 1], b[j], b[j + 1], c[j], c[j + 1], ys);
        }
      }
      w(i, k) = std::max(val, 0.0);
    }
    w(i, ne - 1) = 0.0;
  });
  return make_crocco_state(g, std::move(w), s.t);
}

Field crocco_heights(const CroccoState& c) {
  const std::size_t ne = c.grid.eta.size();
  const std::size_t kmax = ne - 2;  // eta_max = 1 - deta
  Field h = c.grid.make_field("y_of_eta", std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < c.grid.Nxi(); ++i) {
    h(i, 0) = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k)
      if (!(c.w(i, k) > 0.0))
        throw CroccoUndefined(fmt::format("Crocco inverse undefined: w <= 0 at (xi,eta)=({:.6g},{:.6g})",
                                          c.grid.xi.node(i), c.grid.eta.node(k)));
    for (std::size_t k = 0; k < kmax; ++k) {
      const double s0 = 1.0 - c.grid.eta.node(k), s1 = 1.0 - c.grid.eta.node(k + 1);
      const double g0 = s0 / c.w(i, k), g1 = s1 / c.w(i, k + 1);
      h(i, k + 1) = h(i, k) + product_integral(s0, s1, g0, g1, 1);
    }
  }
  return h;
}

Field from_crocco(const CroccoState& c, const Grid2D& g) {
  if (g.Nx() != c.grid.Nxi()) throw std::invalid_argument("grids do not match in x");
  const Field h = crocco_heights(c);
  const std::size_t kmax = c.grid.eta.size() - 2;
  Field u = g.make_field("u");
  parallel_for(g.Nx(), [&](std::size_t i) {
    std::vector<double> ys(kmax + 1), z(kmax + 1), dz(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
      const double eta = c.grid.eta.node(k);
      ys[k] = h(i, k);
      z[k] = -std::log1p(-eta);
      dz[k] = c.w(i, k) / (1.0 - eta);
    }
    const double s_top = 1.0 - c.grid.eta.node(kmax);
    for (std::size_t j = 0; j < g.y.size(); ++j) {
      const double yj = g.y.node(j);
      if (yj <= ys[kmax]) {
        const std::size_t k = bracket(ys, yj);
        const double zz = hermite_value(ys[k], ys[k + 1], z[k], z[k + 1], dz[k], dz[k + 1], yj);
        u(i, j) = -std::expm1(-zz);
      } else {
        u(i, j) = 1.0 - s_top * std::exp(-dz[kmax] * (yj - ys[kmax]));
      }
    }
  });
  return u;
}

CroccoState crocco_step(const CroccoState& c, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double dxi = c.grid.xi.spacing();
  if (dt > 0.4 * dxi * (1.0 + 1e-12))
    throw std::domain_error(
        fmt::format("time step too large: dt={:.6g}, admissible dt={:.6g}", dt, 0.4 * dxi));
  const std::size_t nxi = c.grid.Nxi();
  const std::size_t ne = c.grid.eta.size();
  const double deta = c.grid.deta();
  const double inv_h2 = 1.0 / (deta * deta);

  Field transport = c.grid.make_field();
  for (std::size_t i = 0; i < nxi; ++i) {
    const std::size_t im = (i + nxi - 1) % nxi;
    for (std::size_t k = 0; k < ne; ++k)
      transport(i, k) = c.grid.eta.node(k) * (c.w(i, k) - c.w(im, k)) / dxi;
  }

  Field next = c.grid.make_field("w");
  parallel_for(nxi, [&](std::size_t i) {
    std::vector<double> sub(ne, 0.0), diag(ne, 1.0), sup(ne, 0.0), rhs(ne, 0.0);
    for (std::size_t k = 0; k + 1 < ne; ++k) {
      const double lam = dt * c.w(i, k) * c.w(i, k) * inv_h2;
      rhs[k] = c.w(i, k) - dt * transport(i, k);
      if (k == 0) {
        diag[k] = 1.0 + 2.0 * lam;
        sup[k] = -2.0 * lam;
      } else {
        sub[k] = -lam;
        diag[k] = 1.0 + 2.0 * lam;
        sup[k] = -lam;
      }
    }
    solve_tridiagonal(sub, diag, sup, rhs);
    rhs[ne - 1] = 0.0;
    std::copy(rhs.begin(), rhs.end(), next.column(i).begin());
  });

  const double t_new = c.t + dt;
  if (!next.all_finite())
    throw SolverDiverged(fmt::format("solver diverged at t={:.6g}", t_new), t_new, "diverged");

  std::size_t clipped = 0;
  for (double& v : next.values())
    if (v < 0.0) {
      v = 0.0;
      ++clipped;
    }

  Field residual = c.grid.make_field("residual");
  for (std::size_t i = 0; i < nxi; ++i)
    for (std::size_t k = 0; k + 1 < ne; ++k) {
      const double lap = k == 0 ? 2.0 * (next(i, 1) - next(i, 0)) * inv_h2
                                : (next(i, k + 1) - 2.0 * next(i, k) + next(i, k - 1)) * inv_h2;
      residual(i, k) = -(next(i, k) - c.w(i, k)) / dt - transport(i, k) +
                       c.w(i, k) * c.w(i, k) * lap;
    }

  CroccoState out;
  out.grid = c.grid;
  out.t = t_new;
  out.w = std::move(next);
  out.residual = std::move(residual);
  out.w_prev = c.w;
  out.dt_last = dt;
  out.has_prev = true;
  out.clip_count = c.clip_count + clipped;
  out.refresh();
  return out;
}

CroccoState crocco_run(CroccoState c0, double t_end, double dt, double observer_interval,
                       const CroccoObserver& observer) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double t0 = c0.t;
  if (observer) observer(c0);
  if (t_end <= 0.0) return c0;
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const long every =
      observer_interval > 0.0 ? std::max(1L, std::lround(observer_interval / h)) : steps;
  CroccoState c = std::move(c0);
  for (long k = 1; k <= steps; ++k) {
    c = crocco_step(c, h);
    c.t = t0 + h * static_cast<double>(k);
    if (observer && (k % every == 0 || k == steps)) observer(c);
  }
  return c;
}

CroccoDerivatives reconstruct_physical_derivatives(const CroccoState& c) {
  const std::size_t nxi = c.grid.Nxi();
  const std::size_t ne = c.grid.eta.size();
  CroccoDerivatives d{c.grid.make_field("uyy"), c.grid.make_field("ux"), c.grid.make_field("uxy")};
  for (std::size_t i = 0; i < nxi; ++i) {
    for (std::size_t k = 0; k + 1 < ne; ++k)
      if (c.w(i, k) < 1e-12)
        throw std::domain_error(fmt::format("w below floor 1e-12 at (xi,eta)=({:.6g},{:.6g})",
                                            c.grid.xi.node(i), c.grid.eta.node(k)));
    double integral = 0.0;
    for (std::size_t k = 0; k < ne; ++k) {
      const double w = c.w(i, k);
      d.uyy(i, k) = w * c.dw_deta(i, k);
      if (k > 0 && k + 1 < ne) {
        const double s0 = 1.0 - c.grid.eta.node(k - 1), s1 = 1.0 - c.grid.eta.node(k);
        const double w0 = c.w(i, k - 1);
        const double q0 = c.dw_dxi(i, k - 1) * s0 * s0 / (w0 * w0);
        const double q1 = c.dw_dxi(i, k) * s1 * s1 / (w * w);
        integral += product_integral(s0, s1, q0, q1, 2);
      }
      d.ux(i, k) = k + 1 < ne ? w * integral : 0.0;
      d.uxy(i, k) = c.dw_deta(i, k) * d.ux(i, k) + c.dw_dxi(i, k);
    }
  }
  return d;
}

}  // namespace prandtl_lab
