#include "prandtl_lab/prandtl_solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/parallel.hpp"

namespace prandtl_lab {

void PrandtlState::refresh() {
  if (!grid.matches(utilde)) throw std::invalid_argument("perturbation does not match grid");
  const std::size_t nx = grid.Nx(), ny = grid.y.size();
  u = grid.make_field("u");
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) u(i, j) = shear.values[j] + utilde(i, j);
  ux = d_x(grid, utilde).rename("ux");
  v = cumulative_integral_y(grid, ux);
  v *= -1.0;
  v.rename("v");
  const Field ut_y = d_y(grid, utilde);
  utilde_yy = d_yy(grid, utilde).rename("utilde_yy");
  uy = grid.make_field("uy");
  uyy = grid.make_field("uyy");
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      uy(i, j) = shear.d1[j] + ut_y(i, j);
      uyy(i, j) = shear.d2[j] + utilde_yy(i, j);
    }
  uxy = d_y(grid, ux).rename("uxy");
}

PrandtlState make_state(const Grid2D& grid, ShearProfile shear, Field utilde, double t) {
  if (shear.values.size() != grid.y.size())
    throw std::invalid_argument("shear profile does not match grid");
  PrandtlState s;
  s.grid = grid;
  s.t = t;
  s.shear = std::move(shear);
  s.shear.t = t;
  s.utilde = std::move(utilde);
  s.utilde.rename("utilde");
  s.refresh();
  return s;
}

Field make_perturbation(PerturbationKind kind, const Grid2D& grid, double eps) {
  Field f = grid.make_field("utilde");
  if (kind == PerturbationKind::none) return f;
  const double Y = grid.Ymax();
  auto smooth = [&](double x, double y) {
    if (kind == PerturbationKind::non_monotone) return -eps * y * std::exp(-y);
    return eps * std::sin(x) * (std::exp(-y) - std::exp(-2.0 * y));
  };
  for (std::size_t i = 0; i < grid.Nx(); ++i) {
    const double x = grid.x.node(i);
    const double top = smooth(x, Y);
    for (std::size_t j = 0; j < grid.y.size(); ++j) {
      const double y = grid.y.node(j);
      f(i, j) = smooth(x, y) - top * y / Y;
    }
    f(i, 0) = 0.0;
    f(i, grid.y.size() - 1) = 0.0;
  }
  if (kind == PerturbationKind::curvature_spike) {
    const auto& nodes = grid.y.nodes();
    std::size_t js = 1;
    for (std::size_t j = 1; j + 1 < nodes.size(); ++j)
      if (std::abs(nodes[j] - 0.3) < std::abs(nodes[js] - 0.3)) js = j;
    const double h = 0.5 * (nodes[js + 1] - nodes[js - 1]);
    for (std::size_t i = 0; i < grid.Nx(); ++i) f(i, js) += 0.5 * h;
  }
  return f;
}

AdmissibleDataReport validate_data(const Grid2D& grid, const Field& utilde0,
                                   const ShearProfile& shear0, double ceiling) {
  if (!grid.matches(utilde0) || shear0.values.size() != grid.y.size())
    throw std::invalid_argument("initial data do not match grid");
  const PrandtlState s = make_state(grid, shear0, utilde0);
  const Field d1 = d_y(grid, utilde0);
  AdmissibleDataReport r;
  r.c_mono = min_weighted_slope(s);
  for (std::size_t i = 0; i < grid.Nx(); ++i)
    for (std::size_t j = 0; j < grid.y.size(); ++j) {
      const double e = std::exp(grid.y.node(j));
      const double m = std::max({std::abs(utilde0(i, j)), std::abs(d1(i, j)),
                                 std::abs(s.utilde_yy(i, j)), std::abs(s.uxy(i, j))});
      r.C_env = std::max(r.C_env, e * m);
    }
  r.pass = r.c_mono > 0.0 && r.C_env < ceiling;
  return r;
}

double min_weighted_slope(const PrandtlState& s) {
  double m = INFINITY;
  for (std::size_t i = 0; i < s.grid.Nx(); ++i)
    for (std::size_t j = 0; j < s.grid.y.size(); ++j)
      m = std::min(m, std::exp(s.grid.y.node(j)) * s.uy(i, j));
  return m;
}

double max_weighted_slope(const PrandtlState& s) {
  double m = -INFINITY;
  for (std::size_t i = 0; i < s.grid.Nx(); ++i)
    for (std::size_t j = 0; j < s.grid.y.size(); ++j)
      m = std::max(m, std::exp(s.grid.y.node(j)) * s.uy(i, j));
  return m;
}

double admissible_dt(const PrandtlState& s, double cfl) {
  const auto& nodes = s.grid.y.nodes();
  double hmin = INFINITY;
  for (std::size_t j = 1; j < nodes.size(); ++j) hmin = std::min(hmin, nodes[j] - nodes[j - 1]);
  const double umax = s.u.max_abs();
  const double vmax = s.v.max_abs();
  double limit = INFINITY;
  if (umax > 0.0) limit = std::min(limit, s.grid.x.spacing() / umax);
  if (vmax > 0.0) limit = std::min(limit, hmin / vmax);
  return cfl * limit;
}

namespace {

// -(u d_x u~ + v d_y u) + G, with one-sided d_y u where |v| h > 2.
Field explicit_term(const PrandtlState& s, const Forcing& forcing) {
  const auto& y = s.grid.y;
  const std::size_t ny = y.size();
  Field n = s.grid.make_field("explicit");
  parallel_for(s.grid.Nx(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) {
      double uy = s.uy(i, j);
      const double vij = s.v(i, j);
      if (j > 0 && j + 1 < ny) {
        const double h = 0.5 * (y.node(j + 1) - y.node(j - 1));
        if (std::abs(vij) * h > 2.0) {
          uy = vij > 0 ? (s.u(i, j) - s.u(i, j - 1)) / (y.node(j) - y.node(j - 1))
                       : (s.u(i, j + 1) - s.u(i, j)) / (y.node(j + 1) - y.node(j));
        }
      }
      n(i, j) = -(s.u(i, j) * s.ux(i, j) + vij * uy);
    }
  });
  if (forcing) {
    Field g = s.grid.make_field("G");
    forcing(s.t, s, g);
    n += g;
  }
  return n;
}

}  // namespace

Field utilde_time_derivative(const PrandtlState& s, const Forcing& forcing) {
  Field out = s.grid.make_field("utilde_t");
  for (std::size_t i = 0; i < s.grid.Nx(); ++i)
    for (std::size_t j = 0; j < s.grid.y.size(); ++j)
      out(i, j) = -s.u(i, j) * s.ux(i, j) - s.v(i, j) * s.uy(i, j) + s.utilde_yy(i, j);
  if (forcing) {
    Field g = s.grid.make_field("G");
    forcing(s.t, s, g);
    out += g;
  }
  return out;
}

PrandtlState prandtl_step(const PrandtlState& s, double dt, const StepOptions& opt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (opt.enforce_cfl) {
    const double limit = admissible_dt(s, opt.cfl);
    if (dt > limit * (1.0 + 1e-12))
      throw std::domain_error(fmt::format("time step too large: dt={:.6g}, admissible dt={:.6g}",
                                          dt, limit));
  }
  const auto& y = s.grid.y;
  const std::size_t ny = y.size();
  const Field n_now = explicit_term(s, opt.forcing);

  Field next = s.grid.make_field("utilde");
  const double r = s.has_history ? dt / s.dt_prev : 0.0;
  parallel_for(s.grid.Nx(), [&](std::size_t i) {
    std::vector<double> sub(ny, 0.0), diag(ny, 1.0), sup(ny, 0.0), rhs(ny, 0.0);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const auto& st = y.second(j);
      const double a = 0.5 * dt * st.w[0], b = 0.5 * dt * st.w[1], c = 0.5 * dt * st.w[2];
      sub[j] = -a;
      diag[j] = 1.0 - b;
      sup[j] = -c;
      const double adv = s.has_history
                             ? (1.0 + 0.5 * r) * n_now(i, j) - 0.5 * r * s.explicit_prev(i, j)
                             : n_now(i, j);
      rhs[j] = s.utilde(i, j) + a * s.utilde(i, j - 1) + b * s.utilde(i, j) +
               c * s.utilde(i, j + 1) + dt * adv;
    }
    solve_tridiagonal(sub, diag, sup, rhs);
    rhs[0] = 0.0;
    rhs[ny - 1] = 0.0;
    std::copy(rhs.begin(), rhs.end(), next.column(i).begin());
  });

  const double t_new = s.t + dt;
  if (!next.all_finite())
    throw SolverDiverged(fmt::format("solver diverged at t={:.6g}", t_new), t_new, "diverged");
  if (next.max_abs() > opt.blowup_ceiling)
    throw SolverDiverged(fmt::format("solver diverged at t={:.6g}: max|utilde| exceeds {:g}",
                                     t_new, opt.blowup_ceiling),
                         t_new, "criterion_tripped");

  PrandtlState out;
  out.grid = s.grid;
  out.t = t_new;
  out.shear = shear_step(y, s.shear, dt);
  out.utilde = std::move(next);
  out.explicit_prev = n_now;
  out.dt_prev = dt;
  out.has_history = true;
  out.refresh();
  // Monotonicity loss aborts only for data that started above the floor.
  const double c_new = min_weighted_slope(out);
  if (c_new < opt.monotone_floor && min_weighted_slope(s) >= opt.monotone_floor)
    throw SolverDiverged(fmt::format("solver diverged at t={:.6g}: monotonicity lost", t_new),
                         t_new, "monotonicity_lost");
  return out;
}

PrandtlState run(PrandtlState s0, const RunOptions& opt, const Observer& observer) {
  if (opt.t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  if (!(opt.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double t0 = s0.t;
  if (observer) observer(s0);
  if (opt.t_end <= 0.0) return s0;
  const auto steps = static_cast<long>(std::ceil(opt.t_end / opt.dt - 1e-9));
  const double dt = opt.t_end / static_cast<double>(steps);
  long every = opt.observer_interval > 0.0
                   ? std::max(1L, std::lround(opt.observer_interval / dt))
                   : steps;
  PrandtlState s = std::move(s0);
  for (long k = 1; k <= steps; ++k) {
    s = prandtl_step(s, dt, opt.step);
    s.t = t0 + dt * static_cast<double>(k);
    s.shear.t = s.t;
    if (observer && (k % every == 0 || k == steps)) observer(s);
  }
  return s;
}

}  // namespace prandtl_lab
