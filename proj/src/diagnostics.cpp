#include "prandtl_lab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl_lab {

double WeightSpec::operator()(double y) const {
  switch (kind) {
    case Kind::mu: return std::exp(0.5 * y);
    case Kind::nu: return std::exp(-0.5 * y);
    case Kind::omega: return std::exp(2.0 * y / 3.0);
    case Kind::unit: return 1.0;
    case Kind::custom: return custom(y);
  }
  return 1.0;
}

std::string WeightSpec::label() const {
  switch (kind) {
    case Kind::mu: return "mu";
    case Kind::nu: return "nu";
    case Kind::omega: return "omega";
    case Kind::unit: return "unit";
    case Kind::custom: return "custom";
  }
  return "custom";
}

double weighted_l2_sq(const Grid2D& g, const Field& f, const WeightSpec& w) {
  if (!g.matches(f)) throw std::invalid_argument("field does not match grid");
  const auto& y = g.y.nodes();
  const std::size_t n = y.size();
  // x-integral first: Lx times the mean over the periodic samples.
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = 0; j < n; ++j) row[j] += f(i, j) * f(i, j);
  for (std::size_t j = 0; j < n; ++j) {
    const double wj = w(y[j]);
    row[j] *= g.Lx() / static_cast<double>(g.Nx()) * wj * wj;
  }
  double acc = 0.0;
  const std::size_t intervals = n - 1;
  if (g.y.is_uniform() && intervals % 2 == 0) {
    const double h = y[1] - y[0];
    for (std::size_t j = 0; j + 2 < n; j += 2) acc += h / 3.0 * (row[j] + 4.0 * row[j + 1] + row[j + 2]);
  } else {
    for (std::size_t j = 0; j + 1 < n; ++j) acc += 0.5 * (y[j + 1] - y[j]) * (row[j] + row[j + 1]);
  }
  return acc;
}

double weighted_norm_sq(const Grid2D& g, const Field& f, int k, int l, const WeightSpec& w) {
  if (k < 0 || l < 0 || k > 3 || l > 3)
    throw std::invalid_argument("derivative order exceeds stencil support");
  double acc = 0.0;
  Field dy = f;
  for (int beta = 0; beta <= l; ++beta) {
    if (beta > 0) dy = d_y(g, dy);
    Field dxy = dy;
    for (int alpha = 0; alpha <= k; ++alpha) {
      if (alpha > 0) dxy = d_x(g, dxy);
      acc += weighted_l2_sq(g, dxy, w);
    }
  }
  return acc;
}

double weighted_norm(const Grid2D& g, const Field& f, int k, int l, const WeightSpec& w) {
  return std::sqrt(weighted_norm_sq(g, f, k, l, w));
}

double interpolation_ratio(const Grid2D& g, const Field& f, int k, int l) {
  const auto u = WeightSpec::unit();
  return weighted_norm(g, f, k, l, u) /
         std::sqrt(weighted_norm(g, f, k - 1, l + 1, u) * weighted_norm(g, f, k + 1, l - 1, u));
}

BlowupSample blowup_functional_instant(const PrandtlState& s) {
  BlowupSample out;
  out.value = -1.0;
  for (std::size_t i = 0; i < s.grid.Nx(); ++i)
    for (std::size_t j = 0; j < s.grid.y.size(); ++j) {
      const double y = s.grid.y.node(j);
      const double v = std::exp(y) * (std::abs(s.u(i, j) - 1.0) + std::abs(s.uy(i, j)) +
                                      std::abs(s.uyy(i, j)) +
                                      (std::abs(s.ux(i, j)) + std::abs(s.uxy(i, j))) / (1.0 + y));
      if (v > out.value) {
        out.value = v;
        out.y_at_max = y;
      }
    }
  return out;
}

double BlowupFunctional::observe(const PrandtlState& s) {
  const BlowupSample now = blowup_functional_instant(s);
  if (!started_ || now.value > sup_.value) sup_ = now;
  started_ = true;
  return sup_.value;
}

EnergyFunctionals energy_functionals(const PrandtlState& s, const GoodUnknownBundle& bundle,
                                     const Forcing& forcing) {
  const Grid2D& g = s.grid;
  const auto mu = WeightSpec::mu(), nu = WeightSpec::nu(), om = WeightSpec::omega();
  const Field& ut = s.utilde;
  const Field ut_y = d_y(g, ut);
  const Field ut_t = utilde_time_derivative(s, forcing);
  const Field ut_ty = d_y(g, ut_t);
  const Field w_y = d_y(g, bundle.w_good);

  EnergyFunctionals e;
  e.E = weighted_norm_sq(g, ut, 1, 2, mu) + weighted_norm_sq(g, ut, 3, 1, mu) +
        weighted_norm_sq(g, ut, 2, 0, om);
  const double ut_t_mu = weighted_norm_sq(g, ut_t, 1, 0, mu);
  const double ut_y_mu = weighted_norm_sq(g, ut_y, 1, 0, mu);
  e.calE = weighted_norm_sq(g, bundle.w_good, 3, 0, nu) + weighted_norm_sq(g, ut, 2, 0, om) +
           weighted_norm_sq(g, ut, 1, 0, mu) + ut_y_mu + ut_t_mu;
  e.calD = weighted_norm_sq(g, w_y, 3, 0, nu) + weighted_norm_sq(g, ut_y, 2, 0, om) + ut_y_mu +
           ut_t_mu + weighted_norm_sq(g, ut_ty, 1, 0, mu);
  return e;
}

Envelopes envelopes(const PrandtlState& s, double delta) {
  Envelopes e;
  e.c_mono = min_weighted_slope(s);
  e.C_mono = max_weighted_slope(s);
  for (std::size_t i = 0; i < s.grid.Nx(); ++i)
    for (std::size_t j = 0; j < s.grid.y.size() && s.grid.y.node(j) <= delta; ++j)
      e.curv_delta = std::max(e.curv_delta, std::abs(s.uyy(i, j)));
  return e;
}

std::string VerdictResult::label() const {
  switch (verdict) {
    case Verdict::healthy: return "healthy";
    case Verdict::monotonicity_lost: return "monotonicity_lost";
    case Verdict::criterion_tripped: return "criterion_tripped:" + cause;
  }
  return "healthy";
}

VerdictResult criterion_verdict(double c_mono, double C_mono, double A, double curv_delta,
                                const CriterionConfig& cfg) {
  if (!(c_mono >= cfg.c_floor)) return {Verdict::monotonicity_lost, "monotonicity"};
  if (!(C_mono <= cfg.C_ceiling)) return {Verdict::criterion_tripped, "upper_envelope"};
  if (!(A <= cfg.A_ceiling)) return {Verdict::criterion_tripped, "A"};
  if (!(curv_delta <= cfg.curv_ceiling)) return {Verdict::criterion_tripped, "curvature"};
  return {Verdict::healthy, ""};
}

DiagnosticsObserver::DiagnosticsObserver(DyadicFilterBank bank, CriterionConfig cfg,
                                         Forcing forcing)
    : bank_(std::move(bank)), cfg_(cfg), forcing_(std::move(forcing)) {}

const DiagnosticsReport& DiagnosticsObserver::observe(const PrandtlState& s) {
  DiagnosticsReport r;
  r.t = s.t;
  const Envelopes env = envelopes(s, cfg_.delta);
  r.c_mono = env.c_mono;
  r.C_mono = env.C_mono;
  r.curv_delta = env.curv_delta;
  r.A = A_.observe(s);
  r.A_y = A_.y_at_max();
  if (env.c_mono > 0.0) {
    const GoodUnknownBundle bundle = build_good_unknown(s, bank_, forcing_);
    const EnergyFunctionals e = energy_functionals(s, bundle, forcing_);
    r.E = e.E;
    r.calE = e.calE;
    r.calD = e.calD;
  } else {
    r.E = weighted_norm_sq(s.grid, s.utilde, 1, 2, WeightSpec::mu()) +
          weighted_norm_sq(s.grid, s.utilde, 3, 1, WeightSpec::mu()) +
          weighted_norm_sq(s.grid, s.utilde, 2, 0, WeightSpec::omega());
    r.calE = NAN;
    r.calD = NAN;
  }
  r.verdict = criterion_verdict(r.c_mono, r.C_mono, r.A, r.curv_delta, cfg_);
  reports_.push_back(r);
  return reports_.back();
}

std::vector<GronwallPoint> gronwall_monitor(const std::vector<DiagnosticsReport>& reports,
                                            double ratio_ceiling) {
  if (reports.size() < 3) throw std::invalid_argument("Gronwall monitor needs three snapshots");
  const std::size_t n = reports.size();
  std::vector<GronwallPoint> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    const double dE = (reports[hi].calE - reports[lo].calE) / (reports[hi].t - reports[lo].t);
    GronwallPoint& p = out[k];
    p.t = reports[k].t;
    p.calE = reports[k].calE;
    p.A = reports[k].A;
    p.lhs = dE + reports[k].calD;
    p.defined = std::isfinite(p.calE) && p.calE > 0.0 && std::isfinite(p.lhs);
    p.ratio = p.defined ? p.lhs / p.calE : NAN;
    p.flagged = p.defined && p.ratio > ratio_ceiling;
  }
  return out;
}

}  // namespace prandtl_lab
