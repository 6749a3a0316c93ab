#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "prandtl_lab/grid.hpp"
#include "prandtl_lab/paraproduct.hpp"
#include "prandtl_lab/prandtl_solver.hpp"

namespace prandtl_lab {

// mu = e^{y/2}, nu = e^{-y/2}, omega = e^{2y/3}, unit = 1.
struct WeightSpec {
  enum class Kind { mu, nu, omega, unit, custom };
  Kind kind = Kind::unit;
  std::function<double(double)> custom;

  static WeightSpec mu() { return {Kind::mu, {}}; }
  static WeightSpec nu() { return {Kind::nu, {}}; }
  static WeightSpec omega() { return {Kind::omega, {}}; }
  static WeightSpec unit() { return {Kind::unit, {}}; }
  static WeightSpec from(std::function<double(double)> f) { return {Kind::custom, std::move(f)}; }

  double operator()(double y) const;
  std::string label() const;
};

// int int weight(y)^2 f^2 dx dy: exact mean in x times Lx, composite Simpson
// in y on uniform grids with an even number of intervals, trapezoid otherwise.
double weighted_l2_sq(const Grid2D& g, const Field& f, const WeightSpec& w);

// sum over alpha <= k, beta <= l of the weighted L2 norms squared of
// d_x^alpha d_y^beta f. Orders are capped at 3.
double weighted_norm_sq(const Grid2D& g, const Field& f, int k, int l, const WeightSpec& w);
double weighted_norm(const Grid2D& g, const Field& f, int k, int l, const WeightSpec& w);

// ||f||_{H^{k,l}} / (||f||_{H^{k-1,l+1}}^{1/2} ||f||_{H^{k+1,l-1}}^{1/2}), unit weight.
double interpolation_ratio(const Grid2D& g, const Field& f, int k, int l);

struct BlowupSample {
  double value = 0.0;
  double y_at_max = 0.0;
};

// max over nodes of e^y (sum_{k<=2} |d_y^k (u - 1)| + (|d_x u| + |d_x d_y u|) / (1 + y)).
BlowupSample blowup_functional_instant(const PrandtlState& s);

// Running supremum of the instantaneous value across observed snapshots.
class BlowupFunctional {
 public:
  double observe(const PrandtlState& s);
  double value() const noexcept { return sup_.value; }
  double y_at_max() const noexcept { return sup_.y_at_max; }

 private:
  BlowupSample sup_{};
  bool started_ = false;
};

struct EnergyFunctionals {
  double E = 0.0;
  double calE = 0.0;
  double calD = 0.0;
};

EnergyFunctionals energy_functionals(const PrandtlState& s, const GoodUnknownBundle& bundle,
                                     const Forcing& forcing = {});

struct Envelopes {
  double c_mono = 0.0;      // min e^y d_y u
  double C_mono = 0.0;      // max e^y d_y u
  double curv_delta = 0.0;  // max over y <= delta of |d_y^2 u|
};

Envelopes envelopes(const PrandtlState& s, double delta);

struct CriterionConfig {
  double c_floor = 0.05;
  double C_ceiling = 10.0;
  double A_ceiling = 100.0;
  double curv_ceiling = 10.0;
  double delta = 1.0;
};

enum class Verdict { healthy, monotonicity_lost, criterion_tripped };

struct VerdictResult {
  Verdict verdict = Verdict::healthy;
  std::string cause;  // empty, "monotonicity", "upper_envelope", "A" or "curvature"
  // "healthy", "monotonicity_lost" or "criterion_tripped:<cause>".
  std::string label() const;
};

// Checks c_mono, then C_mono, A and curvature; the first violation names the verdict.
VerdictResult criterion_verdict(double c_mono, double C_mono, double A, double curv_delta,
                                const CriterionConfig& cfg);

struct DiagnosticsReport {
  double t = 0.0;
  double E = 0.0;
  double calE = 0.0;
  double calD = 0.0;
  double A = 0.0;
  double A_y = 0.0;
  double c_mono = 0.0;
  double C_mono = 0.0;
  double curv_delta = 0.0;
  VerdictResult verdict;
};

// Stateful observer owning the running supremum of A.
class DiagnosticsObserver {
 public:
  DiagnosticsObserver(DyadicFilterBank bank, CriterionConfig cfg, Forcing forcing = {});
  const DiagnosticsReport& observe(const PrandtlState& s);
  const std::vector<DiagnosticsReport>& reports() const noexcept { return reports_; }

 private:
  DyadicFilterBank bank_;
  CriterionConfig cfg_;
  Forcing forcing_;
  BlowupFunctional A_;
  std::vector<DiagnosticsReport> reports_;
};

struct GronwallPoint {
  double t = 0.0;
  double calE = 0.0;
  double lhs = 0.0;    // d calE/dt + calD
  double ratio = 0.0;  // lhs / calE
  double A = 0.0;
  bool defined = false;
  bool flagged = false;  // ratio above the growth ceiling
};

// d calE/dt by centered differences (one-sided at the ends). Undefined where
// calE vanishes. Requires at least three reports.
std::vector<GronwallPoint> gronwall_monitor(const std::vector<DiagnosticsReport>& reports,
                                            double ratio_ceiling = 50.0);

}  // namespace prandtl_lab
