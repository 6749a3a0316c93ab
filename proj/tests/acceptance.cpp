// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "prandtl_lab/barriers.hpp"
#include "prandtl_lab/commands.hpp"
#include "prandtl_lab/config.hpp"
#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/io.hpp"
#include "prandtl_lab/paraproduct.hpp"

using namespace prandtl_lab;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_s <= 0.0 || secs < budget_s;
  const bool ok = v.pass && in_time;
  failures += !ok;
  std::cout << fmt::format("{} {}: {} [{:.2f} s{}]\n", ok ? "PASS" : "FAIL", name, v.detail, secs,
                           budget_s > 0.0 ? fmt::format(" of {:.0f} s", budget_s) : "")
            << std::flush;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path workdir() {
  const fs::path p = fs::current_path() / "acceptance_out";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& file, const std::string& text) {
  std::ofstream(dir / file) << text;
  return dir / file;
}

int invoke(const std::string& cmd, const CommandOptions& opt) {
  std::ostringstream log, err;
  const int code = dispatch(cmd, opt, log, err);
  if (code != 0) std::cout << "  [" << cmd << " exit " << code << "] " << err.str();
  return code;
}

double erf_error(std::size_t ny, double dt) {
  const NormalAxis y = NormalAxis::uniform(0.0, 10.0, ny);
  ShearProfile p = shear_erf(y, 0.25);
  const long steps = std::lround(0.5 / dt);
  for (long k = 0; k < steps; ++k) p = shear_step(y, p, dt);
  double e = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    e = std::max(e, std::abs(p.values[j] - std::erf(y.node(j) / (2.0 * std::sqrt(0.75)))));
  return e;
}

double good_unknown_residual(const ScenarioConfig& cfg) {
  const double dt = cfg.run.dt;
  RunOptions o;
  o.t_end = 0.1 - dt;
  o.dt = dt;
  const PrandtlState s0 = run(make_initial_state(cfg), o);
  const PrandtlState s1 = prandtl_step(s0, dt);
  const PrandtlState s2 = prandtl_step(s1, dt);
  return verify_good_unknown_equation(s0, s1, s2, build_filterbank(cfg.grid.Nx, cfg.grid.Lx)).max_norm;
}

CroccoState synthetic(const CroccoGrid& g, double t, const std::function<double(double, double)>& w) {
  Field f = g.make_field();
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k) f(i, k) = w(g.eta.node(k), g.xi.node(i));
  return make_crocco_state(g, std::move(f), t);
}

}  // namespace

int main() {
  const fs::path dir = workdir();

  criterion("shear oracle", 5.0, [] {
    const double coarse = erf_error(256, 1e-3);
    const double fine = erf_error(512, 5e-4);
    return Outcome{coarse <= 1e-4 && coarse / fine >= 3.5,
                   fmt::format("max error {:.3e}, refinement ratio {:.2f}", coarse, coarse / fine)};
  });

  criterion("Bony exactness", 5.0, [] {
    const DyadicFilterBank bank = build_filterbank(128, kTwoPi);
    double worst = 0.0;
    for (std::uint64_t p = 0; p < 50; ++p) {
      const Field f = random_band_limited(128, 20240501 + 2 * p);
      const Field g = random_band_limited(128, 20240502 + 2 * p);
      Field prod(128, 1);
      for (std::size_t i = 0; i < 128; ++i) prod(i, 0) = f(i, 0) * g(i, 0);
      const Field sum = paraproduct_T(bank, f, g) + remainder_R(bank, g, f);
      worst = std::max(worst, (sum - prod).max_abs() / prod.max_abs());
    }
    double partition = 0.0;
    for (std::size_t k = 0; k < bank.multipliers.front().size(); ++k) {
      double s = 0.0;
      for (const auto& m : bank.multipliers) s += m[k];
      partition = std::max(partition, std::abs(s - 1.0));
    }
    return Outcome{worst <= 1e-12 && partition <= 1e-14,
                   fmt::format("max relative error {:.3e}, partition residual {:.3e}", worst, partition)};
  });

  criterion("good-unknown equation", 60.0, [] {
    const ScenarioConfig base;
    const double coarse = good_unknown_residual(base);
    const double fine = good_unknown_residual(refined(base));
    ScenarioConfig shear = base;
    shear.data.perturbation = "none";
    const double zero = good_unknown_residual(shear);
    return Outcome{coarse / fine >= 1.5 && zero <= 1e-10,
                   fmt::format("residual {:.3e} -> {:.3e} (factor {:.2f}), shear {:.3e}", coarse, fine,
                               coarse / fine, zero)};
  });

  criterion("commuting diagram", 120.0, [&] {
    CommandOptions opt;
    opt.out = dir;
    opt.refine = true;
    opt.config = write_config(dir, "compare.json", R"({"name":"compare","run":{"t_end":0.25}})");
    const int code = invoke("crocco-compare", opt);
    const json j = json::parse(slurp(dir / "compare/audits/crocco_compare.json"));
    const double base = j["base"]["max_abs"].get<double>();
    const double fine = j["refined"]["max_abs"].get<double>();
    return Outcome{code == 0 && base <= 5e-3 && fine < base,
                   fmt::format("max discrepancy {:.3e} -> {:.3e} on eta <= 0.9", base, fine)};
  });

  criterion("comparison-function audit (shear in Crocco)", 30.0, [] {
    ScenarioConfig cfg;
    cfg.data.perturbation = "none";
    const PrandtlState s = make_initial_state(cfg);
    const CroccoGrid cg = crocco_grid_for(s.grid, cfg.grid.Neta);
    CroccoTrajectory traj;
    crocco_run(to_crocco(s, cg), cfg.run.t_end, std::min(cfg.run.dt, 0.36 * cg.xi.spacing()),
               cfg.run.observer_interval, [&](const CroccoState& c) { traj.push_back(c); });
    const Prop41Result r = audit_prop_4_1(traj, cfg.audits.epsilon);
    double direct = INFINITY;
    for (const auto& c : traj)
      for (std::size_t i = 0; i < cg.Nxi(); ++i)
        for (std::size_t k = 0; k < cg.eta.size(); ++k)
          direct = std::min(direct, c.w(i, k) - r.c1 * (1.0 - cg.eta.node(k)));
    const bool ok = r.identity_max_rel_error <= 1e-6 && r.upper.passed() && r.lower.passed() &&
                    direct >= -1e-14 && r.c1 > 0.0;
    return Outcome{ok, fmt::format("identity {:.3e}, upper {}, lower {}, c1 {:.3e}, direct margin {:.3e}",
                                   r.identity_max_rel_error, r.upper.passed() ? "pass" : "fail",
                                   r.lower.passed() ? "pass" : "fail", r.c1, direct)};
  });

  criterion("monotonicity and curvature verdicts", 60.0, [&] {
    CommandOptions opt;
    opt.out = dir / "first";
    if (invoke("run", opt) != 0) return Outcome{false, "default run failed"};
    const CsvTable t = read_csv(opt.out / "default/diagnostics.csv");
    double cmin = INFINITY;
    bool healthy = true;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      cmin = std::min(cmin, t.number(r, t.column("c_mono")));
      healthy = healthy && t.rows[r][t.column("verdict")] == "healthy";
    }
    const bool reached_end = std::abs(t.number(t.rows.size() - 1, 0) - 1.0) < 1e-12;

    CommandOptions spike;
    spike.out = dir;
    spike.config = write_config(dir, "spike.json",
                                R"({"name":"spike","data":{"perturbation":"curvature_spike"},"run":{"t_end":0.1}})");
    if (invoke("run", spike) != 0) return Outcome{false, "spike run failed"};
    const CsvTable s = read_csv(dir / "spike/diagnostics.csv");
    bool tripped = false;
    for (std::size_t r = 0; r < s.rows.size(); ++r)
      tripped = tripped || s.rows[r][s.column("verdict")] == "criterion_tripped:curvature";
    return Outcome{cmin >= 0.2 && healthy && reached_end && tripped,
                   fmt::format("min c_mono {:.4f}, healthy {}, spike tripped curvature {}", cmin, healthy,
                               tripped)};
  });

  criterion("diagnostics closed forms", 5.0, [] {
    const Grid2D g = Grid2D::uniform(kTwoPi, 128, 10.0, 256);
    const double A = blowup_functional_instant(make_state(g, shear_exp(g.y), g.make_field())).value;
    Field f = g.make_field(), h = g.make_field();
    for (std::size_t i = 0; i < g.Nx(); ++i)
      for (std::size_t j = 0; j < g.y.size(); ++j) {
        const double x = g.x.node(i), y = g.y.node(j);
        f(i, j) = std::sin(x) * std::exp(-y);
        h(i, j) = std::sin(x) * y * std::exp(-y);
      }
    const double l2 =
        std::abs(weighted_l2_sq(g, f, WeightSpec::mu()) - std::numbers::pi * (1.0 - std::exp(-10.0)));
    const double ratio = std::max(interpolation_ratio(g, h, 1, 1), interpolation_ratio(g, h, 2, 1));
    return Outcome{std::abs(A - 3.0) <= 5e-3 && l2 <= 1e-6 && ratio <= 1.05,
                   fmt::format("A {:.5f}, L2_mu error {:.2e}, interpolation ratio {:.4f}", A, l2, ratio)};
  });

  criterion("determinism", 0.0, [&] {
    CommandOptions opt;
    opt.out = dir / "second";
    if (invoke("run", opt) != 0) return Outcome{false, "second run failed"};
    const fs::path a = dir / "first/default", b = dir / "second/default";
    bool same = slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv");
    json ma = json::parse(slurp(a / "manifest.json")), mb = json::parse(slurp(b / "manifest.json"));
    ma.erase("wall_time_s");
    mb.erase("wall_time_s");
    same = same && ma.dump() == mb.dump();
    std::size_t files = 0;
    for (const auto& name : ma["files"]) {
      same = same && slurp(a / name.get<std::string>()) == slurp(b / name.get<std::string>());
      ++files;
    }
    // Plots are a pure function of the CSVs.
    CommandOptions pa, pb;
    pa.artifact_dir = a;
    pb.artifact_dir = b;
    same = same && invoke("plot", pa) == 0 && invoke("plot", pb) == 0;
    std::size_t svgs = 0;
    for (const auto& e : fs::directory_iterator(a / "plots")) {
      same = same && slurp(e.path()) == slurp(b / "plots" / e.path().filename());
      ++svgs;
    }
    return Outcome{same && svgs == 6,
                   fmt::format("{} artifact files and {} SVG plots byte-identical: {}", files, svgs, same)};
  });

  criterion("gradient-region monitors", 0.0, [] {
    const CroccoGrid g = CroccoGrid::uniform(kTwoPi, 128, 256);
    const double eps1 = 0.2, a = 0.1, k = 3.0;
    CroccoTrajectory flat, ripple;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      flat.push_back(synthetic(g, t, [](double eta, double) { return 1.0 - eta; }));
      ripple.push_back(synthetic(g, t, [&](double eta, double xi) {
        return (1.0 - eta) + a * std::pow(eta, 4) * std::sin(k * xi) * (1.0 - eta);
      }));
    }
    const double zero = eta3_monitor(flat, eps1, 1.0).constant;
    double designed = 0.0;
    for (std::size_t n = 0; n < g.eta.size(); ++n) {
      const double eta = g.eta.node(n);
      if (eta < 0.75 * eps1) designed = std::max(designed, a * k * std::pow(eta, 7) * (1.0 - eta));
    }
    const double measured = eta3_monitor(ripple, eps1, 1.0).constant;
    const double ripple_err = std::abs(measured / designed - 1.0);

    const double xi0 = 0.3;
    const CroccoState c = synthetic(g, 1.0, [](double eta, double xi) {
      return (1.0 - eta) * (1.0 + 0.1 * std::sin(xi));
    });
    const HolderReport h = audit_lemma_5_3(c, 0.5, xi0, 1.0);
    const double window = (1.0 - h.eta0) * (1.0 - h.eta0) / 2.0;
    double analytic = 0.0;
    for (int n = 1; n <= 400000; ++n) {
      const double d = window * n / 400000.0;
      analytic = std::max(analytic, 0.1 * std::abs(std::sin(xi0 + d) - std::sin(xi0)) / std::sqrt(d));
    }
    const double holder_err = std::abs(h.C_sqrt / analytic - 1.0);
    return Outcome{zero == 0.0 && ripple_err <= 0.1 && holder_err <= 0.05,
                   fmt::format("flat {:.1e}, ripple rel. error {:.3f}, modulus rel. error {:.3f}", zero,
                               ripple_err, holder_err)};
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS\n" : fmt::format("{} CRITERIA FAILED\n", failures));
  return failures == 0 ? 0 : 1;
}
