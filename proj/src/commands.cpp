#include "prandtl_lab/commands.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "prandtl_lab/barriers.hpp"
#include "prandtl_lab/crocco.hpp"
#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/errors.hpp"
#include "prandtl_lab/io.hpp"
#include "prandtl_lab/paraproduct.hpp"
#include "prandtl_lab/svg.hpp"

namespace prandtl_lab {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

json config_json(const ScenarioConfig& cfg) { return json::parse(serialize_config(cfg)); }

RunOptions run_options(const ScenarioConfig& cfg) {
  RunOptions ro;
  ro.t_end = cfg.run.t_end;
  ro.dt = cfg.run.dt;
  ro.observer_interval = cfg.run.observer_interval;
  ro.step.cfl = cfg.run.cfl;
  return ro;
}

// The explicit upwind transport in xi needs dt <= 0.4 dxi; keep a 10% margin.
double crocco_dt(const ScenarioConfig& cfg, const CroccoGrid& g) {
  return std::min(cfg.run.dt, 0.36 * g.xi.spacing());
}

// Non-finite values are not valid JSON numbers; emit them as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string snapshot_name(const char* prefix, std::size_t index) {
  return fmt::format("snapshots/{}_{:04d}.csv", prefix, index);
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json audit_json(const BarrierAudit& a) {
  json constants = json::object();
  for (const auto& [k, v] : a.spec.constants) constants[k] = num(v);
  json boundary = json::object();
  for (const auto& [k, v] : a.boundary_pass) boundary[k] = v;
  json notes = json::object();
  for (const auto& [k, v] : a.notes) notes[k] = v;
  const auto& r = a.spec.region;
  return json{{"kind", to_string(a.spec.kind)},
              {"constants", constants},
              {"region",
               {{"eta_lo", num(r.eta_lo)}, {"eta_hi", num(r.eta_hi)}, {"xi_lo", num(r.xi_lo)},
                {"xi_hi", num(r.xi_hi)}, {"t_lo", num(r.t_lo)}, {"t_hi", num(r.t_hi)}}},
              {"interior_sign_pass_fraction", num(a.interior_sign_pass_fraction)},
              {"interior_nodes", a.interior_nodes},
              {"inconclusive_nodes", a.inconclusive_nodes},
              {"boundary_pass", boundary},
              {"conclusion_pass", a.conclusion_pass},
              {"worst_margin", num(a.worst_margin)},
              {"noise_floor", num(a.noise_floor)},
              {"applicable", a.applicable},
              {"notes", notes},
              {"passed", a.passed()}};
}

json versions_json() {
  return json{{"prandtl_lab", kVersion},
              {"fmt", FMT_VERSION},
              {"fftw", std::string(fftw_version)},
              {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                            NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)},
              {"compiler", __VERSION__}};
}

std::string log_line(const std::string& status, const std::string& what) {
  return fmt::format("{}: {}\n", status, what);
}

}  // namespace

ScenarioConfig resolve_config(const CommandOptions& opt) {
  ScenarioConfig cfg = opt.config.empty() ? ScenarioConfig{} : load_config(opt.config);
  if (opt.refine) cfg = refined(cfg);
  validate_config(cfg);
  return cfg;
}

fs::path scenario_dir(const CommandOptions& opt, const ScenarioConfig& cfg) {
  return opt.out / cfg.name;
}

int cmd_run(const CommandOptions& opt, std::ostream& log) {
  const ScenarioConfig cfg = resolve_config(opt);
  const fs::path dir = scenario_dir(opt, cfg);
  const auto start = std::chrono::steady_clock::now();

  DiagnosticsObserver diag(build_filterbank(cfg.grid.Nx, cfg.grid.Lx), cfg.criterion);
  std::vector<std::string> files;
  std::size_t observed = 0;
  const auto observer = [&](const PrandtlState& s) {
    diag.observe(s);
    if (cfg.run.snapshot_stride > 0 && observed % cfg.run.snapshot_stride == 0) {
      const std::string name = snapshot_name("physical", observed / cfg.run.snapshot_stride);
      write_text(dir / name, physical_snapshot_csv(s));
      files.push_back(name);
    }
    ++observed;
  };

  std::string status = "completed";
  const auto finish = [&]() {
    write_text(dir / "diagnostics.csv", diagnostics_csv(diag.reports(), config_json(cfg).dump()));
    files.push_back("diagnostics.csv");
    std::sort(files.begin(), files.end());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{{"command", "run"},
                  {"scenario", cfg.name},
                  {"config", config_json(cfg)},
                  {"refine", opt.refine},
                  {"status", status},
                  {"observer_rows", diag.reports().size()},
                  {"versions", versions_json()},
                  {"files", files},
                  {"wall_time_s", wall}};
    write_json(dir / "manifest.json", manifest);
  };

  try {
    run(make_initial_state(cfg), run_options(cfg), observer);
  } catch (const SolverDiverged& e) {
    status = fmt::format("diverged at t={} ({})", format_number(e.time()), e.verdict());
    finish();
    throw;
  }
  finish();

  const auto& reports = diag.reports();
  std::size_t unhealthy = 0;
  for (const auto& r : reports) unhealthy += r.verdict.verdict != Verdict::healthy;
  const std::string last = reports.empty() ? "none" : reports.back().verdict.label();
  log << fmt::format("run '{}': {} observer rows, {} non-healthy, final verdict {}\n", cfg.name,
                     reports.size(), unhealthy, last);
  log << fmt::format("artifacts in {}\n", dir.string());
  return kExitOk;
}

namespace {

struct Comparison {
  double max_abs = 0.0;
  double l2 = 0.0;
  std::size_t nodes = 0;
  CroccoState evolved_then_mapped;
  CroccoState mapped_then_evolved;
};

constexpr double kCompareEtaMax = 0.9;

Comparison compare_formulations(const ScenarioConfig& cfg) {
  const PrandtlState s0 = make_initial_state(cfg);
  const CroccoGrid cg = crocco_grid_for(s0.grid, cfg.grid.Neta);
  CroccoState c0 = to_crocco(s0, cg);
  const PrandtlState s1 = run(s0, run_options(cfg));
  Comparison out;
  out.evolved_then_mapped = to_crocco(s1, cg);
  out.mapped_then_evolved = crocco_run(std::move(c0), cfg.run.t_end, crocco_dt(cfg, cg), 0.0);
  const auto& a = out.evolved_then_mapped.w;
  const auto& b = out.mapped_then_evolved.w;
  double sum = 0.0;
  for (std::size_t i = 0; i < cg.Nxi(); ++i)
    for (std::size_t k = 0; k < cg.eta.size(); ++k) {
      if (cg.eta.node(k) > kCompareEtaMax + 1e-12) continue;
      const double d = std::abs(a(i, k) - b(i, k));
      out.max_abs = std::max(out.max_abs, d);
      sum += d * d;
      ++out.nodes;
    }
  out.l2 = std::sqrt(sum * cg.xi.spacing() * cg.deta());
  return out;
}

std::string discrepancy_csv(const Comparison& c) {
  const auto& g = c.evolved_then_mapped.grid;
  std::string out = fmt::format("# t={} eta_max={}\n", format_number(c.evolved_then_mapped.t),
                                format_number(kCompareEtaMax));
  out += "xi,eta,w_evolve_then_map,w_map_then_evolve,difference\n";
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k) {
      if (g.eta.node(k) > kCompareEtaMax + 1e-12) continue;
      const double a = c.evolved_then_mapped.w(i, k);
      const double b = c.mapped_then_evolved.w(i, k);
      out += fmt::format("{},{},{},{},{}\n", format_number(g.xi.node(i)), format_number(g.eta.node(k)),
                         format_number(a), format_number(b), format_number(a - b));
    }
  return out;
}

json comparison_json(const ScenarioConfig& cfg, const Comparison& c) {
  return json{{"Nx", cfg.grid.Nx},
              {"Ny", cfg.grid.Ny},
              {"Neta", cfg.grid.Neta},
              {"dt", cfg.run.dt},
              {"t", num(c.evolved_then_mapped.t)},
              {"max_abs", num(c.max_abs)},
              {"l2", num(c.l2)},
              {"nodes", c.nodes}};
}

}  // namespace

int cmd_crocco_compare(const CommandOptions& opt, std::ostream& log) {
  CommandOptions base_opt = opt;
  base_opt.refine = false;
  const ScenarioConfig base = resolve_config(base_opt);
  const fs::path dir = scenario_dir(opt, base);

  const Comparison coarse = compare_formulations(base);
  json report{{"command", "crocco-compare"},
              {"config", config_json(base)},
              {"eta_max", kCompareEtaMax},
              {"base", comparison_json(base, coarse)}};
  log << fmt::format("crocco-compare '{}': max {} L2 {} on eta <= {}\n", base.name,
                     format_number(coarse.max_abs), format_number(coarse.l2), kCompareEtaMax);
  int code = kExitOk;
  if (opt.refine) {
    const ScenarioConfig fine_cfg = refined(base);
    validate_config(fine_cfg);
    const Comparison fine = compare_formulations(fine_cfg);
    const bool improved = fine.max_abs < coarse.max_abs;
    const double slope =
        fine.max_abs > 0.0 && coarse.max_abs > 0.0 ? std::log2(coarse.max_abs / fine.max_abs) : NAN;
    report["refined"] = comparison_json(fine_cfg, fine);
    report["refinement_slope"] = num(slope);
    report["improved"] = improved;
    log << fmt::format("refined: max {} L2 {}, slope {}, {}\n", format_number(fine.max_abs),
                       format_number(fine.l2), format_number(slope),
                       improved ? "improved" : "NOT improved");
    write_text(dir / "audits/crocco_discrepancy.csv", discrepancy_csv(fine));
    if (!improved) code = kExitAuditFailed;
  } else {
    write_text(dir / "audits/crocco_discrepancy.csv", discrepancy_csv(coarse));
  }
  write_json(dir / "audits/crocco_compare.json", report);
  return code;
}

namespace {

bool enabled(const ScenarioConfig& cfg, const std::string& name) {
  return std::find(cfg.audits.enabled.begin(), cfg.audits.enabled.end(), name) !=
         cfg.audits.enabled.end();
}

std::string barrier_margin_csv(const CroccoTrajectory& traj, double C, double c1) {
  std::string out = fmt::format("# C={} c1={}\n", format_number(C), format_number(c1));
  out += "t,eta,upper_margin,lower_margin\n";
  for (const auto& c : traj) {
    const auto& g = c.grid;
    for (std::size_t k = 0; k + 1 < g.eta.size(); ++k) {
      const double s = 1.0 - g.eta.node(k);
      double up = INFINITY, lo = INFINITY;
      for (std::size_t i = 0; i < g.Nxi(); ++i) {
        up = std::min(up, C * s - c.w(i, k));
        lo = std::min(lo, c.w(i, k) - c1 * s);
      }
      out += fmt::format("{},{},{},{}\n", format_number(c.t), format_number(g.eta.node(k)),
                         format_number(up), format_number(lo));
    }
  }
  return out;
}

}  // namespace

int cmd_barrier_audit(const CommandOptions& opt, std::ostream& log) {
  const ScenarioConfig cfg = resolve_config(opt);
  const fs::path dir = scenario_dir(opt, cfg);
  const double T = cfg.run.t_end;

  const PrandtlState s0 = make_initial_state(cfg);
  const CroccoGrid cg = crocco_grid_for(s0.grid, cfg.grid.Neta);
  CroccoState c0 = to_crocco(s0, cg);
  if (enabled(cfg, "prop_4_1")) {
    // Fail before the evolution when the comparison recipe cannot be built.
    const auto [c, C] = crocco_envelope(c0);
    prop_4_1_constants(c, C, cfg.audits.epsilon, T, cg.eta);
  }

  CroccoTrajectory traj;
  crocco_run(std::move(c0), T, crocco_dt(cfg, cg), cfg.run.observer_interval,
             [&](const CroccoState& c) { traj.push_back(c); });
  if (cfg.run.snapshot_stride > 0)
    for (std::size_t n = 0; n < traj.size(); n += cfg.run.snapshot_stride)
      write_text(dir / snapshot_name("crocco", n / cfg.run.snapshot_stride),
                 crocco_snapshot_csv(traj[n]));

  bool all_pass = true;
  const auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    all_pass = all_pass && pass;
    log << log_line(pass ? "PASS" : "FAIL", name + " " + detail);
  };

  if (enabled(cfg, "prop_4_1")) {
    const Prop41Result r = audit_prop_4_1(traj, cfg.audits.epsilon);
    const auto& k = r.constants;
    const bool pass = r.upper.passed() && r.lower.passed() && r.identity_max_rel_error <= 1e-6 &&
                      r.direct_upper_pass && r.direct_lower_pass;
    json j{{"audit", "prop_4_1"},
           {"passed", pass},
           {"constants",
            {{"c", num(k.c)}, {"C", num(k.C)}, {"eps", num(k.eps)}, {"eps_low", num(k.eps_low)},
             {"C2", num(k.C2)}, {"alpha", num(k.alpha)}, {"C1", num(k.C1)}, {"beta", num(k.beta)},
             {"T", num(k.T)}, {"c1", num(k.c1)}}},
           {"upper", audit_json(r.upper)},
           {"lower", audit_json(r.lower)},
           {"identity_max_rel_error", num(r.identity_max_rel_error)},
           {"direct_upper_pass", r.direct_upper_pass},
           {"direct_lower_pass", r.direct_lower_pass},
           {"direct_lower_margin", num(r.direct_lower_margin)},
           {"c1", num(r.c1)}};
    write_json(dir / "audits/prop_4_1.json", j);
    write_text(dir / "audits/barrier_margin.csv", barrier_margin_csv(traj, k.C, r.c1));
    report("prop_4_1", pass,
           fmt::format("identity {} c1 {}", format_number(r.identity_max_rel_error),
                       format_number(r.c1)));
  }

  if (enabled(cfg, "lemma_5_3")) {
    const HolderReport h = audit_lemma_5_3(traj.back(), cfg.audits.eta0, cfg.audits.xi0, T,
                                           cfg.audits.burn_in);
    json j{{"audit", "lemma_5_3"},
           {"passed", h.consistent},
           {"eta0", num(h.eta0)},
           {"xi0", num(h.xi0)},
           {"t0", num(h.t0)},
           {"window_sqrt", num(h.window_sqrt)},
           {"window_lin", num(h.window_lin)},
           {"c_lin", num(h.c_lin)},
           {"C_sqrt", num(h.C_sqrt)},
           {"C_sqrt_on_lin", num(h.C_sqrt_on_lin)},
           {"C_lin", num(h.C_lin)},
           {"samples", h.samples},
           {"wrapped", h.wrapped},
           {"consistent", h.consistent}};
    if (h.wrapped) j["note"] = "sampling window wraps around the periodic cell";
    write_json(dir / "audits/lemma_5_3.json", j);
    report("lemma_5_3", h.consistent,
           fmt::format("C_sqrt {} C_lin {}", format_number(h.C_sqrt), format_number(h.C_lin)));
  }

  if (enabled(cfg, "lemma_5_5_5_6")) {
    BernsteinOptions bo;
    bo.epsilon1 = cfg.audits.epsilon1;
    bo.curvature_bound = cfg.audits.curvature_bound;
    bo.xi0 = cfg.audits.xi0;
    const BernsteinReport b = audit_lemma_5_5_5_6(traj, bo);
    const Eta3Report e3 = eta3_monitor(traj, cfg.audits.epsilon1, T);
    json ladder = json::object(), gammas = json::object();
    for (const auto& [k, v] : b.ladder) ladder[k] = num(v);
    for (const auto& [k, v] : b.gammas) gammas[k] = num(v);
    const bool pass = b.audit.passed();
    json j{{"audit", "lemma_5_5_5_6"},
           {"passed", pass},
           {"barrier", audit_json(b.audit)},
           {"ladder", ladder},
           {"gammas", gammas},
           {"a", num(b.a)},
           {"A", num(b.A)},
           {"grad_eta_max", num(b.grad_eta_max)},
           {"analytic_worst_margin", num(b.analytic_worst_margin)},
           {"max_f", num(b.max_f)},
           {"max_boundary_f", num(b.max_boundary_f)},
           {"bound_lhs_max", num(b.bound_lhs_max)},
           {"eta3_monitor",
            {{"constant", num(e3.constant)}, {"eta_limit", num(e3.eta_limit)},
             {"t_from", num(e3.t_from)}, {"nodes", e3.nodes}, {"at_eta", num(e3.at_eta)},
             {"at_xi", num(e3.at_xi)}, {"at_t", num(e3.at_t)}}}};
    write_json(dir / "audits/lemma_5_5_5_6.json", j);
    report("lemma_5_5_5_6", pass,
           fmt::format("max_f {} boundary {} eta3 {}", format_number(b.max_f),
                       format_number(b.max_boundary_f), format_number(e3.constant)));
  }
  return all_pass ? kExitOk : kExitAuditFailed;
}

int cmd_paraproduct_audit(const CommandOptions& opt, std::ostream& log) {
  const ScenarioConfig cfg = resolve_config(opt);
  const fs::path dir = scenario_dir(opt, cfg);
  const DyadicFilterBank bank = build_filterbank(cfg.grid.Nx, cfg.grid.Lx);
  const std::uint64_t seed = cfg.run.seed;
  const int pairs = cfg.audits.paraproduct_pairs;

  double bony = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const Field f = random_band_limited(cfg.grid.Nx, seed + 2 * static_cast<std::uint64_t>(p));
    const Field g = random_band_limited(cfg.grid.Nx, seed + 2 * static_cast<std::uint64_t>(p) + 1);
    const Field fg = hadamard(f, g);
    const Field sum = paraproduct_T(bank, f, g) + remainder_R(bank, g, f);
    bony = std::max(bony, (sum - fg).max_abs() / std::max(fg.max_abs(), 1e-300));
  }
  const double partition = bank.partition_residual();
  const RatioSweep l21 = lemma_2_1_monitor(bank, seed, pairs);
  const RatioSweep l22 = lemma_2_2_monitor(bank, seed, pairs);

  json residual;
  constexpr double kProbe = 0.1;
  try {
    const double dt = cfg.run.dt;
    StepOptions so;
    so.cfl = cfg.run.cfl;
    RunOptions ro = run_options(cfg);
    ro.t_end = kProbe - dt;
    ro.observer_interval = 0.0;
    const PrandtlState before = run(make_initial_state(cfg), ro);
    const PrandtlState at = prandtl_step(before, dt, so);
    const PrandtlState after = prandtl_step(at, dt, so);
    const ResidualReport r = verify_good_unknown_equation(before, at, after, bank);
    residual = json{{"t", num(at.t)},
                    {"max_norm", num(r.max_norm)},
                    {"weighted_norm", num(r.weighted_norm)},
                    {"boundary_band_max", num(r.boundary_band_max)},
                    {"excluded_band_rows", kResidualBand}};
  } catch (const std::domain_error& e) {
    residual = json{{"t", kProbe}, {"undefined", e.what()}};
  }

  const auto sweep = [](const RatioSweep& s) {
    json j = json::array();
    for (std::size_t k = 0; k < s.orders.size(); ++k)
      j.push_back({{"s", s.orders[k]}, {"max_ratio", num(s.max_ratio[k])}});
    return j;
  };
  const bool bony_pass = bony <= 1e-12;
  const bool partition_pass = partition <= 1e-14;
  json j{{"audit", "paraproduct"},
         {"seed", seed},
         {"pairs", pairs},
         {"j_max", bank.j_max},
         {"bony_max_rel_error", num(bony)},
         {"bony_pass", bony_pass},
         {"partition_residual", num(partition)},
         {"partition_pass", partition_pass},
         {"lemma_2_1", sweep(l21)},
         {"lemma_2_2", sweep(l22)},
         {"good_unknown_residual", residual},
         {"passed", bony_pass && partition_pass}};
  write_json(dir / "audits/paraproduct.json", j);
  log << log_line(bony_pass ? "PASS" : "FAIL", fmt::format("bony {}", format_number(bony)));
  log << log_line(partition_pass ? "PASS" : "FAIL",
                  fmt::format("partition {}", format_number(partition)));
  if (residual.contains("max_norm"))
    log << fmt::format("good-unknown residual at t={}: {}\n", format_number(kProbe),
                       format_number(residual["max_norm"].get<double>()));
  return bony_pass && partition_pass ? kExitOk : kExitAuditFailed;
}

namespace {

// Rethrows CSV errors with the file name in front, keeping the row.
template <typename F>
auto with_source(const std::string& file, F&& f) {
  try {
    return f();
  } catch (const CsvError& e) {
    throw CsvError(fmt::format("{}: {}", file, e.what()), e.row());
  }
}

std::vector<double> numeric_column(const CsvTable& t, const std::string& name) {
  const std::size_t col = t.column(name);
  std::vector<double> out(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) out[r] = t.number(r, col);
  return out;
}

struct SeriesSpec {
  const char* column;
  const char* title;
};

constexpr SeriesSpec kTimeSeries[] = {
    {"E", "energy E"},
    {"calE", "good-unknown energy calE"},
    {"calD", "dissipation calD"},
    {"A", "blow-up functional A"},
    {"c_mono", "monotonicity floor c_mono"},
    {"curv_delta", "near-wall curvature"},
};

std::string snapshot_time(const CsvTable& t) {
  for (const auto& c : t.comments) {
    const auto pos = c.find("t=");
    if (pos != std::string::npos) return c.substr(pos + 2, c.find(' ', pos) - pos - 2);
  }
  return "?";
}

}  // namespace

int cmd_plot(const CommandOptions& opt, std::ostream& log) {
  fs::path dir = opt.artifact_dir;
  if (dir.empty()) dir = scenario_dir(opt, resolve_config(opt));
  const fs::path diag_path = dir / "diagnostics.csv";
  if (!fs::exists(diag_path)) throw IoError(fmt::format("missing {}", diag_path.string()));

  std::vector<std::string> written;
  with_source("diagnostics.csv", [&] {
    const CsvTable t = read_csv(diag_path);
    const std::vector<double> time = numeric_column(t, "t");
    for (const auto& s : kTimeSeries) {
      const std::vector<double> y = numeric_column(t, s.column);
      const std::string name = fmt::format("plots/{}.svg", s.column);
      write_text(dir / name, svg_line_chart(s.title, "t", s.column, {Series{"", time, y}}));
      written.push_back(name);
    }
    return 0;
  });

  std::vector<fs::path> crocco_files;
  if (fs::is_directory(dir / "snapshots"))
    for (const auto& e : fs::directory_iterator(dir / "snapshots"))
      if (e.path().filename().string().rfind("crocco_", 0) == 0) crocco_files.push_back(e.path());
  std::sort(crocco_files.begin(), crocco_files.end());
  if (!crocco_files.empty()) {
    std::vector<Series> fan;
    for (const auto& p : crocco_files) {
      with_source(p.filename().string(), [&] {
        const CsvTable t = read_csv(p);
        const std::size_t cx = t.column("xi");
        const std::size_t ce = t.column("eta");
        const std::size_t cw = t.column("w");
        Series s{"t=" + snapshot_time(t), {}, {}};
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
          if (t.rows[r][cx] != t.rows[0][cx]) break;
          s.x.push_back(t.number(r, ce));
          s.y.push_back(t.number(r, cw));
        }
        fan.push_back(std::move(s));
        return 0;
      });
    }
    write_text(dir / "plots/w_profile_fan.svg",
               svg_line_chart("w(eta) at xi = 0", "eta", "w", fan));
    written.push_back("plots/w_profile_fan.svg");
  }

  const fs::path margin_path = dir / "audits/barrier_margin.csv";
  if (fs::exists(margin_path)) {
    with_source("barrier_margin.csv", [&] {
      const CsvTable t = read_csv(margin_path);
      const std::vector<double> ts = numeric_column(t, "t");
      const std::vector<double> es = numeric_column(t, "eta");
      const std::vector<double> m = numeric_column(t, "lower_margin");
      std::map<double, std::size_t> t_index, e_index;
      for (double v : ts) t_index.emplace(v, 0);
      for (double v : es) e_index.emplace(v, 0);
      std::vector<double> tx, ey;
      for (auto& [v, idx] : t_index) {
        idx = tx.size();
        tx.push_back(v);
      }
      for (auto& [v, idx] : e_index) {
        idx = ey.size();
        ey.push_back(v);
      }
      std::vector<std::vector<double>> grid(ey.size(), std::vector<double>(tx.size(), NAN));
      for (std::size_t r = 0; r < m.size(); ++r) grid[e_index[es[r]]][t_index[ts[r]]] = m[r];
      write_text(dir / "plots/barrier_margin.svg",
                 svg_heatmap("lower barrier margin min_xi (w - c1 (1 - eta))", "t", "eta", tx, ey,
                             grid));
      written.push_back("plots/barrier_margin.svg");
      return 0;
    });
  }

  log << fmt::format("plot: wrote {} SVG files to {}\n", written.size(), (dir / "plots").string());
  return kExitOk;
}

int dispatch(const std::string& command, const CommandOptions& opt, std::ostream& log,
             std::ostream& err) {
  try {
    if (command == "run") return cmd_run(opt, log);
    if (command == "crocco-compare") return cmd_crocco_compare(opt, log);
    if (command == "barrier-audit") return cmd_barrier_audit(opt, log);
    if (command == "paraproduct-audit") return cmd_paraproduct_audit(opt, log);
    if (command == "plot") return cmd_plot(opt, log);
    err << fmt::format("error: unknown command '{}'\n", command);
    return kExitInput;
  } catch (const ConfigError& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitInput;
  } catch (const CsvError& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitInput;
  } catch (const SolverDiverged& e) {
    err << fmt::format("error: {} (t={}, verdict {})\n", e.what(), format_number(e.time()),
                       e.verdict());
    return kExitMath;
  } catch (const CroccoUndefined& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitMath;
  } catch (const InadmissibleEnvelope& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitMath;
  } catch (const IoError& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    err << fmt::format("internal error: {}\n", e.what());
    return kExitInternal;
  }
}

}  // namespace prandtl_lab
