#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/prandtl_solver.hpp"
#include "prandtl_lab/shear_flow.hpp"

namespace prandtl_lab {

struct GridConfig {
  double Lx = 6.283185307179586;
  std::size_t Nx = 128;
  double Ymax = 10.0;
  std::size_t Ny = 256;
  std::size_t Neta = 256;

  bool operator==(const GridConfig&) const = default;
};

struct DataConfig {
  std::string shear = "exp";  // exp, erf, linear
  double t0 = 0.25;           // erf start time
  std::string perturbation = "sine";  // none, sine, curvature_spike, non_monotone
  double epsilon = 0.1;

  bool operator==(const DataConfig&) const = default;
};

struct RunConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  double cfl = 0.4;
  double observer_interval = 0.05;
  std::uint64_t seed = 20240501;
  std::size_t snapshot_stride = 5;  // observer times between snapshot files; 0 disables

  bool operator==(const RunConfig&) const = default;
};

struct AuditsConfig {
  std::vector<std::string> enabled = {"prop_4_1", "lemma_5_3", "lemma_5_5_5_6"};
  double epsilon = 0.01;
  double eta0 = 0.5;
  double xi0 = 0.0;
  double burn_in = 0.5;
  double epsilon1 = 0.2;
  double curvature_bound = 10.0;
  int paraproduct_pairs = 50;

  bool operator==(const AuditsConfig&) const = default;
};

struct ScenarioConfig {
  std::string name = "default";
  GridConfig grid;
  DataConfig data;
  RunConfig run;
  CriterionConfig criterion;
  AuditsConfig audits;

  bool operator==(const ScenarioConfig& o) const;
};

inline constexpr const char* kAuditNames[] = {"prop_4_1", "lemma_5_3", "lemma_5_5_5_6"};

// Strict JSON: unknown keys, wrong types and out-of-range values raise
// ConfigError naming the dotted key (and the line when it can be located).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& cfg);

// Throws ConfigError on the first out-of-range parameter.
void validate_config(const ScenarioConfig& cfg);

// Doubles Nx, Ny and Neta and halves dt.
ScenarioConfig refined(const ScenarioConfig& cfg);

ShearKind parse_shear_kind(const std::string& s);
PerturbationKind parse_perturbation_kind(const std::string& s);

Grid2D make_grid(const ScenarioConfig& cfg);
PrandtlState make_initial_state(const ScenarioConfig& cfg);

}  // namespace prandtl_lab
