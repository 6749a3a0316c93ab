#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "prandtl_lab/config.hpp"

namespace prandtl_lab {

inline constexpr const char* kVersion = "0.1.0";

// Stable exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitAuditFailed = 1,   // command finished but an audit or check failed
  kExitInput = 2,         // config, CSV or missing-column errors
  kExitMath = 3,          // divergence, undefined Crocco transform, inadmissible envelope
  kExitIo = 4,            // filesystem errors
  kExitInternal = 5,      // anything else
};

struct CommandOptions {
  std::filesystem::path config;     // scenario JSON; defaults are used when empty
  std::filesystem::path out = "out";
  std::filesystem::path artifact_dir;  // plot only: overrides out/<name>
  bool refine = false;
};

// Loads (or defaults) the config and applies --refine.
ScenarioConfig resolve_config(const CommandOptions& opt);
std::filesystem::path scenario_dir(const CommandOptions& opt, const ScenarioConfig& cfg);

// Each command writes its artifacts below out/<name>/ and returns an exit
// code. Domain failures propagate as the typed exceptions of errors.hpp.
int cmd_run(const CommandOptions& opt, std::ostream& log);
int cmd_crocco_compare(const CommandOptions& opt, std::ostream& log);
int cmd_barrier_audit(const CommandOptions& opt, std::ostream& log);
int cmd_paraproduct_audit(const CommandOptions& opt, std::ostream& log);
int cmd_plot(const CommandOptions& opt, std::ostream& log);

// Runs a command by name and maps exceptions to exit codes, printing the
// message to err.
int dispatch(const std::string& command, const CommandOptions& opt, std::ostream& log,
             std::ostream& err);

}  // namespace prandtl_lab
