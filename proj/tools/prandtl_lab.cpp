#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "prandtl_lab/commands.hpp"

int main(int argc, char** argv) {
  using namespace prandtl_lab;
  CLI::App app{"Prandtl boundary-layer numerical laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommandOptions opt;
  std::string config, out = "out", dir;
  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario JSON (defaults when omitted)");
    sub->add_option("--out", out, "output root; artifacts go to <out>/<scenario name>");
    sub->add_flag("--refine", opt.refine, "double Nx, Ny, Neta and halve dt");
    return sub;
  };
  add("run", "evolve the physical solver with diagnostics");
  add("crocco-compare", "evolve-then-transform against transform-then-evolve");
  add("barrier-audit", "comparison-function and gradient audits in Crocco variables");
  add("paraproduct-audit", "Bony identity, filterbank and good-unknown checks");
  add("plot", "render SVG plots from an artifact directory")
      ->add_option("--dir", dir, "artifact directory (overrides <out>/<scenario name>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  opt.config = config;
  opt.out = out;
  opt.artifact_dir = dir;
  const std::string command = app.get_subcommands().front()->get_name();
  return dispatch(command, opt, std::cout, std::cerr);
}
