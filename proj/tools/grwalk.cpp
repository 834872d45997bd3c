#include <iostream>

#include "CLI11.hpp"

#include "grwalk/experiment.hpp"

namespace ex = grwalk::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Random walks on groups: coefficient decay experiments"};
  app.set_version_flag("--version", ex::kVersion);
  app.require_subcommand(1);

  std::string target;
  auto* run = app.add_subcommand("run", "run a preset or config and write its artifacts");
  run->add_option("target", target, "preset name or config file")->required();

  auto* check = app.add_subcommand("check", "run a preset or config and report PASS/FAIL only");
  check->add_option("target", target, "preset name or config file")->required();

  auto* list = app.add_subcommand("list-presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kUsage;
  }

  if (*list) {
    for (const auto& p : ex::presets()) std::cout << p.name << "  " << p.summary << "\n";
    return ex::kOk;
  }
  if (*run) return ex::run_command(target);
  return ex::check_command(target);
}
