#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bep/errors.hpp"
#include "bep/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Besov-space experiments for the Euler-Poincare equations"};
  std::string command;
  std::string config;
  std::vector<std::string> overrides;
  app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(bep::commands()));
  app.add_option("--config", config, "INI configuration file (defaults when omitted)");
  app.add_option("--set", overrides, "Override a setting, section.key=value")->take_all();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? bep::kExitPass : bep::kExitConfigError;
  }
  bep::ExperimentConfig cfg;
  try {
    cfg = bep::parse_config(config, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bep::kExitConfigError;
  }
  return bep::run(command, cfg, std::cout);
}
