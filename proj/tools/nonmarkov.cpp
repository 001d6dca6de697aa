// nonmarkov: run experiment configs and verification suites.
//
//   nonmarkov run <config.json>
//   nonmarkov check --seed N --samples M [--output report.json]

#include <iostream>

#include "CLI11.hpp"
#include "nonmarkov/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-Markovianity measures and the two-qubit dephasing experiment"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Execute a JSON experiment config");
  run->add_option("config", config_path, "Path to the config file")->required();

  std::uint64_t seed = 1;
  int samples = 100;
  std::string output;
  auto* check = app.add_subcommand("check", "Run the oracle suites and print a JSON report");
  check->add_option("--seed", seed, "Suite seed");
  check->add_option("--samples", samples, "Random instances for the identity suite");
  check->add_option("--output", output, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nonmarkov::kExitConfig;
  }

  if (*run) return nonmarkov::run_config_file(config_path, std::cerr);
  std::optional<std::filesystem::path> out;
  if (!output.empty()) out = output;
  return nonmarkov::run_check(seed, samples, out, std::cout, std::cerr);
}
