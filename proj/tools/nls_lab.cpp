// nls-lab: run experiment suites from JSON configs.
//
// Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 configuration
// error, 3 runtime or guard error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "nlslab/config.hpp"
#include "nlslab/experiments.hpp"
#include "nlslab/report.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kRuntime = 3 };

int run(const std::string& path, std::optional<std::uint64_t> seed,
        std::optional<std::string> out) {
  nlslab::RunConfig cfg = nlslab::load_config(path);
  if (seed) cfg.seed = *seed;
  if (out) cfg.output_dir = *out;
  const nlslab::ExperimentReport report = nlslab::execute(cfg);
  const auto written = nlslab::write_report(report, cfg.output_dir);
  std::cout << nlslab::report_summary(report);
  std::cout << "report written to " << written.directory.string() << "\n";
  return report.all_pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of decay and decomposition estimates for radial NLS"};
  app.require_subcommand(1);

  std::string run_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write its report");
  run_cmd->add_option("config", run_path, "Path to the JSON config")->required();
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--out", out, "Override the output directory");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config");
  validate_cmd->add_option("config", validate_path, "Path to the JSON config")->required();

  auto* list_cmd = app.add_subcommand("list-experiments", "Print the experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (*list_cmd) {
      for (const auto& id : nlslab::experiment_ids()) std::cout << id << "\n";
      return kPass;
    }
    if (*validate_cmd) {
      const auto cfg = nlslab::load_config(validate_path);
      std::cout << nlslab::serialize_config(cfg);
      return kPass;
    }
    return run(run_path, seed, out);
  } catch (const nlslab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const nlslab::RunError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
}
