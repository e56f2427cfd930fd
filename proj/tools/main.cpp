#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "projlim/intervals.hpp"

int main(int argc, char** argv) {
  CLI::App app{"projlim: projective-limit random probability measures on the real line"};
  app.require_subcommand(1);

  std::string config_path;
  projlim::cli::RunOptions opts;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> replicates;
  std::vector<std::string> report_files;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file (JSON)")->required();
    cmd->add_option("--seed", seed, "64-bit seed, overrides config and PROJLIM_SEED");
    cmd->add_option("--out", out_dir, "output directory, overrides config");
    cmd->add_option("--threads", opts.threads, "worker threads for replicate generation")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "run projectivity / mean-condition / sigma-additivity tests");
  add_common(validate);

  CLI::App* sample = app.add_subcommand("sample", "write CSVs of raw marginal draws");
  add_common(sample);
  sample->add_option("--replicates", replicates, "number of draws per partition");

  CLI::App* report = app.add_subcommand("report", "summarize previously written reports");
  report->add_option("files", report_files, "report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  opts.seed = seed;
  opts.out_dir = out_dir;
  opts.replicates = replicates;

  try {
    if (validate->parsed()) {
      return projlim::cli::cmd_validate(projlim::cli::load_config_file(config_path), opts);
    }
    if (sample->parsed()) {
      return projlim::cli::cmd_sample(projlim::cli::load_config_file(config_path), opts);
    }
    return projlim::cli::cmd_report(report_files);
  } catch (const projlim::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const projlim::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
