#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace projlim::cli {

/// Command-line overrides layered over the config file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> replicates;
  int threads = 1;
};

/// Flag > config > PROJLIM_SEED environment variable; throws ConfigError
/// when no seed is available (runs never draw entropy themselves).
std::uint64_t resolve_seed(const ExperimentConfig& cfg, const RunOptions& opts);

/// Runs the configured validator suite, writes one JSON report per test
/// plus a combined CSV into the output directory. Returns 0 when every
/// test passes, 1 otherwise.
int cmd_validate(ExperimentConfig cfg, const RunOptions& opts);

/// Writes one CSV of raw marginal draws per configured partition.
int cmd_sample(ExperimentConfig cfg, const RunOptions& opts);

/// Prints a pass/fail table for previously written reports; returns 0 when
/// all pass, 1 on any failure. Throws ConfigError for unreadable input.
int cmd_report(const std::vector<std::string>& files);

}  // namespace projlim::cli
