#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "projlim/base_measure.hpp"
#include "projlim/families.hpp"
#include "projlim/intervals.hpp"

namespace projlim::cli {

/// Configuration problems map to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FamilyVariant { dirichlet, nig, polya_tree, escape };

struct TestSpec {
  std::string name;         // projectivity | mean_condition | harris
  std::size_t draws = 100000;
  int sequences = 5;        // harris only
  int depth = 8;            // harris only
};

/// Parsed and validated experiment description. `resolved` keeps the full
/// config (with the effective seed substituted in) for report provenance.
struct ExperimentConfig {
  FamilyVariant variant = FamilyVariant::dirichlet;
  double alpha = 0.0;                       // dirichlet / nig
  std::optional<double> tree_c;             // polya tree, quadratic schedule
  std::vector<double> tree_level_alphas;    // polya tree, tabulated schedule
  BaseMeasure base = BaseMeasure::exponential(1.0);

  std::optional<std::uint64_t> seed;
  std::vector<int> dyadic_levels;
  std::vector<Partition> explicit_partitions;
  std::vector<TestSpec> tests;
  std::string out_dir = "reports";
  std::size_t replicates = 100;
  nlohmann::json resolved;

  /// Dyadic-level partitions (ascending) followed by explicit ones.
  std::vector<Partition> partitions() const;
  /// The configured random-measure family; throws for the escape fixture.
  MarginalFamily family() const;
  bool is_escape() const { return variant == FamilyVariant::escape; }
};

ExperimentConfig parse_config_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

/// Cell lists use the partition text serialization: each cell is a list of
/// [lo, hi) endpoint pairs where unbounded endpoints are the tokens
/// "-inf" / "inf".
Partition parse_partition(const nlohmann::json& cells);
nlohmann::json partition_to_json(const Partition& p);

}  // namespace projlim::cli
