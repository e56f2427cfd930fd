#include "config.hpp"

#include <algorithm>
#include <fstream>

namespace projlim::cli {

namespace {

double endpoint_from_json(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError("interval endpoint must be a number or \"-inf\"/\"inf\", got " + v.dump());
}

nlohmann::json endpoint_to_json(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing config key \"") + key + "\"");
  return *it;
}

BaseMeasure parse_base_measure(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("base_measure must be an object");
  const std::string kind = require(j, "kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  try {
    if (kind == "exponential") {
      return BaseMeasure::exponential(require(params, "rate").get<double>());
    }
    if (kind == "gaussian") {
      return BaseMeasure::gaussian(require(params, "mean").get<double>(),
                                   require(params, "sd").get<double>());
    }
    if (kind == "uniform") {
      return BaseMeasure::uniform(require(params, "lo").get<double>(),
                                  require(params, "hi").get<double>());
    }
    if (kind == "empirical_step") {
      return BaseMeasure::empirical_step(
          require(params, "atoms").get<std::vector<double>>(),
          require(params, "weights").get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid base_measure: " + std::string(e.what()));
  }
  throw ConfigError("unknown base_measure kind \"" + kind + "\"");
}

}  // namespace

Partition parse_partition(const nlohmann::json& cells) {
  if (!cells.is_array() || cells.empty()) {
    throw ConfigError("a partition must be a non-empty array of cells");
  }
  std::vector<QSet> qcells;
  for (const auto& cell : cells) {
    if (!cell.is_array() || cell.empty()) {
      throw ConfigError("a cell must be a non-empty array of [lo, hi) pairs");
    }
    std::vector<Interval> ivals;
    for (const auto& pair : cell) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("an interval must be a [lo, hi) pair, got " + pair.dump());
      }
      ivals.push_back({endpoint_from_json(pair[0]), endpoint_from_json(pair[1])});
    }
    try {
      qcells.push_back(QSet::from_intervals(std::move(ivals)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("invalid cell: " + std::string(e.what()));
    }
  }
  try {
    return Partition::from_cells(std::move(qcells));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid partition: " + std::string(e.what()));
  }
}

nlohmann::json partition_to_json(const Partition& p) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : p.cells()) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& iv : cell.intervals()) {
      c.push_back({endpoint_to_json(iv.lo), endpoint_to_json(iv.hi)});
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<Partition> ExperimentConfig::partitions() const {
  std::vector<Partition> out;
  for (int level : dyadic_levels) {
    try {
      out.push_back(dyadic_quantile_partition(base, level));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("dyadic level " + std::to_string(level) + ": " + e.what());
    }
  }
  out.insert(out.end(), explicit_partitions.begin(), explicit_partitions.end());
  if (out.empty()) throw ConfigError("no partitions configured");
  return out;
}

MarginalFamily ExperimentConfig::family() const {
  switch (variant) {
    case FamilyVariant::dirichlet:
      return make_dirichlet(alpha, base);
    case FamilyVariant::nig:
      return make_nig(alpha, base);
    case FamilyVariant::polya_tree:
      return make_polya_tree(base, tree_c ? PolyaTreeSchedule::quadratic(*tree_c)
                                          : PolyaTreeSchedule::per_level(tree_level_alphas));
    case FamilyVariant::escape:
      throw ConfigError("the escape fixture is not a sampling family");
  }
  throw ConfigError("unreachable family variant");
}

ExperimentConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig cfg;

  const nlohmann::json& fam = require(j, "family");
  const std::string variant = require(fam, "variant").get<std::string>();
  if (variant == "dirichlet") {
    cfg.variant = FamilyVariant::dirichlet;
  } else if (variant == "nig") {
    cfg.variant = FamilyVariant::nig;
  } else if (variant == "polya_tree") {
    cfg.variant = FamilyVariant::polya_tree;
  } else if (variant == "escape") {
    cfg.variant = FamilyVariant::escape;
  } else {
    throw ConfigError("unknown family variant \"" + variant + "\"");
  }
  cfg.base = parse_base_measure(require(fam, "base_measure"));
  if (cfg.variant == FamilyVariant::dirichlet || cfg.variant == FamilyVariant::nig) {
    cfg.alpha = require(fam, "alpha").get<double>();
    if (!(cfg.alpha > 0.0)) throw ConfigError("family alpha must be positive");
  }
  if (cfg.variant == FamilyVariant::polya_tree) {
    if (fam.contains("c")) {
      cfg.tree_c = fam["c"].get<double>();
      if (!(*cfg.tree_c > 0.0)) throw ConfigError("polya tree c must be positive");
    } else if (fam.contains("level_alphas")) {
      cfg.tree_level_alphas = fam["level_alphas"].get<std::vector<double>>();
    } else {
      throw ConfigError("polya_tree family needs \"c\" or \"level_alphas\"");
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("partitions")) {
    const auto& parts = j["partitions"];
    if (!parts.is_object()) throw ConfigError("\"partitions\" must be an object");
    if (parts.contains("dyadic_levels")) {
      cfg.dyadic_levels = parts["dyadic_levels"].get<std::vector<int>>();
      if (!std::is_sorted(cfg.dyadic_levels.begin(), cfg.dyadic_levels.end())) {
        throw ConfigError("dyadic_levels must be ascending");
      }
    }
    if (parts.contains("explicit")) {
      for (const auto& cells : parts["explicit"]) {
        cfg.explicit_partitions.push_back(parse_partition(cells));
      }
    }
  }

  for (const auto& t : j.value("tests", nlohmann::json::array())) {
    TestSpec spec;
    spec.name = require(t, "name").get<std::string>();
    if (spec.name != "projectivity" && spec.name != "mean_condition" && spec.name != "harris") {
      throw ConfigError("unknown test \"" + spec.name + "\"");
    }
    if (t.contains("draws")) spec.draws = t["draws"].get<std::size_t>();
    if (spec.draws < 2) throw ConfigError("test draws must be at least 2");
    if (t.contains("sequences")) spec.sequences = t["sequences"].get<int>();
    if (t.contains("depth")) spec.depth = t["depth"].get<int>();
    if (spec.sequences < 1 || spec.depth < 1) {
      throw ConfigError("harris sequences and depth must be positive");
    }
    cfg.tests.push_back(std::move(spec));
  }
  if (cfg.tests.empty()) throw ConfigError("no tests configured");

  cfg.out_dir = j.value("out", std::string("reports"));
  if (j.contains("replicates")) {
    cfg.replicates = j["replicates"].get<std::size_t>();
    if (cfg.replicates == 0) throw ConfigError("replicates must be positive");
  }

  cfg.resolved = j;
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(j);
}

}  // namespace projlim::cli
