#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "projlim/report_io.hpp"
#include "projlim/samplers.hpp"
#include "projlim/validators.hpp"

namespace projlim::cli {

namespace {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string padded(std::size_t n) {
  std::string s = std::to_string(n);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

void write_report_file(const fs::path& dir, std::size_t index, const TestReport& report,
                       const nlohmann::json& resolved_config) {
  nlohmann::json j = nlohmann::json::parse(report_to_json(report));
  j["config"] = resolved_config;
  j["meta"] = {{"timestamp", utc_timestamp()}};
  const fs::path path = dir / (padded(index) + "_" + report.test_name + ".json");
  write_file_atomic(path, j.dump(2) + "\n");
}

void print_summary_line(const TestReport& r) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.test_name << "  " << r.subject << "  ("
            << r.rows.size() << " rows, draws=" << r.draws << ", stream=" << r.stream << ")\n";
}

void check_family_on_partitions(const MarginalFamily& f, const std::vector<Partition>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      family_params(f, parts[i]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("partition " + std::to_string(i) + ": " + e.what());
    }
  }
}

}  // namespace

std::uint64_t resolve_seed(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.seed) return *opts.seed;
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("PROJLIM_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::uint64_t>(v);
    throw ConfigError("PROJLIM_SEED is not a valid unsigned integer: " + std::string(env));
  }
  throw ConfigError("no seed given (use --seed, a \"seed\" config key, or PROJLIM_SEED)");
}

int cmd_validate(ExperimentConfig cfg, const RunOptions& opts) {
  const std::uint64_t seed = resolve_seed(cfg, opts);
  cfg.resolved["seed"] = seed;
  const fs::path out_dir = opts.out_dir.value_or(cfg.out_dir);
  fs::create_directories(out_dir);

  const std::vector<Partition> parts = cfg.partitions();
  std::optional<MarginalFamily> family;
  if (!cfg.is_escape()) {
    family = cfg.family();
    check_family_on_partitions(*family, parts);
  }

  std::vector<TestReport> reports;
  std::uint64_t stream = 0;
  for (const TestSpec& spec : cfg.tests) {
    if (spec.name == "projectivity") {
      if (cfg.is_escape()) throw ConfigError("projectivity test needs a sampling family");
      if (parts.size() < 2) throw ConfigError("projectivity needs at least two partitions");
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!coarsening_of(parts[i], parts[i + 1])) {
          throw ConfigError("partition " + std::to_string(i + 1) +
                            " does not refine partition " + std::to_string(i));
        }
        reports.push_back(projectivity_test(*family, parts[i + 1], parts[i], spec.draws,
                                            SeededRng{seed, stream++}, opts.threads));
      }
    } else if (spec.name == "mean_condition") {
      if (cfg.is_escape()) throw ConfigError("mean_condition test needs a sampling family");
      for (const Partition& p : parts) {
        reports.push_back(
            mean_condition_test(*family, p, spec.draws, SeededRng{seed, stream++}, opts.threads));
      }
    } else {  // harris
      HarrisSequences seqs;
      try {
        seqs = make_harris_sequences(cfg.base, spec.sequences, spec.depth);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (cfg.is_escape()) {
        reports.push_back(harris_test(escape_charge(), seqs));
        ++stream;
      } else {
        reports.push_back(
            harris_test(*family, seqs, spec.draws, SeededRng{seed, stream++}, opts.threads));
      }
    }
  }

  bool all_pass = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_report_file(out_dir, i, reports[i], cfg.resolved);
    print_summary_line(reports[i]);
    all_pass = all_pass && reports[i].pass;
  }
  write_file_atomic(out_dir / "rows.csv", reports_to_csv(reports));
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << " (" << reports.size()
            << " reports in " << out_dir.string() << ")\n";
  return all_pass ? 0 : 1;
}

int cmd_sample(ExperimentConfig cfg, const RunOptions& opts) {
  const std::uint64_t seed = resolve_seed(cfg, opts);
  const std::size_t replicates = opts.replicates.value_or(cfg.replicates);
  const fs::path out_dir = opts.out_dir.value_or(cfg.out_dir);
  fs::create_directories(out_dir);

  const std::vector<Partition> parts = cfg.partitions();
  std::optional<MarginalFamily> family;
  if (!cfg.is_escape()) {
    family = cfg.family();
    check_family_on_partitions(*family, parts);
  }

  for (std::size_t idx = 0; idx < parts.size(); ++idx) {
    const Partition& p = parts[idx];
    std::string csv;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0) csv += ",";
      csv += "\"" + to_string(p.cell(i)) + "\"";
    }
    csv += "\n";
    RandomSource src(SeededRng{seed, idx});
    for (std::size_t r = 0; r < replicates; ++r) {
      const SimplexPoint x =
          cfg.is_escape() ? cell_masses(escape_charge(), p) : sample_marginal(*family, p, src);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0) csv += ",";
        csv += format_double(x[i]);
      }
      csv += "\n";
    }
    const fs::path path = out_dir / ("samples_" + padded(idx) + ".csv");
    write_file_atomic(path, csv);
    std::cout << "wrote " << path.string() << " (" << replicates << " x " << p.size() << ")\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& files) {
  if (files.empty()) throw ConfigError("no report files given");
  bool all_pass = true;
  for (const std::string& file : files) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open report file " + file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("unreadable report " + file + ": " + e.what());
    }
    if (!j.contains("test") || !j.contains("pass")) {
      throw ConfigError("not a report file: " + file);
    }
    const bool pass = j["pass"].get<bool>();
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << j["test"].get<std::string>() << "  "
              << j.value("subject", std::string("?")) << "  (" << j.value("draws", 0ull)
              << " draws, " << j["rows"].size() << " rows)";
    if (!pass) {
      std::size_t failed = 0;
      for (const auto& row : j["rows"]) {
        if (!row.value("pass", true)) ++failed;
      }
      std::cout << "  [" << failed << " failing rows]";
    }
    std::cout << "\n";
  }
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace projlim::cli
