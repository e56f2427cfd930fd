#include "projlim/report_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace projlim {

namespace {

void put_if_finite(nlohmann::json& obj, const char* key, double v) {
  if (!std::isnan(v)) obj[key] = v;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

std::string report_to_json(const TestReport& report) {
  nlohmann::json j;
  j["schema"] = "projlim.report/1";
  j["test"] = report.test_name;
  j["subject"] = report.subject;
  j["pass"] = report.pass;
  j["seed"] = report.seed;
  j["stream"] = report.stream;
  j["draws"] = report.draws;
  nlohmann::json threshold;
  threshold["description"] = report.threshold_desc;
  put_if_finite(threshold, "value", report.threshold_value);
  j["threshold"] = threshold;
  if (!report.attributes.empty()) {
    nlohmann::json attrs = nlohmann::json::object();
    for (const auto& [k, v] : report.attributes) attrs[k] = v;
    j["attributes"] = attrs;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["label"] = row.label;
    r["pass"] = row.pass;
    put_if_finite(r, "statistic", row.statistic);
    put_if_finite(r, "p_value", row.p_value);
    put_if_finite(r, "expected", row.expected);
    put_if_finite(r, "observed", row.observed);
    put_if_finite(r, "se", row.se);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string reports_to_csv(std::span<const TestReport> reports) {
  std::string out = "test,subject,label,statistic,p_value,expected,observed,se,pass\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out += csv_quote(report.test_name) + "," + csv_quote(report.subject) + "," +
             csv_quote(row.label) + "," + csv_number(row.statistic) + "," +
             csv_number(row.p_value) + "," + csv_number(row.expected) + "," +
             csv_number(row.observed) + "," + csv_number(row.se) + "," +
             (row.pass ? "true" : "false") + "\n";
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace projlim
