#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "projlim/validators.hpp"

namespace projlim {

/// Canonical JSON form of a report (sorted keys, two-space indent, NaN
/// fields omitted). Identical reports serialize to identical bytes.
std::string report_to_json(const TestReport& report);

/// CSV with one row per report row; shared header
/// test,subject,label,statistic,p_value,expected,observed,se,pass.
std::string reports_to_csv(std::span<const TestReport> reports);

/// Writes via a temporary file in the same directory followed by a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace projlim
