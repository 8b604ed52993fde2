#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace plateau {

// Locale-independent number formatting: 17 significant digits for machine
// files, 6 for human summaries.
std::string fmt17(double x);
std::string fmt6(double x);

// JSON text with two-space indent, sorted keys and every float printed with
// 17 significant digits. Non-finite floats become null.
std::string dump_report(const nlohmann::json& j);

// One CSV row per index: header line, then fmt17 values.
std::string csv_columns(const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns);

// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

void write_text(const std::string& path, const std::string& text);
// Creates the directory (and parents) if missing.
void ensure_dir(const std::string& path);

}  // namespace plateau
