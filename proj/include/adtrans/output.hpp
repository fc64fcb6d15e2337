#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "adtrans/config.hpp"

namespace adtrans {

inline constexpr const char* kToolVersion = "adtrans 0.3.0";

/// Column headers are written as "name [unit]".
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_column_header(const std::string& name, const std::string& unit);
  void add_row(const std::vector<double>& values);
};

/// Shortest round-trip decimal form; "nan" and "inf" spelled out.
std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const Table& table);
/// Pretty-printed with sorted keys, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Resolved configuration tree as written to manifests.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const Scenario& scenario);

}  // namespace adtrans
