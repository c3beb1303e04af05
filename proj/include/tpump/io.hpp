#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tpump {

/// Shortest round-trip-safe rendering used everywhere: printf "%.17g".
std::string format_double(double x);
/// Compact "%g" rendering for file names (0.5 -> "0.5").
std::string format_label(double x);

/// Writes comma-separated rows with '\n' endings and no trailing delimiter.
/// Errors carry the file path.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);

  void row(std::span<const double> values);
  /// Mixed row: pre-formatted cells.
  void row_cells(std::span<const std::string> cells);
  void close();

  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Sidecar path for a CSV: same basename, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

} // namespace tpump
