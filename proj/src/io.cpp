#include "tpump/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace tpump {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_label(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header)
    : path_(path) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  row_cells(header);
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) {
    cells.push_back(format_double(v));
  }
  row_cells(cells);
}

void CsvWriter::row_cells(std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      out_ << ',';
    }
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) {
    throw std::runtime_error("write failed for " + path_.string());
  }
}

void CsvWriter::close() {
  out_.close();
  if (!out_) {
    throw std::runtime_error("closing " + path_.string() + " failed");
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

} // namespace tpump
