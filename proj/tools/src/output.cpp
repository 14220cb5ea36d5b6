#include "output.hpp"

#include <fstream>

#include <fmt/format.h>

namespace lamharm::cli {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("csv row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},       {"config", config}, {"outputs", outputs},
          {"parameters", parameters}, {"argv", argv},     {"wall_time_seconds", wall_time_seconds}};
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

void write_manifest(const std::filesystem::path& output, const RunManifest& manifest) {
  write_atomic(manifest_path(output), manifest.to_json().dump(2) + "\n");
}

}  // namespace lamharm::cli
