#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lamharm::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text at 17 significant digits, '.' decimal regardless of locale.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Reproducibility record written next to every output as <out>.manifest.json.
/// `argv` replays the run through `lamharm rerun`.
struct RunManifest {
  std::string command;
  std::string config;
  std::vector<std::string> outputs;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> argv;
  double wall_time_seconds = 0.0;

  nlohmann::json to_json() const;
};

std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const std::filesystem::path& output, const RunManifest& manifest);

}  // namespace lamharm::cli
