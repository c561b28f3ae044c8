#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace regseq::cli {

struct FileRecord {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Output directory of one run. Files are written in binary mode (LF line
/// ends) and recorded with their SHA-256 for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write(const std::string& name, const std::string& content);
  const std::vector<FileRecord>& files() const { return files_; }

  /// Writes manifest.json; `extra` is merged at top level.
  void write_manifest(const nlohmann::json& config, const nlohmann::json& extra, double duration_seconds) const;

 private:
  std::filesystem::path root_;
  std::vector<FileRecord> files_;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp();

/// Shortest round-trip decimal form, independent of locale.
std::string format_double(double v);

}  // namespace regseq::cli
