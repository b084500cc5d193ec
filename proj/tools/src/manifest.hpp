#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace oscsync::cli {

/// Git blob id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(std::string_view content);

struct OutputFile {
  std::string name;
  std::string content;
};

/// manifest.json in the output directory. begin() writes it with status
/// "incomplete" before any work; finish() rewrites it once every output is
/// on disk. No timestamps, so identical runs give identical manifests.
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::string verb, nlohmann::json config);

  void begin() const;
  void finish(const std::vector<OutputFile>& outputs) const;

 private:
  nlohmann::json base() const;
  void write(const nlohmann::json& doc) const;

  std::filesystem::path dir_;
  std::string verb_;
  nlohmann::json config_;
};

/// Writes `content` to dir/name in binary mode. Throws Error{Io}.
void write_file(const std::filesystem::path& dir, const std::string& name, std::string_view content);

}  // namespace oscsync::cli
