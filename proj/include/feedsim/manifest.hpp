#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

namespace feedsim::cli {

struct FileRef {
  std::string path;  ///< relative to the manifest's directory when possible
  std::string sha256;
};

struct RunManifest {
  std::string format = "feedsim-manifest/1";
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string platform;
  std::string backend;
  /// Keys: personas, graph (optional), stories, action_log.
  std::map<std::string, FileRef> files;
  nlohmann::json config = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Reference to `file` as seen from `manifest_dir`, with its current hash.
FileRef make_file_ref(const std::filesystem::path& file, const std::filesystem::path& manifest_dir);
std::filesystem::path resolve(const FileRef& ref, const std::filesystem::path& manifest_dir);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Throws IntegrityError when a referenced file's hash differs and LoadError
/// when it is missing.
void verify_manifest(const RunManifest& m, const std::filesystem::path& manifest_dir);

}  // namespace feedsim::cli
