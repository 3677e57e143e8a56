#include "feedsim/manifest.hpp"

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"

namespace feedsim::cli {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const RunManifest& m) {
  json files = json::object();
  for (const auto& [k, f] : m.files) files[k] = {{"path", f.path}, {"sha256", f.sha256}};
  return {{"format", m.format},     {"tool_version", m.tool_version}, {"seed", m.seed},
          {"platform", m.platform}, {"backend", m.backend},           {"files", files},
          {"config", m.config}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.format = j.at("format").get<std::string>();
    if (m.format != "feedsim-manifest/1") throw LoadError("unsupported manifest format '" + m.format + "'");
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.platform = j.at("platform").get<std::string>();
    m.backend = j.at("backend").get<std::string>();
    for (const auto& [k, f] : j.at("files").items()) {
      m.files[k] = {f.at("path").get<std::string>(), f.at("sha256").get<std::string>()};
    }
    m.config = j.at("config");
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

FileRef make_file_ref(const fs::path& file, const fs::path& manifest_dir) {
  const fs::path abs = fs::weakly_canonical(fs::absolute(file));
  const fs::path dir = fs::weakly_canonical(fs::absolute(manifest_dir));
  fs::path rel = abs.lexically_relative(dir);
  return {(rel.empty() ? abs : rel).generic_string(), sha256_file(file)};
}

fs::path resolve(const FileRef& ref, const fs::path& manifest_dir) {
  const fs::path p(ref.path);
  return p.is_absolute() ? p : manifest_dir / p;
}

void write_manifest(const fs::path& path, const RunManifest& m) { write_file(path, to_json(m).dump(2) + "\n"); }

RunManifest read_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return manifest_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw LoadError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
}

void verify_manifest(const RunManifest& m, const fs::path& manifest_dir) {
  for (const auto& [key, ref] : m.files) {
    const fs::path p = resolve(ref, manifest_dir);
    if (!fs::exists(p)) throw LoadError("manifest entry '" + key + "' points to missing file " + p.string());
    if (sha256_file(p) != ref.sha256) {
      throw IntegrityError("hash of " + p.string() + " (" + key + ") does not match the manifest");
    }
  }
}

}  // namespace feedsim::cli
