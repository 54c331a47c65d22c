#pragma once

// Image-set manifests (JSON):
//
//   {
//     "schema": 1,
//     "name": "CwD",
//     "stages": ["E2", "E3", "E4"],
//     "images": [
//       {"id": "frame_0001", "tensors": {"E2": "t/0001_E2.srgt", ...}, "image": "img/0001.ppm"}
//     ]
//   }
//
// Paths are relative to the manifest's directory. "image" is optional. A
// manifest with no stages describes raw images for the reference encoder.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "s2rgap/error.hpp"
#include "s2rgap/profile.hpp"
#include "s2rgap/srgt.hpp"

namespace s2r {

inline constexpr int kManifestSchema = 1;

struct ManifestEntry {
  std::string id;
  std::map<StageId, std::string> tensors;
  std::optional<std::string> image;
};

struct Manifest {
  std::string name;
  std::vector<StageId> stages;
  std::vector<ManifestEntry> images;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(Errc::malformed, where + " is missing '" + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string() || v.get<std::string>().empty()) fail(Errc::malformed, where + " must be a non-empty string");
  return v.get<std::string>();
}

}  // namespace detail

/// Parses and validates a manifest: every image must list a tensor for every
/// declared stage.
inline Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::malformed, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(Errc::malformed, "manifest must be a JSON object");

  const auto& schema = detail::require_field(doc, "schema", "manifest");
  if (!schema.is_number_integer()) fail(Errc::malformed, "manifest 'schema' must be an integer");
  if (schema.get<long long>() != kManifestSchema) {
    fail(Errc::unsupported_version, "unsupported manifest schema " + schema.dump());
  }

  Manifest m;
  m.base_dir = base_dir;
  m.name = detail::require_string(detail::require_field(doc, "name", "manifest"), "manifest 'name'");

  const auto& stages = detail::require_field(doc, "stages", "manifest");
  if (!stages.is_array()) fail(Errc::malformed, "manifest 'stages' must be an array");
  std::set<StageId> declared;
  for (const auto& s : stages) {
    StageId stage(detail::require_string(s, "stage label"));
    if (!declared.insert(stage).second) fail(Errc::malformed, "duplicate stage '" + stage.label() + "' in manifest");
    m.stages.push_back(stage);
  }

  const auto& images = detail::require_field(doc, "images", "manifest");
  if (!images.is_array()) fail(Errc::malformed, "manifest 'images' must be an array");
  std::set<std::string> ids;
  for (const auto& item : images) {
    if (!item.is_object()) fail(Errc::malformed, "manifest image entries must be objects");
    ManifestEntry entry;
    entry.id = detail::require_string(detail::require_field(item, "id", "image entry"), "image 'id'");
    if (!ids.insert(entry.id).second) fail(Errc::malformed, "duplicate image id '" + entry.id + "'");
    const std::string where = "image '" + entry.id + "'";

    if (auto t = item.find("tensors"); t != item.end()) {
      if (!t->is_object()) fail(Errc::malformed, where + " 'tensors' must be an object");
      for (const auto& [label, path] : t->items()) {
        StageId stage(label);
        if (!declared.count(stage)) fail(Errc::malformed, where + " lists undeclared stage '" + label + "'");
        entry.tensors.emplace(stage, detail::require_string(path, where + " tensor path"));
      }
    }
    for (const auto& stage : m.stages) {
      if (!entry.tensors.count(stage)) {
        fail(Errc::incomplete_input, "image '" + entry.id + "' is missing stage '" + stage.label() + "'");
      }
    }
    if (auto img = item.find("image"); img != item.end() && !img->is_null()) {
      entry.image = detail::require_string(*img, where + " 'image'");
    }
    m.images.push_back(std::move(entry));
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const std::string text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  try {
    return parse_manifest(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline std::string manifest_to_json(const Manifest& m) {
  nlohmann::ordered_json doc;
  doc["schema"] = kManifestSchema;
  doc["name"] = m.name;
  doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : m.stages) doc["stages"].push_back(s.label());
  doc["images"] = nlohmann::ordered_json::array();
  for (const auto& e : m.images) {
    nlohmann::ordered_json item;
    item["id"] = e.id;
    item["tensors"] = nlohmann::ordered_json::object();
    for (const auto& s : m.stages) item["tensors"][s.label()] = e.tensors.at(s);
    if (e.image) item["image"] = *e.image;
    doc["images"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace s2r
