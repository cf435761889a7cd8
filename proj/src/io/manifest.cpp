// Copyright 2026 The wavegenre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavegenre/io/manifest.hpp"

#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"

namespace wavegenre::io {

namespace {

constexpr const char* kFormat = "wavegenre-manifest";
constexpr int kVersion = 1;

}  // namespace

std::filesystem::path Manifest::resolve(const ManifestEntry& entry) const {
  return entry.path.is_absolute() ? entry.path : base / entry.path;
}

const ManifestEntry* Manifest::find(const std::string& track_id) const {
  for (const auto& e : entries) {
    if (e.track_id == track_id) return &e;
  }
  return nullptr;
}

std::vector<train::TrackRef> Manifest::original_tracks() const {
  std::vector<train::TrackRef> out;
  for (const auto& e : entries) {
    if (!e.augmented()) out.push_back({e.track_id, e.genre});
  }
  return out;
}

train::FileClipSource Manifest::clip_source() const {
  train::FileClipSource source;
  for (const auto& e : entries) {
    source.add({e.track_id, e.origin, e.transform, e.genre}, resolve(e));
  }
  return source;
}

void validate(const Manifest& manifest) {
  const int genres = static_cast<int>(manifest.genres.size());
  if (genres < 1 || genres > 10) {
    throw ValidationError("manifest lists " + std::to_string(genres) + " genres; 1 to 10 allowed");
  }
  std::set<std::string> ids;
  std::map<std::string, int> originals;
  for (const auto& e : manifest.entries) {
    if (e.track_id.empty()) throw ValidationError("manifest entry with empty track id");
    if (!ids.insert(e.track_id).second) throw ValidationError("duplicate track id " + e.track_id);
    if (e.genre < 0 || e.genre >= genres) {
      throw ValidationError("track " + e.track_id + " has genre " + std::to_string(e.genre) +
                            " outside [0, " + std::to_string(genres) + ")");
    }
    if (!e.augmented()) {
      if (e.origin != e.track_id) {
        throw ValidationError("original track " + e.track_id + " names origin " + e.origin);
      }
      originals[e.track_id] = e.genre;
    }
  }
  for (const auto& e : manifest.entries) {
    if (!e.augmented()) continue;
    const auto it = originals.find(e.origin);
    if (it == originals.end()) {
      throw ValidationError("augmented track " + e.track_id + " references missing origin " +
                            e.origin);
    }
    if (it->second != e.genre) {
      throw ValidationError("augmented track " + e.track_id + " changes genre of " + e.origin);
    }
  }
}

std::string serialize(const Manifest& manifest) {
  nlohmann::json header{{"format", kFormat},
                        {"version", kVersion},
                        {"genres", manifest.genres},
                        {"seed", manifest.seed ? nlohmann::json(*manifest.seed) : nlohmann::json()},
                        {"augmentation_digest", manifest.augmentation_digest}};
  std::string out = header.dump() + "\n";
  for (const auto& e : manifest.entries) {
    nlohmann::json line{{"track_id", e.track_id},
                        {"path", e.path.generic_string()},
                        {"genre", e.genre},
                        {"duration", e.duration},
                        {"origin", e.origin},
                        {"transform", e.transform}};
    out += line.dump() + "\n";
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  validate(manifest);
  write_file_atomic(path, serialize(manifest));
}

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base) {
  Manifest m;
  m.base = base;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!have_header) {
        if (j.value("format", "") != kFormat) throw ValidationError("missing manifest header");
        if (j.at("version").get<int>() != kVersion) {
          throw ValidationError("unsupported manifest version " + j.at("version").dump());
        }
        m.genres = j.at("genres").get<std::vector<std::string>>();
        if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
        m.augmentation_digest = j.value("augmentation_digest", "");
        have_header = true;
        continue;
      }
      ManifestEntry e;
      e.track_id = j.at("track_id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      e.genre = j.at("genre").get<int>();
      e.duration = j.at("duration").get<std::size_t>();
      e.origin = j.value("origin", e.track_id);
      e.transform = j.value("transform", std::string(train::kOriginalTag));
      m.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ValidationError("manifest line " + std::to_string(number) + ": " + ex.what());
    } catch (const ValidationError& ex) {
      throw ValidationError("manifest line " + std::to_string(number) + ": " + ex.what());
    }
  }
  if (!have_header) throw ValidationError("manifest is empty");
  validate(m);
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

}  // namespace wavegenre::io
