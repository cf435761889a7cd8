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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wavegenre/train/dataset.hpp"

namespace wavegenre::io {

inline constexpr std::array<const char*, 10> kGtzanGenres{
    "blues", "classical", "country", "disco", "hiphop",
    "jazz",  "metal",     "pop",     "reggae", "rock"};

struct ManifestEntry {
  std::string track_id;
  std::filesystem::path path;  // relative paths resolve against the manifest's directory
  int genre = 0;
  std::size_t duration = 0;  // samples at 22,050 Hz
  std::string origin;        // == track_id for originals
  std::string transform = train::kOriginalTag;

  bool augmented() const { return transform != train::kOriginalTag; }
};

struct Manifest {
  std::vector<std::string> genres;
  std::optional<std::uint64_t> seed;  // augmentation seed, for augmented corpora
  std::string augmentation_digest;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base;  // directory relative entry paths resolve against

  std::filesystem::path resolve(const ManifestEntry& entry) const;
  const ManifestEntry* find(const std::string& track_id) const;
  std::vector<train::TrackRef> original_tracks() const;
  /// FileClipSource over every entry.
  train::FileClipSource clip_source() const;
};

/// Throws ValidationError on duplicate track ids, genre indices outside
/// [0, genres) or [0, 10), and augmented entries whose origin is not an
/// original entry of the manifest.
void validate(const Manifest& manifest);

/// JSON Lines: one header object, then one object per entry. Written
/// atomically.
std::string serialize(const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Parses and validates; base is set to the file's directory. Throws
/// ValidationError (with the line number) for malformed content.
Manifest parse_manifest(const std::string& text, const std::filesystem::path& base);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace wavegenre::io
