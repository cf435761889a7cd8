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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wavegenre/audio/clip.hpp"

namespace wavegenre::io {

/// Synthetic stand-in for a genre recording: half-second notes of a
/// three-harmonic tone whose pitch band depends on the genre, plus a
/// genre-specific noise floor. Deterministic in (genre, seed).
std::vector<float> synth_clip(int genre, std::uint64_t seed,
                              std::size_t length = audio::kClipLength);

struct FixtureSpec {
  int genres = 2;
  int tracks_per_genre = 10;
  std::uint64_t seed = 1;
  std::size_t length = audio::kClipLength;
};

/// Writes <dir>/<genre>/<genre>.000NN.wav (16-bit mono, 22,050 Hz) using the
/// GTZAN genre names.
void write_fixture(const std::filesystem::path& dir, const FixtureSpec& spec);

}  // namespace wavegenre::io
