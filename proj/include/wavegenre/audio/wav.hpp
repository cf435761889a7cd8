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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavegenre/audio/clip.hpp"

namespace wavegenre::audio {

/// Decoded RIFF/WAV payload, interleaved, scaled by the format's full scale.
struct WavData {
  std::vector<float> samples;
  int channels = 0;
  double sample_rate = 0;
  int bits_per_sample = 0;
};

/// Accepts PCM 8/16/24-bit and 32-bit float (plain or extensible), 1 or 2
/// channels. Throws MalformedAudioError, UnsupportedFormatError or
/// EmptyAudioError.
WavData decode_wav(std::string_view bytes);

/// decode_wav on a file; throws IoError when it cannot be read.
WavData read_wav(const std::filesystem::path& path);

/// Decodes, averages channels and resamples to 22,050 Hz when needed.
AudioClip ingest(const std::filesystem::path& path, std::string track_id,
                 std::optional<int> genre_label = std::nullopt);

/// Mono 16-bit PCM encoding; samples are clamped to [-1, 1].
std::string encode_wav16(std::span<const float> samples, double sample_rate);

/// encode_wav16 written atomically.
void write_wav16(const std::filesystem::path& path, std::span<const float> samples,
                 double sample_rate);

}  // namespace wavegenre::audio
