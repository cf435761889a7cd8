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
#include <optional>
#include <string>
#include <vector>

namespace wavegenre::audio {

inline constexpr double kSampleRate = 22'050.0;
inline constexpr std::size_t kClipLength = 661'500;  // 30 s
inline constexpr std::size_t kWindow = 110'250;      // 5 s
inline constexpr std::size_t kHop = 27'562;          // floor(0.25 * kWindow)
inline constexpr std::size_t kSegmentsPerClip = 21;
inline constexpr std::size_t kMinClipLength = (kSegmentsPerClip - 1) * kHop + kWindow;

/// Mono waveform in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  double sample_rate = kSampleRate;
  std::string track_id;
  std::optional<int> genre_label;
};

}  // namespace wavegenre::audio
