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
#include <span>
#include <vector>

namespace wavegenre::audio {

inline constexpr std::size_t kVocoderWindow = 2048;
inline constexpr std::size_t kVocoderHop = 512;

/// Phase-vocoder time stretch: rate > 1 shortens, rate < 1 lengthens; pitch
/// is kept. Output length is round(input.size() / rate). Throws
/// ValidationError for non-positive rates.
std::vector<float> time_stretch(std::span<const float> input, double rate);

/// Shifts pitch by semitones, keeping the length: stretch the duration by
/// 2^(semitones/12), then resample back to input.size().
std::vector<float> pitch_shift(std::span<const float> input, double semitones);

}  // namespace wavegenre::audio
