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

inline constexpr int kSincZeroCrossings = 32;  // 64 taps per phase
inline constexpr double kKaiserBeta = 8.6;

/// Band-limited resampling with a Kaiser-windowed sinc. Downsampling lowers
/// the cutoff to the output Nyquist. Output length is
/// round(input.size() * to_rate / from_rate).
std::vector<float> resample(std::span<const float> input, double from_rate, double to_rate);

/// Resamples so the output has exactly output_length samples, treating the
/// input and output as spanning the same duration.
std::vector<float> resample_to_length(std::span<const float> input, std::size_t output_length);

}  // namespace wavegenre::audio
