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
#include <span>

namespace wavegenre::audio {

inline constexpr double kLoudnessTarget = -23.0;  // LUFS
inline constexpr double kAbsoluteGate = -70.0;    // LUFS
inline constexpr double kRelativeGate = -10.0;    // LU

/// Direct-form biquad: b0 b1 b2 / 1 a1 a2.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{};
};

/// K-weighting stages (high shelf, then high pass) for a sample rate.
std::array<Biquad, 2> k_weighting(double sample_rate);

/// Integrated loudness of a mono signal in LUFS, with 400 ms blocks at 75%
/// overlap, absolute and relative gating. Returns -infinity when every block
/// falls below the absolute gate. Throws ValidationError when the signal is
/// shorter than one block.
double measure_loudness(std::span<const float> samples, double sample_rate);

}  // namespace wavegenre::audio
