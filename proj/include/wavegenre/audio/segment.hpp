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
#include <span>
#include <string>
#include <vector>

#include "wavegenre/audio/clip.hpp"

namespace wavegenre::audio {

struct Segment {
  std::vector<float> samples;  // kWindow samples
  std::string track_id;
  std::size_t index = 0;
  std::optional<int> genre_label;
};

/// First sample of segment k.
constexpr std::size_t segment_start(std::size_t k) { return k * kHop; }

/// Copies segment k of samples into out (kWindow floats), zero-filling past
/// the end. Throws TooShortError below kMinClipLength.
void copy_segment(std::span<const float> samples, std::size_t k, std::span<float> out,
                  const std::string& track_id = {});

/// The 21 overlapping windows of a clip. Throws TooShortError naming the
/// track when the clip is shorter than kMinClipLength.
std::vector<Segment> segment(const AudioClip& clip);

/// Truncates or zero-pads to exactly length samples.
void fit_length(std::vector<float>& samples, std::size_t length = kClipLength);

/// Brings a decoded clip to kClipLength when it is within tolerance of it
/// (fractional shortfall); shorter clips throw TooShortError.
void canonicalize_length(AudioClip& clip, double tolerance = 0.01);

}  // namespace wavegenre::audio
