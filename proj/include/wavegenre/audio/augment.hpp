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
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavegenre/audio/clip.hpp"

namespace wavegenre::audio {

enum class Transform { original, noise, gain, loudness, pitch, stretch };

inline constexpr std::array<Transform, 5> kAugmentations{
    Transform::noise, Transform::gain, Transform::loudness, Transform::pitch, Transform::stretch};

std::string_view to_string(Transform transform);

/// Throws ValidationError for an unknown name.
Transform parse_transform(std::string_view name);

struct Range {
  double lo = 0;
  double hi = 0;
};

struct AugmentationConfig {
  Range noise_amplitude{0.005, 0.02};  // Gaussian standard deviation
  Range gain_db{-12.0, 12.0};
  double loudness_target = -23.0;  // LUFS
  Range pitch_semitones{-8.0, 8.0};
  Range stretch_rate{0.5, 1.5};
  std::uint64_t seed = 0;
};

/// Throws ValidationError for empty or inverted ranges and non-positive
/// stretch rates.
void validate(const AugmentationConfig& config);

/// Stable seed for one (corpus seed, track, transform) triple, independent
/// of processing order and platform.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view track_id, Transform transform);

struct AugmentedClip {
  AudioClip clip;
  Transform transform = Transform::original;
  double parameter = 0;  // drawn value: std, dB, gain dB, semitones or rate
  std::string origin_track;
  std::optional<std::string> warning;
};

std::vector<float> add_noise(std::span<const float> x, double stddev, std::mt19937_64& rng);
std::vector<float> apply_gain(std::span<const float> x, double db);

/// Constant gain (in dB) that moves the measured loudness to target, or
/// nothing for silence.
std::optional<double> loudness_gain_db(std::span<const float> x, double sample_rate,
                                       double target);

/// In-place clamp to [-1, 1].
void hard_clip(std::span<float> x);

/// Draws the transform's parameter from rng and applies it. Output is
/// hard-clipped; pitch and stretch outputs are truncated or zero-padded back
/// to the input length (kClipLength for canonical clips).
AugmentedClip augment(const AudioClip& clip, Transform transform, const AugmentationConfig& config,
                      std::mt19937_64& rng);

/// The original plus one clip per transform, each seeded by derive_seed.
std::vector<AugmentedClip> augment_clip(const AudioClip& clip, const AugmentationConfig& config);

struct AugmentationSummary {
  std::size_t clips = 0;
  std::size_t produced = 0;
  std::vector<std::string> warnings;
};

/// Streams six entries per clip into sink. A failing clip aborts the run
/// with an error naming the track and transform.
AugmentationSummary augment_dataset(std::span<const AudioClip> clips,
                                    const AugmentationConfig& config,
                                    const std::function<void(AugmentedClip&&)>& sink);

}  // namespace wavegenre::audio
