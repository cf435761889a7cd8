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

#include "wavegenre/audio/augment.hpp"

#include <algorithm>
#include <cmath>

#include "wavegenre/audio/loudness.hpp"
#include "wavegenre/audio/segment.hpp"
#include "wavegenre/audio/vocoder.hpp"
#include "wavegenre/errors.hpp"

namespace wavegenre::audio {

std::string_view to_string(Transform transform) {
  switch (transform) {
    case Transform::original: return "original";
    case Transform::noise: return "noise";
    case Transform::gain: return "gain";
    case Transform::loudness: return "loudness";
    case Transform::pitch: return "pitch";
    case Transform::stretch: return "stretch";
  }
  return "?";
}

Transform parse_transform(std::string_view name) {
  for (Transform t : {Transform::original, Transform::noise, Transform::gain, Transform::loudness,
                      Transform::pitch, Transform::stretch}) {
    if (name == to_string(t)) return t;
  }
  throw ValidationError("unknown transform '" + std::string(name) + "'");
}

void validate(const AugmentationConfig& c) {
  auto check = [](Range r, const char* what) {
    if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
      throw ValidationError(std::string(what) + " range is empty or not finite");
    }
  };
  check(c.noise_amplitude, "noise amplitude");
  check(c.gain_db, "gain");
  check(c.pitch_semitones, "pitch");
  check(c.stretch_rate, "stretch rate");
  if (c.noise_amplitude.lo < 0) throw ValidationError("noise amplitude must be non-negative");
  if (!(c.stretch_rate.lo > 0)) throw ValidationError("stretch rates must be positive");
  if (!std::isfinite(c.loudness_target)) throw ValidationError("loudness target must be finite");
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view track_id, Transform transform) {
  // FNV-1a over the triple, then a splitmix64 finalizer.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : track_id) mix(static_cast<unsigned char>(c));
  mix(0);
  for (char c : to_string(transform)) mix(static_cast<unsigned char>(c));
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

std::vector<float> add_noise(std::span<const float> x, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, stddev);
  std::vector<float> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<float>(x[i] + noise(rng));
  return out;
}

std::vector<float> apply_gain(std::span<const float> x, double db) {
  std::vector<float> out(x.begin(), x.end());
  if (db == 0) return out;
  const double g = std::pow(10.0, db / 20.0);
  for (float& v : out) v = static_cast<float>(v * g);
  return out;
}

std::optional<double> loudness_gain_db(std::span<const float> x, double sample_rate,
                                       double target) {
  const double measured = measure_loudness(x, sample_rate);
  if (!std::isfinite(measured)) return std::nullopt;
  return target - measured;
}

void hard_clip(std::span<float> x) {
  for (float& v : x) v = std::clamp(v, -1.0f, 1.0f);
}

namespace {

double draw(Range r, std::mt19937_64& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

AugmentedClip augment(const AudioClip& clip, Transform transform, const AugmentationConfig& config,
                      std::mt19937_64& rng) {
  AugmentedClip out;
  out.transform = transform;
  out.origin_track = clip.track_id;
  out.clip.sample_rate = clip.sample_rate;
  out.clip.genre_label = clip.genre_label;
  out.clip.track_id = transform == Transform::original
                          ? clip.track_id
                          : clip.track_id + "." + std::string(to_string(transform));
  std::vector<float>& y = out.clip.samples;
  switch (transform) {
    case Transform::original:
      y = clip.samples;
      break;
    case Transform::noise:
      out.parameter = draw(config.noise_amplitude, rng);
      y = add_noise(clip.samples, out.parameter, rng);
      break;
    case Transform::gain:
      out.parameter = draw(config.gain_db, rng);
      y = apply_gain(clip.samples, out.parameter);
      break;
    case Transform::loudness:
      if (auto g = loudness_gain_db(clip.samples, clip.sample_rate, config.loudness_target)) {
        out.parameter = *g;
        y = apply_gain(clip.samples, *g);
      } else {
        out.warning = "track " + clip.track_id + " is silent; loudness normalization skipped";
        y = clip.samples;
      }
      break;
    case Transform::pitch:
      out.parameter = draw(config.pitch_semitones, rng);
      y = pitch_shift(clip.samples, out.parameter);
      fit_length(y, clip.samples.size());
      break;
    case Transform::stretch:
      out.parameter = draw(config.stretch_rate, rng);
      y = time_stretch(clip.samples, out.parameter);
      fit_length(y, clip.samples.size());
      break;
  }
  hard_clip(y);
  return out;
}

std::vector<AugmentedClip> augment_clip(const AudioClip& clip, const AugmentationConfig& config) {
  validate(config);
  std::vector<AugmentedClip> out;
  std::mt19937_64 none(0);
  out.push_back(augment(clip, Transform::original, config, none));
  for (Transform t : kAugmentations) {
    std::mt19937_64 rng(derive_seed(config.seed, clip.track_id, t));
    try {
      out.push_back(augment(clip, t, config, rng));
    } catch (const Error& e) {
      throw Error(std::string(to_string(t)) + ": " + e.what());
    }
  }
  return out;
}

AugmentationSummary augment_dataset(std::span<const AudioClip> clips,
                                    const AugmentationConfig& config,
                                    const std::function<void(AugmentedClip&&)>& sink) {
  validate(config);
  AugmentationSummary summary;
  for (const AudioClip& clip : clips) {
    std::vector<AugmentedClip> produced;
    try {
      produced = augment_clip(clip, config);
    } catch (const Error& e) {
      throw Error("augmentation failed for track " + clip.track_id + " after " +
                  std::to_string(summary.clips) + " clips: " + e.what());
    }
    for (auto& a : produced) {
      if (a.warning) summary.warnings.push_back(*a.warning);
      sink(std::move(a));
      ++summary.produced;
    }
    ++summary.clips;
  }
  return summary;
}

}  // namespace wavegenre::audio
