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

#include "wavegenre/audio/segment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wavegenre/errors.hpp"

namespace wavegenre::audio {

namespace {

void require_length(std::size_t length, const std::string& track_id) {
  if (length < kMinClipLength) {
    throw TooShortError("track " + (track_id.empty() ? std::string("<unnamed>") : track_id) +
                        " has " + std::to_string(length) + " samples; segmentation needs " +
                        std::to_string(kMinClipLength));
  }
}

}  // namespace

void copy_segment(std::span<const float> samples, std::size_t k, std::span<float> out,
                  const std::string& track_id) {
  require_length(samples.size(), track_id);
  if (k >= kSegmentsPerClip) {
    throw ValidationError("segment index " + std::to_string(k) + " out of range");
  }
  if (out.size() != kWindow) throw ShapeError("segment buffer must hold 110250 samples");
  const std::size_t start = segment_start(k);
  const std::size_t available = std::min(kWindow, samples.size() - start);
  std::copy_n(samples.begin() + start, available, out.begin());
  std::fill(out.begin() + available, out.end(), 0.0f);
}

std::vector<Segment> segment(const AudioClip& clip) {
  require_length(clip.samples.size(), clip.track_id);
  std::vector<Segment> out(kSegmentsPerClip);
  for (std::size_t k = 0; k < kSegmentsPerClip; ++k) {
    Segment& s = out[k];
    s.samples.resize(kWindow);
    copy_segment(clip.samples, k, s.samples, clip.track_id);
    s.track_id = clip.track_id;
    s.index = k;
    s.genre_label = clip.genre_label;
  }
  return out;
}

void fit_length(std::vector<float>& samples, std::size_t length) { samples.resize(length, 0.0f); }

void canonicalize_length(AudioClip& clip, double tolerance) {
  const auto floor_length =
      static_cast<std::size_t>(std::ceil(kClipLength * (1.0 - tolerance)));
  const std::size_t minimum = std::min(floor_length, kMinClipLength);
  if (clip.samples.size() < minimum) {
    char seconds[64];
    std::snprintf(seconds, sizeof seconds, "%.2f s; the minimum is %.2f s",
                  clip.samples.size() / kSampleRate, minimum / kSampleRate);
    throw TooShortError("track " + clip.track_id + " lasts " + seconds + " (" +
                        std::to_string(minimum) + " samples at 22,050 Hz)");
  }
  fit_length(clip.samples, kClipLength);
}

}  // namespace wavegenre::audio
