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

#include "wavegenre/io/fixture.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "wavegenre/audio/wav.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/io/manifest.hpp"

namespace wavegenre::io {

std::vector<float> synth_clip(int genre, std::uint64_t seed, std::size_t length) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(genre)};
  std::mt19937_64 rng(seq);
  const double sr = audio::kSampleRate;
  const double centre = 110.0 * std::pow(2.0, genre * 0.6);
  std::uniform_real_distribution<double> semitone(-2.0, 2.0);
  std::normal_distribution<double> noise(0.0, 0.004 * (1 + genre % 3));
  const std::size_t note = static_cast<std::size_t>(0.5 * sr);
  std::vector<float> x(length);
  double phase = 0;
  for (std::size_t start = 0; start < length; start += note) {
    const double f = centre * std::pow(2.0, semitone(rng) / 12.0);
    for (std::size_t i = start; i < std::min(length, start + note); ++i) {
      const double t = (i - start) / sr;
      const double env = 0.6 + 0.4 * std::exp(-6 * t);
      phase += 2 * std::numbers::pi * f / sr;
      const double v = std::sin(phase) + 0.5 * std::sin(2 * phase) + 0.25 * std::sin(3 * phase);
      x[i] = static_cast<float>(0.25 * env * v + noise(rng));
    }
  }
  return x;
}

void write_fixture(const std::filesystem::path& dir, const FixtureSpec& spec) {
  if (spec.genres < 1 || spec.genres > static_cast<int>(kGtzanGenres.size())) {
    throw ValidationError("fixture genres must be in [1, 10]");
  }
  if (spec.tracks_per_genre < 1) throw ValidationError("fixture needs at least one track");
  for (int g = 0; g < spec.genres; ++g) {
    const std::string name = kGtzanGenres[g];
    for (int t = 0; t < spec.tracks_per_genre; ++t) {
      char file[64];
      std::snprintf(file, sizeof file, "%s.%05d.wav", name.c_str(), t);
      const auto x = synth_clip(g, spec.seed * 1000003 + t, spec.length);
      audio::write_wav16(dir / name / file, x, audio::kSampleRate);
    }
  }
}

}  // namespace wavegenre::io
