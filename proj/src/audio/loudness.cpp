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

#include "wavegenre/audio/loudness.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wavegenre/errors.hpp"

namespace wavegenre::audio {

std::array<Biquad, 2> k_weighting(double sample_rate) {
  // Analog prototypes of the BS.1770 pre-filter, mapped by the bilinear
  // transform.
  std::array<Biquad, 2> stages;
  {
    const double f0 = 1681.974450955533;
    const double gain_db = 3.999843853973347;
    const double q = 0.7071752369554196;
    const double k = std::tan(std::numbers::pi * f0 / sample_rate);
    const double vh = std::pow(10.0, gain_db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;
    stages[0].b = {(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0,
                   (vh - vb * k / q + k * k) / a0};
    stages[0].a = {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
  }
  {
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(std::numbers::pi * f0 / sample_rate);
    const double a0 = 1.0 + k / q + k * k;
    stages[1].b = {1.0, -2.0, 1.0};
    stages[1].a = {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
  }
  return stages;
}

double measure_loudness(std::span<const float> samples, double sample_rate) {
  const auto block = static_cast<std::size_t>(std::llround(0.4 * sample_rate));
  const auto step = static_cast<std::size_t>(std::llround(0.1 * sample_rate));
  if (samples.size() < block) {
    throw ValidationError("loudness needs at least 400 ms of audio, got " +
                          std::to_string(samples.size()) + " samples");
  }
  const auto stages = k_weighting(sample_rate);
  std::vector<double> squared(samples.size());
  double x1[2] = {0, 0}, x2[2] = {0, 0}, y1[2] = {0, 0}, y2[2] = {0, 0};
  for (std::size_t n = 0; n < samples.size(); ++n) {
    double v = samples[n];
    for (int s = 0; s < 2; ++s) {
      const Biquad& f = stages[s];
      const double y = f.b[0] * v + f.b[1] * x1[s] + f.b[2] * x2[s] - f.a[1] * y1[s] - f.a[2] * y2[s];
      x2[s] = x1[s];
      x1[s] = v;
      y2[s] = y1[s];
      y1[s] = y;
      v = y;
    }
    squared[n] = v * v;
  }
  // Prefix sums make each block mean O(1).
  std::vector<double> prefix(squared.size() + 1, 0.0);
  for (std::size_t n = 0; n < squared.size(); ++n) prefix[n + 1] = prefix[n] + squared[n];

  const std::size_t blocks = (samples.size() - block) / step + 1;
  std::vector<double> power(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    power[j] = (prefix[j * step + block] - prefix[j * step]) / block;
  }
  auto lufs = [](double z) { return -0.691 + 10.0 * std::log10(z); };

  double sum = 0;
  std::size_t count = 0;
  for (double z : power) {
    if (z > 0 && lufs(z) > kAbsoluteGate) {
      sum += z;
      ++count;
    }
  }
  if (count == 0) return -std::numeric_limits<double>::infinity();
  const double relative = lufs(sum / count) + kRelativeGate;
  sum = 0;
  count = 0;
  for (double z : power) {
    if (z > 0 && lufs(z) > kAbsoluteGate && lufs(z) > relative) {
      sum += z;
      ++count;
    }
  }
  return lufs(sum / count);
}

}  // namespace wavegenre::audio
