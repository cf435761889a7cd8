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

#include "wavegenre/audio/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavegenre/errors.hpp"

namespace wavegenre::audio {

namespace {

constexpr int kTableResolution = 512;  // entries per zero crossing

// Windowed sinc sampled on [0, kSincZeroCrossings], linearly interpolated.
class SincTable {
 public:
  SincTable() : values_(kSincZeroCrossings * kTableResolution + 2, 0.0) {
    const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      const double u = static_cast<double>(i) / kTableResolution;
      const double r = u / kSincZeroCrossings;
      if (r > 1) break;
      const double window = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1 - r * r)) / norm;
      const double sinc = u == 0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
      values_[i] = sinc * window;
    }
  }

  double operator()(double u) const {
    const double pos = std::abs(u) * kTableResolution;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return 0.0;
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

 private:
  std::vector<double> values_;
};

const SincTable& table() {
  static const SincTable t;
  return t;
}

// step: input samples advanced per output sample.
std::vector<float> run(std::span<const float> input, std::size_t output_length, double step) {
  const SincTable& kernel = table();
  const double scale = std::min(1.0, 1.0 / step);  // cutoff relative to input Nyquist
  const double reach = kSincZeroCrossings / scale;
  const auto last = static_cast<std::ptrdiff_t>(input.size()) - 1;
  std::vector<float> out(output_length);
  for (std::size_t n = 0; n < output_length; ++n) {
    const double x = n * step;
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(x - reach)));
    const auto hi = std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(std::floor(x + reach)));
    double acc = 0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) acc += input[j] * kernel((x - j) * scale);
    out[n] = static_cast<float>(acc * scale);
  }
  return out;
}

}  // namespace

std::vector<float> resample(std::span<const float> input, double from_rate, double to_rate) {
  if (!(from_rate > 0) || !(to_rate > 0)) {
    throw ValidationError("resampling rates must be positive");
  }
  if (from_rate == to_rate) return {input.begin(), input.end()};
  const auto length = static_cast<std::size_t>(std::llround(input.size() * to_rate / from_rate));
  return run(input, length, from_rate / to_rate);
}

std::vector<float> resample_to_length(std::span<const float> input, std::size_t output_length) {
  if (output_length == input.size()) return {input.begin(), input.end()};
  if (input.empty() || output_length == 0) return std::vector<float>(output_length, 0.0f);
  return run(input, output_length, static_cast<double>(input.size()) / output_length);
}

}  // namespace wavegenre::audio
