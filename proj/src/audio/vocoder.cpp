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

#include "wavegenre/audio/vocoder.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "wavegenre/audio/resample.hpp"
#include "wavegenre/errors.hpp"

namespace wavegenre::audio {

namespace {

constexpr std::size_t kBins = kVocoderWindow / 2 + 1;
constexpr double kTwoPi = 2 * std::numbers::pi;

using Spectrum = std::vector<std::complex<double>>;  // frames x kBins

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft {
 public:
  Fft() : real_(kVocoderWindow), freq_(kBins) {
    std::lock_guard lock(planner_mutex());
    auto* f = reinterpret_cast<fftw_complex*>(freq_.data());
    forward_ = fftw_plan_dft_r2c_1d(kVocoderWindow, real_.data(), f, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(kVocoderWindow, f, real_.data(), FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::vector<double>& real() { return real_; }
  std::vector<std::complex<double>>& freq() { return freq_; }
  void forward() { fftw_execute(forward_); }
  void inverse() { fftw_execute(inverse_); }

 private:
  std::vector<double> real_;
  std::vector<std::complex<double>> freq_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

std::vector<double> hann() {
  std::vector<double> w(kVocoderWindow);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = 0.5 - 0.5 * std::cos(kTwoPi * i / kVocoderWindow);
  }
  return w;
}

double wrap(double phase) { return phase - kTwoPi * std::round(phase / kTwoPi); }

}  // namespace

std::vector<float> time_stretch(std::span<const float> input, double rate) {
  if (!(rate > 0) || !std::isfinite(rate)) {
    throw ValidationError("time-stretch rate must be positive, got " + std::to_string(rate));
  }
  const std::size_t n = input.size();
  const auto out_length = static_cast<std::size_t>(std::llround(n / rate));
  if (n == 0) return {};
  const std::size_t half = kVocoderWindow / 2;
  const std::size_t frames = 1 + n / kVocoderHop;
  const auto window = hann();
  Fft fft;

  // Centered analysis frames over the zero-padded signal.
  Spectrum spec(frames * kBins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < kVocoderWindow; ++i) {
      const auto pos = static_cast<std::ptrdiff_t>(t * kVocoderHop + i) - static_cast<std::ptrdiff_t>(half);
      const double x = pos >= 0 && pos < static_cast<std::ptrdiff_t>(n) ? input[pos] : 0.0;
      fft.real()[i] = x * window[i];
    }
    fft.forward();
    std::copy(fft.freq().begin(), fft.freq().end(), spec.begin() + t * kBins);
  }

  std::vector<double> advance(kBins);
  for (std::size_t k = 0; k < kBins; ++k) advance[k] = kTwoPi * kVocoderHop * k / kVocoderWindow;
  std::vector<double> phase(kBins);
  for (std::size_t k = 0; k < kBins; ++k) phase[k] = std::arg(spec[k]);

  const auto steps = static_cast<std::size_t>(std::ceil(frames / rate));
  const std::size_t span = kVocoderWindow + kVocoderHop * (steps - 1);
  std::vector<double> signal(span, 0.0), weight(span, 0.0);
  auto column = [&](std::size_t t, std::size_t k) {
    return t < frames ? spec[t * kBins + k] : std::complex<double>{};
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = s * rate;
    if (t >= frames) break;
    const auto i = static_cast<std::size_t>(t);
    const double alpha = t - i;
    for (std::size_t k = 0; k < kBins; ++k) {
      const auto c0 = column(i, k), c1 = column(i + 1, k);
      const double mag = (1 - alpha) * std::abs(c0) + alpha * std::abs(c1);
      fft.freq()[k] = std::polar(mag, phase[k]);
      const double delta = wrap(std::arg(c1) - std::arg(c0) - advance[k]);
      phase[k] += advance[k] + delta;
    }
    fft.inverse();
    const std::size_t offset = s * kVocoderHop;
    for (std::size_t j = 0; j < kVocoderWindow; ++j) {
      signal[offset + j] += fft.real()[j] / kVocoderWindow * window[j];
      weight[offset + j] += window[j] * window[j];
    }
  }

  std::vector<float> out(out_length, 0.0f);
  for (std::size_t j = 0; j < out_length && j + half < span; ++j) {
    const double w = weight[j + half];
    out[j] = static_cast<float>(w > 1e-10 ? signal[j + half] / w : signal[j + half]);
  }
  return out;
}

std::vector<float> pitch_shift(std::span<const float> input, double semitones) {
  if (semitones == 0) return {input.begin(), input.end()};
  const double rate = std::pow(2.0, -semitones / 12.0);
  return resample_to_length(time_stretch(input, rate), input.size());
}

}  // namespace wavegenre::audio
