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

// DFT-peak oracle backed by FFTW.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace wavegenre::testing {

struct Peak {
  double frequency = 0;
  double bin_width = 0;
};

inline Peak spectral_peak(std::span<const float> x, double sample_rate) {
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::size_t best = 1;
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (std::abs(out[k]) > std::abs(out[best])) best = k;
  }
  return {best * sample_rate / n, sample_rate / n};
}

inline std::vector<float> sine(double hz, double sample_rate, std::size_t n, double amp = 1.0,
                               double phase = 0.0) {
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<float>(amp * std::sin(2 * std::numbers::pi * hz * i / sample_rate + phase));
  }
  return x;
}

inline double relative_l2(std::span<const float> a, std::span<const float> b) {
  double d = 0, r = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (double(a[i]) - b[i]) * (double(a[i]) - b[i]);
    r += double(b[i]) * b[i];
  }
  return std::sqrt(d / r);
}

}  // namespace wavegenre::testing
