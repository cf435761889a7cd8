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

#include "wavegenre/model/gammatone.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavegenre/errors.hpp"

namespace wavegenre::model {

double erb_bandwidth(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

double hz_to_erb_rate(double hz) { return 21.4 * std::log10(4.37 * hz / 1000.0 + 1.0); }

double erb_rate_to_hz(double erb_rate) {
  return (std::pow(10.0, erb_rate / 21.4) - 1.0) * 1000.0 / 4.37;
}

std::vector<double> gammatone_center_frequencies(std::size_t num_filters, double sample_rate) {
  if (num_filters < 1) throw ValidationError("gammatone bank needs at least one filter");
  const double high = sample_rate / 2 - kGammatoneTopMarginHz;
  if (!(high > kGammatoneLowHz)) {
    throw ValidationError("sample rate " + std::to_string(sample_rate) +
                          " Hz leaves no band above 50 Hz for the gammatone bank");
  }
  const double lo = hz_to_erb_rate(kGammatoneLowHz);
  const double hi = hz_to_erb_rate(high);
  std::vector<double> centers(num_filters);
  for (std::size_t i = 0; i < num_filters; ++i) {
    const double frac = num_filters == 1 ? 0.0 : static_cast<double>(i) / (num_filters - 1);
    centers[i] = erb_rate_to_hz(lo + frac * (hi - lo));
  }
  return centers;
}

tensor::Tensor64 gammatone_filterbank(std::size_t num_filters, std::size_t kernel_len,
                                      double sample_rate) {
  if (kernel_len < 2) {
    throw ValidationError("gammatone kernel length must be at least 2, got " +
                          std::to_string(kernel_len));
  }
  const auto centers = gammatone_center_frequencies(num_filters, sample_rate);
  tensor::Tensor64 bank({num_filters, 1, kernel_len});
  constexpr double two_pi = 2 * std::numbers::pi;
  for (std::size_t i = 0; i < num_filters; ++i) {
    const double f = centers[i];
    const double b = 1.019 * erb_bandwidth(f);
    double* row = bank.ptr() + i * kernel_len;
    double peak = 0;
    for (std::size_t n = 0; n < kernel_len; ++n) {
      const double t = static_cast<double>(n) / sample_rate;
      row[n] = std::pow(t, kGammatoneOrder - 1) * std::exp(-two_pi * b * t) *
               std::cos(two_pi * f * t);
      peak = std::max(peak, std::abs(row[n]));
    }
    for (std::size_t n = 0; n < kernel_len; ++n) row[n] /= peak;
  }
  return bank;
}

}  // namespace wavegenre::model
