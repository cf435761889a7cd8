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
#include <vector>

#include "wavegenre/tensor/tensor.hpp"

namespace wavegenre::model {

inline constexpr int kGammatoneOrder = 4;
inline constexpr double kGammatoneLowHz = 50.0;
inline constexpr double kGammatoneTopMarginHz = 100.0;

/// Equivalent rectangular bandwidth in Hz.
double erb_bandwidth(double hz);

/// ERB-rate scale and its inverse.
double hz_to_erb_rate(double hz);
double erb_rate_to_hz(double erb_rate);

/// num_filters center frequencies spaced uniformly on the ERB-rate scale
/// from 50 Hz to sample_rate/2 - 100 Hz, ascending.
std::vector<double> gammatone_center_frequencies(std::size_t num_filters, double sample_rate);

/// Order-4 gammatone impulse responses, one per row, each scaled to unit
/// peak magnitude: num_filters x 1 x kernel_len. Throws ValidationError for
/// kernel_len < 2, num_filters < 1 or a sample rate too low for the band.
tensor::Tensor64 gammatone_filterbank(std::size_t num_filters, std::size_t kernel_len,
                                      double sample_rate);

}  // namespace wavegenre::model
