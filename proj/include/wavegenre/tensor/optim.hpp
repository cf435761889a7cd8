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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wavegenre/tensor/tensor.hpp"

namespace wavegenre::tensor {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates of one parameter tensor.
struct AdamMoments {
  std::vector<double> first;
  std::vector<double> second;
};

/// One bias-corrected Adam update of `param` in place. `step` is the
/// 1-based update count. Throws ShapeError when the three buffers disagree
/// in size.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, AdamMoments& moments,
                 std::uint64_t step, const AdamConfig& config);

/// Adam over a fixed set of parameter tensors, using each tensor's grad().
template <typename T>
class Adam {
 public:
  Adam(std::vector<BasicTensor<T>*> params, AdamConfig config = {});

  /// Applies one update to every parameter and increments the step counter.
  void step();
  void zero_grad();

  std::uint64_t steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }

 private:
  std::vector<BasicTensor<T>*> params_;
  std::vector<AdamMoments> moments_;
  AdamConfig config_;
  std::uint64_t steps_ = 0;
};

extern template class Adam<float>;
extern template class Adam<double>;

/// Kaiming-uniform fan-in initialization, bound sqrt(6 / fan_in).
template <typename T>
void kaiming_uniform(BasicTensor<T>& weight, std::size_t fan_in, std::mt19937_64& rng);

}  // namespace wavegenre::tensor
