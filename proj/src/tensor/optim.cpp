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

#include "wavegenre/tensor/optim.hpp"

#include <cmath>
#include <string>

namespace wavegenre::tensor {

template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, AdamMoments& moments,
                 std::uint64_t step, const AdamConfig& config) {
  if (moments.first.empty() && moments.second.empty()) {
    moments.first.assign(param.size(), 0.0);
    moments.second.assign(param.size(), 0.0);
  }
  if (grad.size() != param.size() || moments.first.size() != param.size() ||
      moments.second.size() != param.size()) {
    throw ShapeError("adam: parameter has " + std::to_string(param.size()) + " elements, gradient " +
                     std::to_string(grad.size()) + ", moments " +
                     std::to_string(moments.first.size()));
  }
  if (step == 0) throw ValidationError("adam: step count is 1-based");

  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    double& m = moments.first[i];
    double& v = moments.second[i];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    param[i] -= static_cast<T>(config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon));
  }
}

template <typename T>
Adam<T>::Adam(std::vector<BasicTensor<T>*> params, AdamConfig config)
    : params_(std::move(params)), moments_(params_.size()), config_(config) {
  for (BasicTensor<T>* p : params_) {
    if (p == nullptr || !p->requires_grad()) {
      throw UsageError("adam: every optimized tensor must require a gradient");
    }
  }
}

template <typename T>
void Adam<T>::step() {
  ++steps_;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    BasicTensor<T>& p = *params_[i];
    adam_update<T>(p.data(), p.grad(), moments_[i], steps_, config_);
  }
}

template <typename T>
void Adam<T>::zero_grad() {
  for (BasicTensor<T>* p : params_) p->zero_grad();
}

template <typename T>
void kaiming_uniform(BasicTensor<T>& weight, std::size_t fan_in, std::mt19937_64& rng) {
  if (fan_in == 0) throw ValidationError("kaiming_uniform: fan_in must be positive");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (T& w : weight.data()) w = static_cast<T>(dist(rng));
}

template void adam_update<float>(std::span<float>, std::span<const float>, AdamMoments&,
                                 std::uint64_t, const AdamConfig&);
template void adam_update<double>(std::span<double>, std::span<const double>, AdamMoments&,
                                  std::uint64_t, const AdamConfig&);
template class Adam<float>;
template class Adam<double>;
template void kaiming_uniform<float>(BasicTensor<float>&, std::size_t, std::mt19937_64&);
template void kaiming_uniform<double>(BasicTensor<double>&, std::size_t, std::mt19937_64&);

}  // namespace wavegenre::tensor
