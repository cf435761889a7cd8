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
#include <random>
#include <span>
#include <vector>

#include "wavegenre/tensor/tape.hpp"

namespace wavegenre::tensor {

enum class Padding { same, valid };
enum class Mode { training, inference };

/// Output length of a 1D convolution. Throws GeometryError when the kernel
/// does not fit the (padded) input.
std::size_t conv_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                               Padding padding);

/// Output length of a pooling window; trailing partial windows are dropped.
std::size_t pool_output_length(std::size_t length, std::size_t pool, std::size_t stride);

/// Zeros added on the left and right for same padding. The odd extra zero
/// goes to the right.
struct PadAmount {
  std::size_t left = 0;
  std::size_t right = 0;
};
PadAmount same_padding(std::size_t length, std::size_t kernel, std::size_t stride);

struct Conv1dOptions {
  std::size_t stride = 1;
  Padding padding = Padding::valid;
};

/// x: N x C_in x L, weight: C_out x C_in x K, bias: C_out -> N x C_out x L'.
template <typename T>
Var<T> conv1d(Tape<T>& tape, Var<T> x, Var<T> weight, Var<T> bias, Conv1dOptions options);

/// N x C x L -> N x C x L'. Gradient goes to the first maximal element.
template <typename T>
Var<T> maxpool1d(Tape<T>& tape, Var<T> x, std::size_t pool, std::size_t stride);

template <typename T>
Var<T> avgpool1d(Tape<T>& tape, Var<T> x, std::size_t pool, std::size_t stride);

/// Per-channel batch normalization state. gamma and beta are trainable;
/// running statistics are updated in training mode only.
template <typename T>
struct BatchNormState {
  explicit BatchNormState(std::size_t channels, double epsilon = 1e-5, double momentum = 0.1);

  std::size_t channels() const { return gamma.size(); }

  BasicTensor<T> gamma;
  BasicTensor<T> beta;
  BasicTensor<T> running_mean;
  BasicTensor<T> running_var;
  double epsilon;
  double momentum;
};

/// x: N x C x L. Training mode normalizes with statistics over N and L and
/// folds them into the running estimates; inference mode uses the running
/// estimates.
template <typename T>
Var<T> batchnorm1d(Tape<T>& tape, Var<T> x, BatchNormState<T>& state, Mode mode);

/// As above with gamma and beta supplied as tape variables; the state's own
/// gamma and beta are ignored and only its running statistics are used.
template <typename T>
Var<T> batchnorm1d(Tape<T>& tape, Var<T> x, Var<T> gamma, Var<T> beta,
                   BatchNormState<T>& state, Mode mode);

template <typename T>
Var<T> relu(Tape<T>& tape, Var<T> x);

template <typename T>
Var<T> leaky_relu(Tape<T>& tape, Var<T> x, double slope);

template <typename T>
Var<T> sigmoid(Tape<T>& tape, Var<T> x);

/// Row-wise softmax of an N x K tensor (max-subtracted).
template <typename T>
Var<T> softmax(Tape<T>& tape, Var<T> x);

/// x: N x D, weight: M x D, bias: M -> N x M.
template <typename T>
Var<T> dense(Tape<T>& tape, Var<T> x, Var<T> weight, Var<T> bias);

/// Inverted dropout: survivors are scaled by 1/(1-p) in training mode;
/// inference mode and p == 0 return x itself.
template <typename T>
Var<T> dropout(Tape<T>& tape, Var<T> x, double p, Mode mode, std::mt19937_64& rng);

/// Elementwise sum of equally shaped tensors.
template <typename T>
Var<T> add(Tape<T>& tape, Var<T> a, Var<T> b);

/// Elementwise product with a constant.
template <typename T>
Var<T> scale(Tape<T>& tape, Var<T> x, double factor);

/// N x C x L -> N x (C*L), channel-major.
template <typename T>
Var<T> flatten(Tape<T>& tape, Var<T> x);

/// Sum of all elements as a 1-element tensor.
template <typename T>
Var<T> sum(Tape<T>& tape, Var<T> x);

/// Mean over the batch of -log softmax(logits)[label].
template <typename T>
Var<T> cross_entropy(Tape<T>& tape, Var<T> logits, std::span<const int> labels);

/// Softmax of raw rows without a tape (inference helpers, tests).
template <typename T>
std::vector<T> softmax_rows(std::span<const T> logits, std::size_t classes);

}  // namespace wavegenre::tensor
