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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wavegenre/model/architecture.hpp"
#include "wavegenre/tensor/ops.hpp"

namespace wavegenre::model {

using tensor::BasicTensor;
using tensor::BatchNormState;
using tensor::Mode;
using tensor::Tape;
using tensor::Var;

inline constexpr double kGammatoneSampleRate = 22'050.0;

/// Convolution followed by an optional batch normalization.
template <typename T>
struct ConvBn {
  ConvBn(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
         tensor::Conv1dOptions options, bool batch_norm);

  BasicTensor<T> weight;  // out x in x kernel
  BasicTensor<T> bias;
  std::optional<BatchNormState<T>> bn;
  tensor::Conv1dOptions options;
};

/// Tape handles for the trainable tensors of a ConvBn.
template <typename T>
struct ConvBnVars {
  Var<T> weight, bias;
  std::optional<Var<T>> gamma, beta;
};

template <typename T>
ConvBnVars<T> bind(Tape<T>& tape, ConvBn<T>& layer);

template <typename T>
Var<T> apply(Tape<T>& tape, Var<T> x, ConvBn<T>& layer, const ConvBnVars<T>& vars, Mode mode);

/// Two kernel-3 same-padded conv+BN stages plus a shortcut: identity when
/// the channel counts agree, a 1x1 conv+BN projection otherwise.
template <typename T>
struct ResidualBlock {
  ResidualBlock(std::size_t in_channels, std::size_t out_channels);

  std::size_t in_channels() const { return conv1.weight.dim(1); }
  std::size_t out_channels() const { return conv1.weight.dim(0); }
  bool has_projection() const { return shortcut.has_value(); }

  ConvBn<T> conv1;
  ConvBn<T> conv2;
  std::optional<ConvBn<T>> shortcut;
};

template <typename T>
struct ResidualBlockVars {
  ConvBnVars<T> conv1, conv2;
  std::optional<ConvBnVars<T>> shortcut;
};

template <typename T>
ResidualBlockVars<T> bind(Tape<T>& tape, ResidualBlock<T>& block);

/// x: N x C_in x L -> N x C_out x L. Throws ShapeError on a channel mismatch.
template <typename T>
Var<T> residual_block_forward(Tape<T>& tape, Var<T> x, ResidualBlock<T>& block,
                              const ResidualBlockVars<T>& vars, Mode mode);

template <typename T>
Var<T> residual_block_forward(Tape<T>& tape, Var<T> x, ResidualBlock<T>& block, Mode mode);

/// Named view of a tensor held by a network.
template <typename T>
struct NamedTensor {
  std::string name;
  BasicTensor<T>* tensor;
  bool trainable;
};

/// Instantiated architecture: weights, biases and batch-norm state.
///
/// Copyable; copies share nothing. Forward passes in training mode mutate
/// batch-norm running statistics.
template <typename T>
class Network {
 public:
  /// Kaiming-uniform weights, zero biases, identity batch norm; gammatone
  /// layers start from the filter bank. Deterministic in seed.
  Network(ArchitectureSpec spec, std::uint64_t seed);

  const ArchitectureSpec& spec() const { return spec_; }

  /// x: N x 1 x input_length -> logits N x num_classes. rng drives dropout
  /// masks in training mode.
  Var<T> forward(Tape<T>& tape, Var<T> x, Mode mode, std::mt19937_64& rng);

  /// Inference-mode logits, releasing each layer's intermediates as soon as
  /// the next layer has consumed them.
  BasicTensor<T> infer(const BasicTensor<T>& x);

  /// Every tensor the network holds, in a stable order; running statistics
  /// are listed as non-trainable.
  std::vector<NamedTensor<T>> tensors();

  /// Trainable tensors only.
  std::vector<BasicTensor<T>*> parameters();

  std::size_t parameter_count();

  /// Copies tensor contents from another network of the same architecture.
  void copy_state_from(const Network& other);

 private:
  struct Layer {
    LayerSpec spec;
    std::optional<ConvBn<T>> conv;
    std::optional<ResidualBlock<T>> block;
    BasicTensor<T> weight;  // dense, output
    BasicTensor<T> bias;
  };

  Var<T> forward_layer(Tape<T>& tape, Var<T> x, Layer& layer, Mode mode, std::mt19937_64& rng);

  ArchitectureSpec spec_;
  std::vector<Layer> layers_;
};

extern template struct ConvBn<float>;
extern template struct ConvBn<double>;
extern template struct ResidualBlock<float>;
extern template struct ResidualBlock<double>;
extern template class Network<float>;
extern template class Network<double>;

}  // namespace wavegenre::model
