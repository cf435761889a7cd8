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

#include "wavegenre/model/network.hpp"

#include <string>
#include <utility>

#include "wavegenre/errors.hpp"
#include "wavegenre/model/gammatone.hpp"
#include "wavegenre/tensor/optim.hpp"

namespace wavegenre::model {

template <typename T>
ConvBn<T>::ConvBn(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                  tensor::Conv1dOptions options_, bool batch_norm)
    : weight({out_channels, in_channels, kernel}), bias({out_channels}), options(options_) {
  weight.set_requires_grad(true);
  bias.set_requires_grad(true);
  if (batch_norm) {
    bn.emplace(out_channels);
    bn->gamma.set_requires_grad(true);
    bn->beta.set_requires_grad(true);
  }
}

template <typename T>
ConvBnVars<T> bind(Tape<T>& tape, ConvBn<T>& layer) {
  ConvBnVars<T> v{tape.parameter(layer.weight), tape.parameter(layer.bias), {}, {}};
  if (layer.bn) {
    v.gamma = tape.parameter(layer.bn->gamma);
    v.beta = tape.parameter(layer.bn->beta);
  }
  return v;
}

template <typename T>
Var<T> apply(Tape<T>& tape, Var<T> x, ConvBn<T>& layer, const ConvBnVars<T>& vars, Mode mode) {
  Var<T> y = tensor::conv1d(tape, x, vars.weight, vars.bias, layer.options);
  if (layer.bn) y = tensor::batchnorm1d(tape, y, *vars.gamma, *vars.beta, *layer.bn, mode);
  return y;
}

template <typename T>
ResidualBlock<T>::ResidualBlock(std::size_t in_channels, std::size_t out_channels)
    : conv1(in_channels, out_channels, 3, {1, tensor::Padding::same}, true),
      conv2(out_channels, out_channels, 3, {1, tensor::Padding::same}, true) {
  if (in_channels != out_channels) {
    shortcut.emplace(in_channels, out_channels, 1, tensor::Conv1dOptions{1, tensor::Padding::same},
                     true);
  }
}

template <typename T>
ResidualBlockVars<T> bind(Tape<T>& tape, ResidualBlock<T>& block) {
  ResidualBlockVars<T> v{bind(tape, block.conv1), bind(tape, block.conv2), {}};
  if (block.shortcut) v.shortcut = bind(tape, *block.shortcut);
  return v;
}

template <typename T>
Var<T> residual_block_forward(Tape<T>& tape, Var<T> x, ResidualBlock<T>& block,
                              const ResidualBlockVars<T>& vars, Mode mode) {
  const auto& shape = tape.shape(x);
  if (shape.size() != 3 || shape[1] != block.in_channels()) {
    throw ShapeError("residual block expects N x " + std::to_string(block.in_channels()) +
                     " x L input, got " + tensor::to_string(shape));
  }
  Var<T> h = apply(tape, x, block.conv1, vars.conv1, mode);
  h = tensor::leaky_relu(tape, h, kLeakySlope);
  h = apply(tape, h, block.conv2, vars.conv2, mode);
  const Var<T> skip = block.shortcut ? apply(tape, x, *block.shortcut, *vars.shortcut, mode) : x;
  return tensor::leaky_relu(tape, tensor::add(tape, h, skip), kLeakySlope);
}

template <typename T>
Var<T> residual_block_forward(Tape<T>& tape, Var<T> x, ResidualBlock<T>& block, Mode mode) {
  return residual_block_forward(tape, x, block, bind(tape, block), mode);
}

namespace {

template <typename T>
Var<T> activate(Tape<T>& tape, Var<T> x, Activation activation) {
  switch (activation) {
    case Activation::relu: return tensor::relu(tape, x);
    case Activation::leaky_relu: return tensor::leaky_relu(tape, x, kLeakySlope);
    case Activation::sigmoid: return tensor::sigmoid(tape, x);
    case Activation::softmax: return tensor::softmax(tape, x);
    case Activation::none: return x;
  }
  return x;
}

template <typename T>
void init_conv(ConvBn<T>& c, std::mt19937_64& rng) {
  tensor::kaiming_uniform(c.weight, c.weight.dim(1) * c.weight.dim(2), rng);
}

}  // namespace

template <typename T>
Network<T>::Network(ArchitectureSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  const auto trace = shape_trace(spec_);
  std::mt19937_64 rng(seed);
  std::size_t channels = 1;
  std::size_t features = 0;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const LayerSpec& l = spec_.layers[i];
    Layer layer{l, {}, {}, {}, {}};
    const std::size_t out = trace[i].shape[0];
    switch (l.kind) {
      case LayerKind::conv:
        layer.conv.emplace(channels, out, *l.kernel, tensor::Conv1dOptions{*l.stride, *l.padding},
                           l.batch_norm);
        if (l.init == Init::gammatone) {
          const auto bank = gammatone_filterbank(out, *l.kernel, kGammatoneSampleRate);
          std::copy(bank.data().begin(), bank.data().end(), layer.conv->weight.data().begin());
        } else {
          init_conv(*layer.conv, rng);
        }
        break;
      case LayerKind::residual_block:
        layer.block.emplace(channels, out);
        init_conv(layer.block->conv1, rng);
        init_conv(layer.block->conv2, rng);
        if (layer.block->shortcut) init_conv(*layer.block->shortcut, rng);
        break;
      case LayerKind::dense:
      case LayerKind::output:
        layer.weight = BasicTensor<T>({out, features});
        layer.bias = BasicTensor<T>({out});
        layer.weight.set_requires_grad(true);
        layer.bias.set_requires_grad(true);
        tensor::kaiming_uniform(layer.weight, features, rng);
        break;
      default:
        break;
    }
    if (trace[i].shape.size() == 2) channels = trace[i].shape[0];
    else features = trace[i].shape[0];
    layers_.push_back(std::move(layer));
  }
}

template <typename T>
Var<T> Network<T>::forward_layer(Tape<T>& tape, Var<T> x, Layer& layer, Mode mode,
                                 std::mt19937_64& rng) {
  const LayerSpec& l = layer.spec;
  switch (l.kind) {
    case LayerKind::conv:
      return activate(tape, apply(tape, x, *layer.conv, bind(tape, *layer.conv), mode),
                      l.activation);
    case LayerKind::residual_block:
      return residual_block_forward(tape, x, *layer.block, mode);
    case LayerKind::maxpool:
      return tensor::maxpool1d(tape, x, *l.pool, *l.stride);
    case LayerKind::avgpool:
      return tensor::avgpool1d(tape, x, *l.pool, *l.stride);
    case LayerKind::flatten:
      return tensor::flatten(tape, x);
    case LayerKind::dropout:
      return tensor::dropout(tape, x, *l.rate, mode, rng);
    case LayerKind::dense:
      return activate(tape,
                      tensor::dense(tape, x, tape.parameter(layer.weight),
                                    tape.parameter(layer.bias)),
                      l.activation);
    case LayerKind::output:
      // Logits; softmax belongs to the loss or the caller.
      return tensor::dense(tape, x, tape.parameter(layer.weight), tape.parameter(layer.bias));
  }
  return x;
}

template <typename T>
Var<T> Network<T>::forward(Tape<T>& tape, Var<T> x, Mode mode, std::mt19937_64& rng) {
  const auto& shape = tape.shape(x);
  if (shape.size() != 3 || shape[1] != 1 || shape[2] != spec_.input_length) {
    throw ShapeError(spec_.name + " expects N x 1 x " + std::to_string(spec_.input_length) +
                     " input, got " + tensor::to_string(shape));
  }
  for (Layer& layer : layers_) x = forward_layer(tape, x, layer, mode, rng);
  return x;
}

template <typename T>
BasicTensor<T> Network<T>::infer(const BasicTensor<T>& x) {
  if (x.rank() != 3 || x.dim(1) != 1 || x.dim(2) != spec_.input_length) {
    throw ShapeError(spec_.name + " expects N x 1 x " + std::to_string(spec_.input_length) +
                     " input, got " + tensor::to_string(x.shape()));
  }
  std::mt19937_64 unused(0);
  BasicTensor<T> current = x.reshaped(x.shape());
  for (Layer& layer : layers_) {
    Tape<T> tape;
    const Var<T> in = tape.input(std::move(current));
    const Var<T> out = forward_layer(tape, in, layer, Mode::inference, unused);
    current = tape.release(out);
  }
  return current;
}

template <typename T>
std::vector<NamedTensor<T>> Network<T>::tensors() {
  std::vector<NamedTensor<T>> out;
  auto add_conv = [&](const std::string& prefix, ConvBn<T>& c) {
    out.push_back({prefix + ".weight", &c.weight, true});
    out.push_back({prefix + ".bias", &c.bias, true});
    if (c.bn) {
      out.push_back({prefix + ".bn.gamma", &c.bn->gamma, true});
      out.push_back({prefix + ".bn.beta", &c.bn->beta, true});
      out.push_back({prefix + ".bn.running_mean", &c.bn->running_mean, false});
      out.push_back({prefix + ".bn.running_var", &c.bn->running_var, false});
    }
  };
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& layer = layers_[i];
    const std::string prefix = "layers." + std::to_string(i);
    if (layer.conv) add_conv(prefix, *layer.conv);
    if (layer.block) {
      add_conv(prefix + ".conv1", layer.block->conv1);
      add_conv(prefix + ".conv2", layer.block->conv2);
      if (layer.block->shortcut) add_conv(prefix + ".shortcut", *layer.block->shortcut);
    }
    if (!layer.weight.empty()) {
      out.push_back({prefix + ".weight", &layer.weight, true});
      out.push_back({prefix + ".bias", &layer.bias, true});
    }
  }
  return out;
}

template <typename T>
std::vector<BasicTensor<T>*> Network<T>::parameters() {
  std::vector<BasicTensor<T>*> out;
  for (const auto& t : tensors()) {
    if (t.trainable) out.push_back(t.tensor);
  }
  return out;
}

template <typename T>
std::size_t Network<T>::parameter_count() {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->size();
  return n;
}

template <typename T>
void Network<T>::copy_state_from(const Network& other) {
  if (other.spec_.name != spec_.name || other.layers_.size() != layers_.size()) {
    throw ValidationError("cannot copy " + other.spec_.name + " state into " + spec_.name);
  }
  auto mine = tensors();
  auto theirs = const_cast<Network&>(other).tensors();
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i].tensor->shape() != theirs[i].tensor->shape()) {
      throw ShapeError("state tensor " + mine[i].name + " shape mismatch");
    }
    std::copy(theirs[i].tensor->data().begin(), theirs[i].tensor->data().end(),
              mine[i].tensor->data().begin());
  }
}

#define WAVEGENRE_INSTANTIATE(T)                                                              \
  template struct ConvBn<T>;                                                                  \
  template struct ResidualBlock<T>;                                                           \
  template class Network<T>;                                                                  \
  template ConvBnVars<T> bind(Tape<T>&, ConvBn<T>&);                                          \
  template ResidualBlockVars<T> bind(Tape<T>&, ResidualBlock<T>&);                            \
  template Var<T> apply(Tape<T>&, Var<T>, ConvBn<T>&, const ConvBnVars<T>&, Mode);            \
  template Var<T> residual_block_forward(Tape<T>&, Var<T>, ResidualBlock<T>&,                 \
                                         const ResidualBlockVars<T>&, Mode);                  \
  template Var<T> residual_block_forward(Tape<T>&, Var<T>, ResidualBlock<T>&, Mode);

WAVEGENRE_INSTANTIATE(float)
WAVEGENRE_INSTANTIATE(double)

}  // namespace wavegenre::model
