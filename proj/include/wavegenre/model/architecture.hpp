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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavegenre/tensor/ops.hpp"

namespace wavegenre::model {

inline constexpr std::size_t kSegmentLength = 110'250;
inline constexpr std::size_t kNumClasses = 10;
inline constexpr double kLeakySlope = 0.01;

enum class LayerKind { conv, residual_block, maxpool, avgpool, dense, dropout, flatten, output };
enum class Activation { none, relu, leaky_relu, sigmoid, softmax };
enum class Init { standard, gammatone };

std::string_view to_string(LayerKind kind);
std::string_view to_string(Activation activation);

/// One row of an architecture table. Only the fields meaningful for `kind`
/// are set.
struct LayerSpec {
  LayerKind kind = LayerKind::conv;
  std::optional<std::size_t> filters;  // conv, residual_block
  std::optional<std::size_t> kernel;   // conv
  std::optional<std::size_t> pool;     // maxpool, avgpool
  std::optional<std::size_t> stride;   // conv, maxpool, avgpool
  std::optional<tensor::Padding> padding;
  std::optional<std::size_t> units;  // dense, output
  std::optional<double> rate;        // dropout
  Activation activation = Activation::none;
  bool batch_norm = false;
  Init init = Init::standard;

  static LayerSpec conv(std::size_t filters, std::size_t kernel, std::size_t stride,
                        tensor::Padding padding, Activation activation, bool batch_norm,
                        Init init = Init::standard);
  static LayerSpec residual(std::size_t filters);
  static LayerSpec max_pool(std::size_t pool, std::size_t stride);
  static LayerSpec avg_pool(std::size_t pool, std::size_t stride);
  static LayerSpec dense(std::size_t units, Activation activation);
  static LayerSpec dropout(double rate);
  static LayerSpec flatten();
  static LayerSpec output(std::size_t units);
};

/// A full network description: input_length raw samples in, num_classes
/// logits out.
struct ArchitectureSpec {
  std::string name;
  std::size_t input_length = kSegmentLength;
  std::vector<LayerSpec> layers;
  std::size_t num_classes = kNumClasses;
};

/// Stable identifiers accepted by build_architecture and the CLI.
const std::vector<std::string>& architecture_names();

/// Throws ValidationError for an unknown name.
ArchitectureSpec build_architecture(std::string_view name);

/// Kind-appropriate fields present, others absent. Throws ValidationError.
void validate(const ArchitectureSpec& spec);

/// Output shape after each layer, per sample (C x L for feature maps, D for
/// vectors).
struct TraceEntry {
  std::size_t index = 0;
  LayerKind kind = LayerKind::conv;
  std::string label;
  tensor::Shape shape;
};

/// Throws GeometryError carrying the offending layer index.
std::vector<TraceEntry> shape_trace(const ArchitectureSpec& spec);

struct ParameterCountOptions {
  /// Gammatone-initialized layers stay trainable; clear this to count them
  /// as frozen.
  bool include_gammatone = true;
};

/// Weights + biases + 2 per batch-norm channel.
std::size_t count_parameters(const ArchitectureSpec& spec, ParameterCountOptions options = {});

/// Count published with the reference layout, and the relative deviation
/// accepted from it (0 for exact).
struct PublishedCount {
  std::size_t parameters = 0;
  double tolerance = 0;
};

/// Throws ValidationError for an unknown name.
PublishedCount published_parameter_count(std::string_view name);

}  // namespace wavegenre::model
