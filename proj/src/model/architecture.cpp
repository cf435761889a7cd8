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

#include "wavegenre/model/architecture.hpp"

#include <string>

#include "wavegenre/errors.hpp"

namespace wavegenre::model {

using tensor::Padding;

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::conv: return "conv";
    case LayerKind::residual_block: return "residual_block";
    case LayerKind::maxpool: return "maxpool";
    case LayerKind::avgpool: return "avgpool";
    case LayerKind::dense: return "dense";
    case LayerKind::dropout: return "dropout";
    case LayerKind::flatten: return "flatten";
    case LayerKind::output: return "output";
  }
  return "?";
}

std::string_view to_string(Activation activation) {
  switch (activation) {
    case Activation::none: return "none";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  return "?";
}

LayerSpec LayerSpec::conv(std::size_t filters, std::size_t kernel, std::size_t stride,
                          Padding padding, Activation activation, bool batch_norm, Init init) {
  LayerSpec s;
  s.kind = LayerKind::conv;
  s.filters = filters;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  s.activation = activation;
  s.batch_norm = batch_norm;
  s.init = init;
  return s;
}

LayerSpec LayerSpec::residual(std::size_t filters) {
  LayerSpec s;
  s.kind = LayerKind::residual_block;
  s.filters = filters;
  s.kernel = 3;
  s.stride = 1;
  s.padding = Padding::same;
  s.activation = Activation::leaky_relu;
  s.batch_norm = true;
  return s;
}

LayerSpec LayerSpec::max_pool(std::size_t pool, std::size_t stride) {
  LayerSpec s;
  s.kind = LayerKind::maxpool;
  s.pool = pool;
  s.stride = stride;
  return s;
}

LayerSpec LayerSpec::avg_pool(std::size_t pool, std::size_t stride) {
  LayerSpec s = max_pool(pool, stride);
  s.kind = LayerKind::avgpool;
  return s;
}

LayerSpec LayerSpec::dense(std::size_t units, Activation activation) {
  LayerSpec s;
  s.kind = LayerKind::dense;
  s.units = units;
  s.activation = activation;
  return s;
}

LayerSpec LayerSpec::dropout(double rate) {
  LayerSpec s;
  s.kind = LayerKind::dropout;
  s.rate = rate;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::flatten;
  return s;
}

LayerSpec LayerSpec::output(std::size_t units) {
  LayerSpec s;
  s.kind = LayerKind::output;
  s.units = units;
  s.activation = Activation::softmax;
  return s;
}

namespace {

using L = LayerSpec;
constexpr auto relu = Activation::relu;
constexpr auto leaky = Activation::leaky_relu;

ArchitectureSpec resnet1d() {
  ArchitectureSpec a{"resnet1d", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(128, 3, 3, Padding::same, leaky, true));
  for (std::size_t filters : {128, 128, 256, 256, 256, 256, 256, 256, 512}) {
    a.layers.push_back(L::residual(filters));
    a.layers.push_back(L::max_pool(3, 3));
  }
  a.layers.push_back(L::conv(512, 1, 1, Padding::same, leaky, true));
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

ArchitectureSpec sample_cnn() {
  ArchitectureSpec a{"sample_cnn", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(128, 3, 3, Padding::same, relu, true));
  for (std::size_t filters : {128, 128, 256, 256, 256, 256, 256, 256, 512}) {
    a.layers.push_back(L::conv(filters, 3, 1, Padding::same, relu, true));
    a.layers.push_back(L::max_pool(3, 3));
  }
  a.layers.push_back(L::conv(512, 1, 1, Padding::same, relu, true));
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::dropout(0.5));
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

ArchitectureSpec pons_scale() {
  ArchitectureSpec a{"pons_scale", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(64, 3, 3, Padding::valid, relu, true));
  a.layers.push_back(L::conv(64, 3, 1, Padding::valid, relu, true));
  a.layers.push_back(L::max_pool(3, 3));
  for (std::size_t filters : {64, 128, 128, 128, 256}) {
    a.layers.push_back(L::conv(filters, 3, 1, Padding::valid, relu, true));
    a.layers.push_back(L::max_pool(3, 3));
  }
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

ArchitectureSpec dieleman() {
  ArchitectureSpec a{"dieleman", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(1, 256, 256, Padding::valid, relu, false));
  a.layers.push_back(L::conv(32, 8, 2, Padding::valid, relu, true));
  a.layers.push_back(L::conv(32, 8, 1, Padding::valid, relu, true));
  a.layers.push_back(L::max_pool(4, 4));
  a.layers.push_back(L::conv(32, 8, 1, Padding::valid, relu, true));
  a.layers.push_back(L::max_pool(4, 4));
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::dense(100, relu));
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

ArchitectureSpec abdoli_esc() {
  ArchitectureSpec a{"abdoli_esc", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(64, 512, 1, Padding::valid, relu, true, Init::gammatone));
  a.layers.push_back(L::max_pool(8, 8));
  a.layers.push_back(L::conv(32, 32, 2, Padding::same, relu, true));
  a.layers.push_back(L::max_pool(8, 8));
  a.layers.push_back(L::conv(64, 16, 2, Padding::same, relu, true));
  a.layers.push_back(L::conv(128, 8, 2, Padding::same, relu, true));
  a.layers.push_back(L::conv(256, 4, 2, Padding::same, relu, true));
  a.layers.push_back(L::max_pool(4, 4));
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::dense(128, relu));
  a.layers.push_back(L::dense(64, relu));
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

ArchitectureSpec koerich() {
  ArchitectureSpec a{"koerich", kSegmentLength, {}, kNumClasses};
  a.layers.push_back(L::conv(32, 512, 1, Padding::valid, leaky, true, Init::gammatone));
  a.layers.push_back(L::avg_pool(8, 8));
  a.layers.push_back(L::conv(16, 256, 2, Padding::valid, leaky, true));
  a.layers.push_back(L::avg_pool(8, 8));
  a.layers.push_back(L::conv(32, 64, 2, Padding::valid, leaky, true));
  a.layers.push_back(L::conv(64, 32, 2, Padding::valid, leaky, true));
  a.layers.push_back(L::conv(128, 16, 2, Padding::valid, leaky, true));
  a.layers.push_back(L::max_pool(2, 2));
  a.layers.push_back(L::flatten());
  a.layers.push_back(L::dense(256, relu));
  a.layers.push_back(L::dropout(0.4));
  a.layers.push_back(L::output(kNumClasses));
  return a;
}

std::string where(const ArchitectureSpec& spec, std::size_t i) {
  return spec.name + " layer " + std::to_string(i) + " (" +
         std::string(to_string(spec.layers[i].kind)) + ")";
}

void require(bool ok, const ArchitectureSpec& spec, std::size_t i, const char* what) {
  if (!ok) throw ValidationError(where(spec, i) + ": " + what);
}

std::string label(const LayerSpec& l) {
  switch (l.kind) {
    case LayerKind::conv:
      return "conv k" + std::to_string(*l.kernel) + " s" + std::to_string(*l.stride);
    case LayerKind::residual_block: return "residual block";
    case LayerKind::maxpool: return "max-pool " + std::to_string(*l.pool);
    case LayerKind::avgpool: return "avg-pool " + std::to_string(*l.pool);
    case LayerKind::dense: return "dense";
    case LayerKind::dropout: return "dropout";
    case LayerKind::flatten: return "flatten";
    case LayerKind::output: return "output";
  }
  return "?";
}

}  // namespace

const std::vector<std::string>& architecture_names() {
  static const std::vector<std::string> names{"resnet1d",  "sample_cnn", "pons_scale",
                                              "dieleman",  "abdoli_esc", "koerich"};
  return names;
}

ArchitectureSpec build_architecture(std::string_view name) {
  ArchitectureSpec spec;
  if (name == "resnet1d") spec = resnet1d();
  else if (name == "sample_cnn") spec = sample_cnn();
  else if (name == "pons_scale") spec = pons_scale();
  else if (name == "dieleman") spec = dieleman();
  else if (name == "abdoli_esc") spec = abdoli_esc();
  else if (name == "koerich") spec = koerich();
  else {
    std::string known;
    for (const auto& n : architecture_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown architecture '" + std::string(name) + "' (known: " + known +
                          ")");
  }
  validate(spec);
  return spec;
}

PublishedCount published_parameter_count(std::string_view name) {
  if (name == "resnet1d") return {4'086'794, 0};
  if (name == "sample_cnn") return {1'848'842, 0.001};
  if (name == "pons_scale") return {373'898, 0};
  if (name == "dieleman") return {53'495, 0};
  if (name == "abdoli_esc") return {1'223'082, 0};
  if (name == "koerich") return {1'707'506, 0.01};
  throw ValidationError("unknown architecture '" + std::string(name) + "'");
}

void validate(const ArchitectureSpec& spec) {
  if (spec.layers.empty()) throw ValidationError(spec.name + ": no layers");
  if (spec.input_length == 0) throw ValidationError(spec.name + ": zero input length");
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    const bool conv_like = l.kind == LayerKind::conv || l.kind == LayerKind::residual_block;
    const bool pool = l.kind == LayerKind::maxpool || l.kind == LayerKind::avgpool;
    const bool vector = l.kind == LayerKind::dense || l.kind == LayerKind::output;
    require(conv_like == l.filters.has_value(), spec, i, "filters must be set exactly for conv layers");
    require(conv_like == l.kernel.has_value(), spec, i, "kernel must be set exactly for conv layers");
    require(conv_like == l.padding.has_value(), spec, i, "padding must be set exactly for conv layers");
    require((conv_like || pool) == l.stride.has_value(), spec, i,
            "stride must be set exactly for conv and pooling layers");
    require(pool == l.pool.has_value(), spec, i, "pool size must be set exactly for pooling layers");
    require(vector == l.units.has_value(), spec, i, "units must be set exactly for dense layers");
    require((l.kind == LayerKind::dropout) == l.rate.has_value(), spec, i,
            "rate must be set exactly for dropout layers");
    if (conv_like) {
      require(*l.filters > 0 && *l.kernel > 0 && *l.stride > 0, spec, i,
              "filters, kernel and stride must be positive");
    }
    if (pool) require(*l.pool > 0 && *l.stride > 0, spec, i, "pool and stride must be positive");
    if (vector) require(*l.units > 0, spec, i, "units must be positive");
    if (l.rate) require(*l.rate >= 0 && *l.rate < 1, spec, i, "dropout rate must be in [0, 1)");
    if (l.batch_norm) require(conv_like, spec, i, "batch norm applies to conv layers only");
    if (l.init == Init::gammatone) require(l.kind == LayerKind::conv, spec, i,
                                           "gammatone init applies to conv layers only");
    if (l.kind == LayerKind::output) {
      require(i + 1 == spec.layers.size(), spec, i, "output must be the last layer");
      require(*l.units == spec.num_classes, spec, i, "output units must equal num_classes");
    }
  }
  require(spec.layers.back().kind == LayerKind::output, spec, spec.layers.size() - 1,
          "the last layer must be the output layer");
}

std::vector<TraceEntry> shape_trace(const ArchitectureSpec& spec) {
  validate(spec);
  std::vector<TraceEntry> trace;
  tensor::Shape shape{1, spec.input_length};
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    const bool feature_map = shape.size() == 2;
    try {
      switch (l.kind) {
        case LayerKind::conv:
        case LayerKind::residual_block:
          require(feature_map, spec, i, "expects a C x L feature map");
          if (l.init == Init::gammatone) {
            require(shape[0] == 1, spec, i, "gammatone init needs a single input channel");
          }
          shape = {*l.filters, tensor::conv_output_length(shape[1], *l.kernel, *l.stride,
                                                          *l.padding)};
          break;
        case LayerKind::maxpool:
        case LayerKind::avgpool:
          require(feature_map, spec, i, "expects a C x L feature map");
          shape = {shape[0], tensor::pool_output_length(shape[1], *l.pool, *l.stride)};
          break;
        case LayerKind::flatten:
          require(feature_map, spec, i, "expects a C x L feature map");
          shape = {shape[0] * shape[1]};
          break;
        case LayerKind::dense:
        case LayerKind::output:
          require(!feature_map, spec, i, "expects a flattened vector");
          shape = {*l.units};
          break;
        case LayerKind::dropout:
          break;
      }
    } catch (const GeometryError& e) {
      throw GeometryError(where(spec, i) + ": " + e.what(), i);
    }
    if (shape.back() == 0) {
      throw GeometryError(where(spec, i) + ": output length is zero", i);
    }
    trace.push_back({i, l.kind, label(l), shape});
  }
  return trace;
}

std::size_t count_parameters(const ArchitectureSpec& spec, ParameterCountOptions options) {
  const auto trace = shape_trace(spec);
  std::size_t total = 0;
  std::size_t channels = 1;
  std::size_t features = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    const std::size_t out = trace[i].shape[0];
    switch (l.kind) {
      case LayerKind::conv: {
        const std::size_t weights = out * channels * *l.kernel + out;
        if (l.init != Init::gammatone || options.include_gammatone) total += weights;
        if (l.batch_norm) total += 2 * out;
        break;
      }
      case LayerKind::residual_block:
        total += out * channels * 3 + out + 2 * out;
        total += out * out * 3 + out + 2 * out;
        if (channels != out) total += out * channels + out + 2 * out;
        break;
      case LayerKind::dense:
      case LayerKind::output:
        total += out * features + out;
        break;
      default:
        break;
    }
    if (trace[i].shape.size() == 2) channels = trace[i].shape[0];
    else features = trace[i].shape[0];
  }
  return total;
}

}  // namespace wavegenre::model
