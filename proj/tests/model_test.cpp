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

#include <fftw3.h>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gradcheck.hpp"
#include "reference_layouts.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/model/architecture.hpp"
#include "wavegenre/model/gammatone.hpp"
#include "wavegenre/model/network.hpp"
#include "wavegenre/tensor/optim.hpp"

namespace wavegenre::model {
namespace {

using tensor::Shape;
using tensor::Tensor;
using testing::check_gradients;
using testing::random_tensor;
using testing::random_weights;
using testing::weighted_sum;

TEST(ParameterCount, ExactForFourArchitectures) {
  EXPECT_EQ(count_parameters(build_architecture("resnet1d")), 4'086'794u);
  EXPECT_EQ(count_parameters(build_architecture("pons_scale")), 373'898u);
  EXPECT_EQ(count_parameters(build_architecture("dieleman")), 53'495u);
  EXPECT_EQ(count_parameters(build_architecture("abdoli_esc")), 1'223'082u);
}

TEST(ParameterCount, WithinToleranceOfPublishedCount) {
  for (const auto& name : architecture_names()) {
    const auto published = published_parameter_count(name);
    const double counted = static_cast<double>(count_parameters(build_architecture(name)));
    const double rel = std::abs(counted - published.parameters) / published.parameters;
    EXPECT_LE(rel, published.tolerance) << name;
  }
  EXPECT_EQ(count_parameters(build_architecture("sample_cnn")), 1'849'354u);
  EXPECT_EQ(count_parameters(build_architecture("koerich")), 1'723'962u);
}

TEST(ParameterCount, FrozenGammatoneLayer) {
  const auto spec = build_architecture("koerich");
  EXPECT_EQ(count_parameters(spec, {.include_gammatone = false}), 1'707'546u);
  EXPECT_EQ(count_parameters(build_architecture("dieleman"), {.include_gammatone = false}),
            53'495u);
}

TEST(ParameterCount, NetworkTensorsAgreeWithCounter) {
  for (const auto& name : {"dieleman", "pons_scale", "koerich"}) {
    Network<float> net(build_architecture(name), 1);
    EXPECT_EQ(net.parameter_count(), count_parameters(net.spec())) << name;
  }
}

TEST(Architecture, UnknownNameIsValidationError) {
  EXPECT_THROW(build_architecture("vgg"), ValidationError);
  EXPECT_THROW(published_parameter_count("vgg"), ValidationError);
}

TEST(Architecture, Shapes) {
  const auto resnet = build_architecture("resnet1d");
  const auto& first = resnet.layers.front();
  EXPECT_EQ(first.kind, LayerKind::conv);
  EXPECT_EQ(*first.filters, 128u);
  EXPECT_EQ(*first.kernel, 3u);
  EXPECT_EQ(*first.stride, 3u);
  int blocks = 0;
  for (const auto& l : resnet.layers) blocks += l.kind == LayerKind::residual_block;
  EXPECT_EQ(blocks, 9);
  const auto& last_conv = resnet.layers[resnet.layers.size() - 3];
  EXPECT_EQ(*last_conv.filters, 512u);
  EXPECT_EQ(*last_conv.kernel, 1u);

  const auto d = build_architecture("dieleman").layers.front();
  EXPECT_EQ(*d.filters, 1u);
  EXPECT_EQ(*d.kernel, 256u);
  EXPECT_EQ(*d.stride, 256u);

  const auto a = build_architecture("abdoli_esc").layers.front();
  EXPECT_EQ(*a.filters, 64u);
  EXPECT_EQ(*a.kernel, 512u);
  EXPECT_EQ(a.init, Init::gammatone);
}

TEST(Architecture, EveryOutputIsTenWay) {
  for (const auto& name : architecture_names()) {
    const auto trace = shape_trace(build_architecture(name));
    EXPECT_EQ(trace.back().shape, Shape{10}) << name;
    EXPECT_EQ(trace.back().kind, LayerKind::output);
  }
}

TEST(Architecture, ValidationRejectsMisplacedFields) {
  auto spec = build_architecture("dieleman");
  spec.layers[0].kernel.reset();
  EXPECT_THROW(validate(spec), ValidationError);
  spec = build_architecture("dieleman");
  spec.layers[3].units = 5;
  EXPECT_THROW(validate(spec), ValidationError);
  spec = build_architecture("dieleman");
  spec.layers.pop_back();
  EXPECT_THROW(validate(spec), ValidationError);
  spec = build_architecture("koerich");
  spec.layers[10].rate = 1.0;
  EXPECT_THROW(validate(spec), ValidationError);
}

TEST(ShapeTrace, MatchesReferenceLayouts) {
  for (const auto& name : architecture_names()) {
    const auto cmp = testing::compare_layout(build_architecture(name));
    ASSERT_FALSE(cmp.rows.empty()) << name;
    int flagged = 0;
    for (const auto& r : cmp.rows) {
      EXPECT_NE(r.status, testing::RowStatus::mismatch)
          << name << " " << r.row.layer << " expected " << tensor::to_string(r.row.shape)
          << " traced " << tensor::to_string(r.traced);
      flagged += r.status == testing::RowStatus::flagged;
    }
    if (name == "sample_cnn") {
      EXPECT_EQ(flagged, 4);
      EXPECT_EQ(cmp.unreferenced, (std::vector<std::size_t>{13, 14}));
    } else {
      EXPECT_EQ(flagged, 0) << name;
      EXPECT_TRUE(cmp.unreferenced.empty()) << name;
    }
  }
}

bool contains(const std::vector<TraceEntry>& trace, const Shape& shape) {
  for (const auto& e : trace) {
    if (e.shape == shape) return true;
  }
  return false;
}

TEST(ShapeTrace, Examples) {
  EXPECT_TRUE(contains(shape_trace(build_architecture("resnet1d")), Shape{256, 453}));
  EXPECT_TRUE(contains(shape_trace(build_architecture("koerich")), Shape{16, 6731}));
  std::vector<std::size_t> lengths;
  for (const auto& e : shape_trace(build_architecture("dieleman"))) {
    if (e.kind != LayerKind::flatten) lengths.push_back(e.shape.back());
  }
  EXPECT_EQ(lengths, (std::vector<std::size_t>{430, 212, 205, 51, 44, 11, 100, 10}));
}

TEST(ShapeTrace, GeometryErrorCarriesLayerIndex) {
  auto spec = build_architecture("abdoli_esc");
  spec.input_length = 600;  // 89 -> 11 -> 6 -> pool 8 leaves nothing
  try {
    shape_trace(spec);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.layer_index(), 3);
  }
  spec = build_architecture("dieleman");
  spec.input_length = 100;
  try {
    shape_trace(spec);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.layer_index(), 0);
  }
}

TEST(ResidualBlock, ZeroBranchIsLeakyReluOfInput) {
  ResidualBlock<float> block(3, 3);
  EXPECT_FALSE(block.has_projection());
  std::mt19937_64 rng(5);
  const Tensor x = random_tensor<float>({2, 3, 11}, rng, -2, 2);
  Tape<float> tape;
  auto y = residual_block_forward(tape, tape.input(x), block, Mode::inference);
  const auto& out = tape.value(y);
  ASSERT_EQ(out.shape(), x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float expect = x[i] > 0 ? x[i] : 0.01f * x[i];
    EXPECT_NEAR(out[i], expect, 1e-5f * (1 + std::abs(expect)));
  }
}

TEST(ResidualBlock, ProjectionWidensChannelsAndKeepsLength) {
  ResidualBlock<float> block(128, 256);
  EXPECT_TRUE(block.has_projection());
  std::mt19937_64 rng(6);
  tensor::kaiming_uniform(block.conv1.weight, 128 * 3, rng);
  Tape<float> tape;
  auto y = residual_block_forward(tape, tape.input(Tensor({1, 128, 4083}, 0.5f)), block,
                                  Mode::training);
  EXPECT_EQ(tape.shape(y), (Shape{1, 256, 4083}));
}

TEST(ResidualBlock, PreservesLengthForShortInputs) {
  std::mt19937_64 rng(7);
  for (std::size_t len = 3; len <= 12; ++len) {
    ResidualBlock<float> block(2, 4);
    Tape<float> tape;
    auto y = residual_block_forward(tape, tape.input(random_tensor<float>({2, 2, len}, rng)),
                                    block, Mode::training);
    EXPECT_EQ(tape.shape(y), (Shape{2, 4, len}));
  }
}

TEST(ResidualBlock, ChannelMismatchIsShapeError) {
  ResidualBlock<float> block(4, 4);
  Tape<float> tape;
  EXPECT_THROW(residual_block_forward(tape, tape.input(Tensor({1, 3, 8})), block,
                                      Mode::inference),
               ShapeError);
}

template <typename T>
class ResidualGradCheck : public ::testing::Test {};
using Scalars = ::testing::Types<float, double>;
TYPED_TEST_SUITE(ResidualGradCheck, Scalars);

template <typename TapeT>
using ScalarOf = typename std::remove_reference_t<TapeT>::scalar_type;

TYPED_TEST(ResidualGradCheck, WholeBlock) {
  using T = TypeParam;
  const double step = std::is_same_v<T, float> ? 1e-3 : 1e-6;
  const double tol = std::is_same_v<T, float> ? 1e-3 : 1e-5;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t cin = 4, cout = trial % 2 ? 6 : 4;
    ResidualBlock<T> src(cin, cout);
    std::vector<BasicTensor<T>> owned;
    owned.push_back(random_tensor<T>({2, cin, 16}, rng));
    auto add_conv = [&](ConvBn<T>& c) {
      owned.push_back(random_tensor<T>(c.weight.shape(), rng, -0.6, 0.6));
      owned.push_back(random_tensor<T>(c.bias.shape(), rng, -0.1, 0.1));
      owned.push_back(random_tensor<T>(c.bn->gamma.shape(), rng, 0.5, 1.5));
      owned.push_back(random_tensor<T>(c.bn->beta.shape(), rng, -0.5, 0.5));
    };
    add_conv(src.conv1);
    add_conv(src.conv2);
    if (src.shortcut) add_conv(*src.shortcut);
    std::vector<BasicTensor<T>*> params;
    for (auto& p : owned) params.push_back(&p);
    const auto probe = random_weights(2 * cout * 16, rng);
    const auto r = check_gradients<T>(
        params,
        [&](auto& t, auto& v) {
          using U = ScalarOf<decltype(t)>;
          ResidualBlock<U> block(cin, cout);
          ResidualBlockVars<U> vars{{v[1], v[2], v[3], v[4]}, {v[5], v[6], v[7], v[8]}, {}};
          if (block.shortcut) vars.shortcut = ConvBnVars<U>{v[9], v[10], v[11], v[12]};
          return weighted_sum(t, residual_block_forward(t, v[0], block, vars, Mode::training),
                              probe);
        },
        step);
    EXPECT_EQ(r.checked, [&] {
      std::size_t n = 0;
      for (auto* p : params) n += p->size();
      return n;
    }());
    EXPECT_LT(r.relative_error, tol) << "trial " << trial;
  }
}

TEST(Gammatone, UnitPeakAndMonotoneCenters) {
  const auto bank = gammatone_filterbank(64, 512, 22050);
  ASSERT_EQ(bank.shape(), (Shape{64, 1, 512}));
  for (std::size_t i = 0; i < 64; ++i) {
    double peak = 0;
    for (std::size_t n = 0; n < 512; ++n) peak = std::max(peak, std::abs(bank[i * 512 + n]));
    EXPECT_DOUBLE_EQ(peak, 1.0);
  }
  const auto f = gammatone_center_frequencies(64, 22050);
  EXPECT_NEAR(f.front(), 50.0, 1e-9);
  EXPECT_NEAR(f.back(), 22050 / 2.0 - 100, 1e-6);
  for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LT(f[i - 1], f[i]);
}

TEST(Gammatone, SpectrumPeaksAtCenterFrequency) {
  constexpr std::size_t n = 512;
  constexpr double sr = 22050;
  const auto bank = gammatone_filterbank(32, n, sr);
  const auto centers = gammatone_center_frequencies(32, sr);
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  for (std::size_t i = 0; i < 32; ++i) {
    std::copy_n(bank.ptr() + i * n, n, in.begin());
    fftw_execute(plan);
    std::size_t best = 0;
    for (std::size_t k = 1; k < out.size(); ++k) {
      if (std::abs(out[k]) > std::abs(out[best])) best = k;
    }
    const double bin = sr / n;
    if (centers[i] + erb_bandwidth(centers[i]) < sr / 2) {
      EXPECT_LE(std::abs(best * bin - centers[i]), bin) << "filter " << i;
    } else {
      // Passband reaches Nyquist; the folded image pulls the peak upward.
      EXPECT_GE(best * bin, centers[i] - bin) << "filter " << i;
    }
  }
  fftw_destroy_plan(plan);
}

TEST(Gammatone, DeterministicAndValidated) {
  const auto a = gammatone_filterbank(8, 64, 16000);
  const auto b = gammatone_filterbank(8, 64, 16000);
  EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  EXPECT_THROW(gammatone_filterbank(0, 64, 16000), ValidationError);
  EXPECT_THROW(gammatone_filterbank(4, 1, 16000), ValidationError);
  EXPECT_NO_THROW(gammatone_filterbank(1, 2, 16000));
}

TEST(Network, GammatoneLayerStartsFromFilterBank) {
  Network<float> net(build_architecture("koerich"), 3);
  const auto bank = gammatone_filterbank(32, 512, kGammatoneSampleRate);
  const auto tensors = net.tensors();
  ASSERT_EQ(tensors.front().name, "layers.0.weight");
  const auto& w = *tensors.front().tensor;
  for (std::size_t i = 0; i < w.size(); ++i) ASSERT_EQ(w[i], static_cast<float>(bank[i]));
  EXPECT_TRUE(w.requires_grad());
}

TEST(Network, InitializationIsDeterministicInSeed) {
  Network<float> a(build_architecture("pons_scale"), 11), b(build_architecture("pons_scale"), 11),
      c(build_architecture("pons_scale"), 12);
  const auto ta = a.tensors(), tb = b.tensors(), tc = c.tensors();
  ASSERT_EQ(ta.size(), tb.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    EXPECT_EQ(ta[i].name, tb[i].name);
    EXPECT_TRUE(std::equal(ta[i].tensor->data().begin(), ta[i].tensor->data().end(),
                           tb[i].tensor->data().begin()));
    any_diff = any_diff || !std::equal(ta[i].tensor->data().begin(),
                                       ta[i].tensor->data().end(), tc[i].tensor->data().begin());
  }
  EXPECT_TRUE(any_diff);
}

TEST(Network, CopyStateReproducesInference) {
  std::mt19937_64 rng(4);
  const Tensor x = random_tensor<float>({2, 1, kSegmentLength}, rng, -0.5, 0.5);
  Network<float> a(build_architecture("dieleman"), 1), b(build_architecture("dieleman"), 2);
  b.copy_state_from(a);
  const auto ya = a.infer(x), yb = b.infer(x);
  EXPECT_TRUE(std::equal(ya.data().begin(), ya.data().end(), yb.data().begin()));
  Network<float> other(build_architecture("pons_scale"), 1);
  EXPECT_THROW(other.copy_state_from(a), ValidationError);
}

TEST(Network, WrongInputShapeIsShapeError) {
  Network<float> net(build_architecture("dieleman"), 1);
  EXPECT_THROW(net.infer(Tensor({1, 1, 1000})), ShapeError);
}

// Every architecture on two random segments: finite logits in both modes,
// softmax rows summing to one, and the layer-streaming inference path
// agreeing with a single-tape inference pass.
TEST(Network, AllArchitecturesForwardFinite) {
  std::mt19937_64 rng(21);
  const Tensor x = random_tensor<float>({2, 1, kSegmentLength}, rng, -0.5, 0.5);
  for (const auto& name : architecture_names()) {
    Network<float> net(build_architecture(name), 8);
    for (Mode mode : {Mode::training, Mode::inference}) {
      Tape<float> tape;
      auto logits = net.forward(tape, tape.input(x), mode, rng);
      const auto& v = tape.value(logits);
      ASSERT_EQ(v.shape(), (Shape{2, 10})) << name;
      EXPECT_TRUE(tensor::all_finite(v.data())) << name;
      const auto p = tensor::softmax_rows<float>(v.data(), 10);
      for (int r = 0; r < 2; ++r) {
        double s = 0;
        for (int k = 0; k < 10; ++k) s += p[r * 10 + k];
        EXPECT_NEAR(s, 1.0, 1e-5) << name;
      }
      if (mode == Mode::inference) {
        const auto streamed = net.infer(x);
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_FLOAT_EQ(streamed[i], v[i]) << name;
      }
    }
  }
}

}  // namespace
}  // namespace wavegenre::model
