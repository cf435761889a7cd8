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

#include <algorithm>
#include <string>
#include <vector>

#include "gemm.hpp"
#include "wavegenre/tensor/ops.hpp"

namespace wavegenre::tensor {

std::size_t conv_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                               Padding padding) {
  if (stride == 0) throw ValidationError("convolution stride must be >= 1");
  if (kernel == 0) throw ValidationError("convolution kernel must be >= 1");
  if (padding == Padding::same) {
    if (length == 0) throw GeometryError("same-padded convolution on an empty input");
    return (length + stride - 1) / stride;
  }
  if (kernel > length) {
    throw GeometryError("kernel " + std::to_string(kernel) + " longer than input " +
                        std::to_string(length));
  }
  return (length - kernel) / stride + 1;
}

std::size_t pool_output_length(std::size_t length, std::size_t pool, std::size_t stride) {
  if (pool == 0 || stride == 0) throw ValidationError("pool size and stride must be >= 1");
  if (pool > length) {
    throw GeometryError("pool window " + std::to_string(pool) + " longer than input " +
                        std::to_string(length));
  }
  return (length - pool) / stride + 1;
}

PadAmount same_padding(std::size_t length, std::size_t kernel, std::size_t stride) {
  const std::size_t out = conv_output_length(length, kernel, stride, Padding::same);
  const std::size_t needed = (out - 1) * stride + kernel;
  const std::size_t total = needed > length ? needed - length : 0;
  return {total / 2, total - total / 2};
}

namespace {

// Upper bound on im2col scratch elements per chunk.
constexpr std::size_t kColumnBudget = std::size_t{1} << 22;

struct ConvGeometry {
  std::size_t batch, in_channels, length, out_channels, kernel, stride, out_length;
  PadAmount pad;

  std::size_t padded_length() const { return length + pad.left + pad.right; }
  bool padded() const { return pad.left + pad.right > 0; }
  // Stride-1 layers with enough input channels run as K shifted GEMMs over
  // the padded input, which needs no column buffer.
  bool shifted() const { return stride == 1 && in_channels >= 4; }
  std::size_t chunk() const {
    const std::size_t rows = in_channels * kernel;
    return std::clamp<std::size_t>(kColumnBudget / rows, 1, out_length);
  }
};

template <typename T>
const T* padded_sample(const ConvGeometry& g, const T* x, std::vector<T>& scratch) {
  if (!g.padded()) return x;
  const std::size_t lp = g.padded_length();
  scratch.assign(g.in_channels * lp, T{0});
  for (std::size_t i = 0; i < g.in_channels; ++i) {
    std::copy_n(x + i * g.length, g.length, scratch.data() + i * lp + g.pad.left);
  }
  return scratch.data();
}

// wk[k][o][i] = w[o][i][k]
template <typename T>
std::vector<T> split_taps(const ConvGeometry& g, const T* w) {
  std::vector<T> wk(g.kernel * g.out_channels * g.in_channels);
  for (std::size_t o = 0; o < g.out_channels; ++o)
    for (std::size_t i = 0; i < g.in_channels; ++i)
      for (std::size_t k = 0; k < g.kernel; ++k)
        wk[(k * g.out_channels + o) * g.in_channels + i] =
            w[(o * g.in_channels + i) * g.kernel + k];
  return wk;
}

template <typename T>
void fill_columns(const ConvGeometry& g, const T* xp, std::size_t t0, std::size_t count, T* cols) {
  const std::size_t lp = g.padded_length();
  for (std::size_t i = 0; i < g.in_channels; ++i) {
    for (std::size_t k = 0; k < g.kernel; ++k) {
      T* row = cols + (i * g.kernel + k) * count;
      const T* src = xp + i * lp + t0 * g.stride + k;
      for (std::size_t j = 0; j < count; ++j) row[j] = src[j * g.stride];
    }
  }
}

template <typename T>
void conv_forward(const ConvGeometry& g, const T* x, const T* w, const T* b, T* y) {
  const int co = static_cast<int>(g.out_channels);
  const int ci = static_cast<int>(g.in_channels);
  const int lout = static_cast<int>(g.out_length);
  const int lp = static_cast<int>(g.padded_length());
  std::vector<T> scratch;
  std::vector<T> wk;
  std::vector<T> cols;
  if (g.shifted()) wk = split_taps(g, w);

  for (std::size_t n = 0; n < g.batch; ++n) {
    const T* xp = padded_sample(g, x + n * g.in_channels * g.length, scratch);
    T* yn = y + n * g.out_channels * g.out_length;
    for (std::size_t o = 0; o < g.out_channels; ++o) {
      std::fill_n(yn + o * g.out_length, g.out_length, b[o]);
    }
    if (g.shifted()) {
      for (std::size_t k = 0; k < g.kernel; ++k) {
        detail::gemm(false, false, co, lout, ci, T{1}, wk.data() + k * g.out_channels * g.in_channels,
                     ci, xp + k, lp, T{1}, yn, lout);
      }
      continue;
    }
    const std::size_t rows = g.in_channels * g.kernel;
    const std::size_t chunk = g.chunk();
    cols.resize(rows * chunk);
    for (std::size_t t0 = 0; t0 < g.out_length; t0 += chunk) {
      const std::size_t count = std::min(chunk, g.out_length - t0);
      fill_columns(g, xp, t0, count, cols.data());
      detail::gemm(false, false, co, static_cast<int>(count), static_cast<int>(rows), T{1}, w,
                   static_cast<int>(rows), cols.data(), static_cast<int>(count), T{1}, yn + t0,
                   lout);
    }
  }
}

template <typename T>
void conv_backward(const ConvGeometry& g, const T* x, const T* w, const T* dy, std::span<T> dx,
                   std::span<T> dw, std::span<T> db) {
  const int co = static_cast<int>(g.out_channels);
  const int ci = static_cast<int>(g.in_channels);
  const int lout = static_cast<int>(g.out_length);
  const std::size_t lp = g.padded_length();
  const bool want_dx = !dx.empty();
  const bool want_dw = !dw.empty();

  if (!db.empty()) {
    for (std::size_t n = 0; n < g.batch; ++n) {
      const T* dyn = dy + n * g.out_channels * g.out_length;
      for (std::size_t o = 0; o < g.out_channels; ++o) {
        T acc{0};
        const T* row = dyn + o * g.out_length;
        for (std::size_t t = 0; t < g.out_length; ++t) acc += row[t];
        db[o] += acc;
      }
    }
  }
  if (!want_dx && !want_dw) return;

  std::vector<T> scratch;
  std::vector<T> dxp;
  if (g.shifted()) {
    const std::vector<T> wk = split_taps(g, w);
    std::vector<T> dwk(want_dw ? wk.size() : 0, T{0});
    for (std::size_t n = 0; n < g.batch; ++n) {
      const T* dyn = dy + n * g.out_channels * g.out_length;
      const T* xp = padded_sample(g, x + n * g.in_channels * g.length, scratch);
      if (want_dw) {
        for (std::size_t k = 0; k < g.kernel; ++k) {
          detail::gemm(false, true, co, ci, lout, T{1}, dyn, lout, xp + k, static_cast<int>(lp),
                       T{1}, dwk.data() + k * g.out_channels * g.in_channels, ci);
        }
      }
      if (want_dx) {
        T* dxn = dx.data() + n * g.in_channels * g.length;
        T* target = dxn;
        if (g.padded()) {
          dxp.assign(g.in_channels * lp, T{0});
          target = dxp.data();
        }
        for (std::size_t k = 0; k < g.kernel; ++k) {
          detail::gemm(true, false, ci, lout, co, T{1},
                       wk.data() + k * g.out_channels * g.in_channels, ci, dyn, lout, T{1},
                       target + k, static_cast<int>(lp));
        }
        if (g.padded()) {
          for (std::size_t i = 0; i < g.in_channels; ++i) {
            const T* src = dxp.data() + i * lp + g.pad.left;
            T* dst = dxn + i * g.length;
            for (std::size_t t = 0; t < g.length; ++t) dst[t] += src[t];
          }
        }
      }
    }
    if (want_dw) {
      for (std::size_t o = 0; o < g.out_channels; ++o)
        for (std::size_t i = 0; i < g.in_channels; ++i)
          for (std::size_t k = 0; k < g.kernel; ++k)
            dw[(o * g.in_channels + i) * g.kernel + k] +=
                dwk[(k * g.out_channels + o) * g.in_channels + i];
    }
    return;
  }

  const std::size_t rows = g.in_channels * g.kernel;
  const std::size_t chunk = g.chunk();
  std::vector<T> cols(rows * chunk);
  std::vector<T> dcols(want_dx ? rows * chunk : 0);
  for (std::size_t n = 0; n < g.batch; ++n) {
    const T* dyn = dy + n * g.out_channels * g.out_length;
    const T* xp = padded_sample(g, x + n * g.in_channels * g.length, scratch);
    if (want_dx) dxp.assign(g.in_channels * lp, T{0});
    for (std::size_t t0 = 0; t0 < g.out_length; t0 += chunk) {
      const std::size_t count = std::min(chunk, g.out_length - t0);
      const int cnt = static_cast<int>(count);
      if (want_dw) {
        fill_columns(g, xp, t0, count, cols.data());
        detail::gemm(false, true, co, static_cast<int>(rows), cnt, T{1}, dyn + t0, lout,
                     cols.data(), cnt, T{1}, dw.data(), static_cast<int>(rows));
      }
      if (want_dx) {
        detail::gemm(true, false, static_cast<int>(rows), cnt, co, T{1}, w,
                     static_cast<int>(rows), dyn + t0, lout, T{0}, dcols.data(), cnt);
        for (std::size_t i = 0; i < g.in_channels; ++i) {
          for (std::size_t k = 0; k < g.kernel; ++k) {
            const T* row = dcols.data() + (i * g.kernel + k) * count;
            T* dst = dxp.data() + i * lp + t0 * g.stride + k;
            for (std::size_t j = 0; j < count; ++j) dst[j * g.stride] += row[j];
          }
        }
      }
    }
    if (want_dx) {
      T* dxn = dx.data() + n * g.in_channels * g.length;
      for (std::size_t i = 0; i < g.in_channels; ++i) {
        const T* src = dxp.data() + i * lp + g.pad.left;
        T* dst = dxn + i * g.length;
        for (std::size_t t = 0; t < g.length; ++t) dst[t] += src[t];
      }
    }
  }
}

}  // namespace

template <typename T>
Var<T> conv1d(Tape<T>& tape, Var<T> xv, Var<T> wv, Var<T> bv, Conv1dOptions options) {
  const BasicTensor<T>& x = tape.value(xv);
  const BasicTensor<T>& w = tape.value(wv);
  const BasicTensor<T>& b = tape.value(bv);
  if (x.rank() != 3 || w.rank() != 3 || b.rank() != 1) {
    throw ShapeError("conv1d expects input N x C x L, weight C_out x C_in x K and bias C_out; got " +
                     to_string(x.shape()) + ", " + to_string(w.shape()) + ", " +
                     to_string(b.shape()));
  }
  if (w.dim(1) != x.dim(1)) {
    throw ShapeError("conv1d weight expects " + std::to_string(w.dim(1)) +
                     " input channels, input has " + std::to_string(x.dim(1)));
  }
  if (b.dim(0) != w.dim(0)) {
    throw ShapeError("conv1d bias length " + std::to_string(b.dim(0)) + " != filters " +
                     std::to_string(w.dim(0)));
  }

  ConvGeometry g{};
  g.batch = x.dim(0);
  g.in_channels = x.dim(1);
  g.length = x.dim(2);
  g.out_channels = w.dim(0);
  g.kernel = w.dim(2);
  g.stride = options.stride;
  g.out_length = conv_output_length(g.length, g.kernel, g.stride, options.padding);
  if (options.padding == Padding::same) g.pad = same_padding(g.length, g.kernel, g.stride);

  BasicTensor<T> y({g.batch, g.out_channels, g.out_length});
  conv_forward(g, x.ptr(), w.ptr(), b.ptr(), y.ptr());

  return tape.record(std::move(y), {xv, wv, bv}, [xv, wv, bv, g](Tape<T>& t, std::size_t self) {
    std::span<T> dx = t.grad_input(xv);
    std::span<T> dw = t.grad_input(wv);
    std::span<T> db = t.grad_input(bv);
    conv_backward(g, t.value(xv).ptr(), t.value(wv).ptr(), t.grad_output(self).data(), dx, dw,
                  db);
  });
}

template Var<float> conv1d(Tape<float>&, Var<float>, Var<float>, Var<float>, Conv1dOptions);
template Var<double> conv1d(Tape<double>&, Var<double>, Var<double>, Var<double>, Conv1dOptions);

}  // namespace wavegenre::tensor
