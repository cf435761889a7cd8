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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gemm.hpp"
#include "wavegenre/tensor/ops.hpp"

namespace wavegenre::tensor {

namespace {

template <typename T>
void require_rank(const BasicTensor<T>& x, std::size_t rank, const char* op) {
  if (x.rank() != rank) {
    throw ShapeError(std::string(op) + " expects a rank-" + std::to_string(rank) +
                     " tensor, got " + to_string(x.shape()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Pooling

template <typename T>
Var<T> maxpool1d(Tape<T>& tape, Var<T> xv, std::size_t pool, std::size_t stride) {
  const BasicTensor<T>& x = tape.value(xv);
  require_rank(x, 3, "maxpool1d");
  const std::size_t rows = x.dim(0) * x.dim(1);
  const std::size_t len = x.dim(2);
  const std::size_t out = pool_output_length(len, pool, stride);

  BasicTensor<T> y({x.dim(0), x.dim(1), out});
  std::vector<std::uint32_t> argmax(rows * out);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* src = x.ptr() + r * len;
    for (std::size_t j = 0; j < out; ++j) {
      const std::size_t start = j * stride;
      std::size_t best = start;
      for (std::size_t k = start + 1; k < start + pool; ++k) {
        if (src[k] > src[best]) best = k;
      }
      y[r * out + j] = src[best];
      argmax[r * out + j] = static_cast<std::uint32_t>(best);
    }
  }
  return tape.record(std::move(y), {xv},
                     [xv, rows, len, out, argmax = std::move(argmax)](Tape<T>& t, std::size_t self) {
                       std::span<T> dx = t.grad_input(xv);
                       std::span<const T> dy = t.grad_output(self);
                       for (std::size_t r = 0; r < rows; ++r)
                         for (std::size_t j = 0; j < out; ++j)
                           dx[r * len + argmax[r * out + j]] += dy[r * out + j];
                     });
}

template <typename T>
Var<T> avgpool1d(Tape<T>& tape, Var<T> xv, std::size_t pool, std::size_t stride) {
  const BasicTensor<T>& x = tape.value(xv);
  require_rank(x, 3, "avgpool1d");
  const std::size_t rows = x.dim(0) * x.dim(1);
  const std::size_t len = x.dim(2);
  const std::size_t out = pool_output_length(len, pool, stride);
  const T scale = T{1} / static_cast<T>(pool);

  BasicTensor<T> y({x.dim(0), x.dim(1), out});
  for (std::size_t r = 0; r < rows; ++r) {
    const T* src = x.ptr() + r * len;
    for (std::size_t j = 0; j < out; ++j) {
      T acc{0};
      for (std::size_t k = j * stride; k < j * stride + pool; ++k) acc += src[k];
      y[r * out + j] = acc * scale;
    }
  }
  return tape.record(std::move(y), {xv},
                     [xv, rows, len, out, pool, stride, scale](Tape<T>& t, std::size_t self) {
                       std::span<T> dx = t.grad_input(xv);
                       std::span<const T> dy = t.grad_output(self);
                       for (std::size_t r = 0; r < rows; ++r)
                         for (std::size_t j = 0; j < out; ++j) {
                           const T g = dy[r * out + j] * scale;
                           for (std::size_t k = j * stride; k < j * stride + pool; ++k)
                             dx[r * len + k] += g;
                         }
                     });
}

// ---------------------------------------------------------------------------
// Batch normalization

template <typename T>
BatchNormState<T>::BatchNormState(std::size_t channels, double epsilon_, double momentum_)
    : gamma({channels}, T{1}),
      beta({channels}, T{0}),
      running_mean({channels}, T{0}),
      running_var({channels}, T{1}),
      epsilon(epsilon_),
      momentum(momentum_) {
  if (channels == 0) throw ValidationError("batch norm needs at least one channel");
  if (!(epsilon > 0)) throw ValidationError("batch norm epsilon must be positive");
  if (!(momentum > 0 && momentum < 1)) throw ValidationError("batch norm momentum must be in (0,1)");
  gamma.set_requires_grad(true);
  beta.set_requires_grad(true);
}

template <typename T>
Var<T> batchnorm1d(Tape<T>& tape, Var<T> xv, BatchNormState<T>& state, Mode mode) {
  return batchnorm1d(tape, xv, tape.parameter(state.gamma), tape.parameter(state.beta), state,
                     mode);
}

template <typename T>
Var<T> batchnorm1d(Tape<T>& tape, Var<T> xv, Var<T> gv, Var<T> bv, BatchNormState<T>& state,
                   Mode mode) {
  const BasicTensor<T>& x = tape.value(xv);
  const BasicTensor<T>& gamma = tape.value(gv);
  const BasicTensor<T>& beta = tape.value(bv);
  require_rank(x, 3, "batchnorm1d");
  const std::size_t n = x.dim(0);
  const std::size_t c = x.dim(1);
  const std::size_t len = x.dim(2);
  if (c != state.channels() || gamma.size() != c || beta.size() != c) {
    throw ShapeError("batchnorm1d has " + std::to_string(state.channels()) +
                     " channels, input has " + std::to_string(c));
  }
  const std::size_t count = n * len;
  const bool training = mode == Mode::training;
  if (training && count < 2) {
    throw ValidationError("batch norm training needs at least two values per channel");
  }

  std::vector<T> mean(c);
  std::vector<T> inv_std(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    if (!training) {
      mean[ch] = state.running_mean[ch];
      inv_std[ch] = static_cast<T>(1.0 / std::sqrt(static_cast<double>(state.running_var[ch]) +
                                                   state.epsilon));
      continue;
    }
    double s = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const T* row = x.ptr() + (b * c + ch) * len;
      for (std::size_t t = 0; t < len; ++t) s += row[t];
    }
    const double mu = s / static_cast<double>(count);
    double ss = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const T* row = x.ptr() + (b * c + ch) * len;
      for (std::size_t t = 0; t < len; ++t) {
        const double d = row[t] - mu;
        ss += d * d;
      }
    }
    const double var = ss / static_cast<double>(count);
    mean[ch] = static_cast<T>(mu);
    inv_std[ch] = static_cast<T>(1.0 / std::sqrt(var + state.epsilon));
    const double unbiased = var * static_cast<double>(count) / static_cast<double>(count - 1);
    const double m = state.momentum;
    state.running_mean[ch] = static_cast<T>((1 - m) * state.running_mean[ch] + m * mu);
    state.running_var[ch] = static_cast<T>((1 - m) * state.running_var[ch] + m * unbiased);
  }

  BasicTensor<T> y(x.shape());
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const T* src = x.ptr() + (b * c + ch) * len;
      T* dst = y.ptr() + (b * c + ch) * len;
      const T g = gamma[ch] * inv_std[ch];
      const T shift = beta[ch] - g * mean[ch];
      for (std::size_t t = 0; t < len; ++t) dst[t] = g * src[t] + shift;
    }

  return tape.record(
      std::move(y), {xv, gv, bv},
      [xv, gv, bv, n, c, len, training, mean = std::move(mean),
       inv_std = std::move(inv_std)](Tape<T>& t, std::size_t self) {
        const BasicTensor<T>& x = t.value(xv);
        const BasicTensor<T>& gamma = t.value(gv);
        std::span<const T> dy = t.grad_output(self);
        std::span<T> dx = t.grad_input(xv);
        std::span<T> dgamma = t.grad_input(gv);
        std::span<T> dbeta = t.grad_input(bv);
        const double m = static_cast<double>(n * len);
        for (std::size_t ch = 0; ch < c; ++ch) {
          double sum_dy = 0;
          double sum_dy_xhat = 0;
          for (std::size_t b = 0; b < n; ++b) {
            const std::size_t off = (b * c + ch) * len;
            for (std::size_t i = 0; i < len; ++i) {
              const double xhat = (x[off + i] - mean[ch]) * inv_std[ch];
              sum_dy += dy[off + i];
              sum_dy_xhat += dy[off + i] * xhat;
            }
          }
          if (!dgamma.empty()) dgamma[ch] += static_cast<T>(sum_dy_xhat);
          if (!dbeta.empty()) dbeta[ch] += static_cast<T>(sum_dy);
          if (dx.empty()) continue;
          const double scale = static_cast<double>(gamma[ch]) * inv_std[ch];
          for (std::size_t b = 0; b < n; ++b) {
            const std::size_t off = (b * c + ch) * len;
            for (std::size_t i = 0; i < len; ++i) {
              if (training) {
                const double xhat = (x[off + i] - mean[ch]) * inv_std[ch];
                dx[off + i] += static_cast<T>(
                    scale * (dy[off + i] - sum_dy / m - xhat * sum_dy_xhat / m));
              } else {
                dx[off + i] += static_cast<T>(scale * dy[off + i]);
              }
            }
          }
        }
      });
}

// ---------------------------------------------------------------------------
// Elementwise activations

template <typename T>
Var<T> relu(Tape<T>& tape, Var<T> xv) {
  BasicTensor<T> y = tape.value(xv);
  for (T& v : y.data()) v = v > T{0} ? v : T{0};
  return tape.record(std::move(y), {xv}, [xv](Tape<T>& t, std::size_t self) {
    const BasicTensor<T>& x = t.value(xv);
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (x[i] > T{0}) dx[i] += dy[i];
    }
  });
}

template <typename T>
Var<T> leaky_relu(Tape<T>& tape, Var<T> xv, double slope) {
  const T a = static_cast<T>(slope);
  BasicTensor<T> y = tape.value(xv);
  for (T& v : y.data()) v = v > T{0} ? v : a * v;
  return tape.record(std::move(y), {xv}, [xv, a](Tape<T>& t, std::size_t self) {
    const BasicTensor<T>& x = t.value(xv);
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += x[i] > T{0} ? dy[i] : a * dy[i];
  });
}

template <typename T>
Var<T> sigmoid(Tape<T>& tape, Var<T> xv) {
  BasicTensor<T> y = tape.value(xv);
  for (T& v : y.data()) v = T{1} / (T{1} + std::exp(-v));
  return tape.record(std::move(y), {xv}, [xv](Tape<T>& t, std::size_t self) {
    const BasicTensor<T>& y = t.value(Var<T>{&t, self});
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * y[i] * (T{1} - y[i]);
  });
}

template <typename T>
std::vector<T> softmax_rows(std::span<const T> logits, std::size_t classes) {
  if (classes == 0 || logits.size() % classes != 0) {
    throw ShapeError("softmax rows: " + std::to_string(logits.size()) +
                     " values do not split into rows of " + std::to_string(classes));
  }
  std::vector<T> out(logits.size());
  for (std::size_t r = 0; r < logits.size() / classes; ++r) {
    const T* row = logits.data() + r * classes;
    T* dst = out.data() + r * classes;
    const T peak = *std::max_element(row, row + classes);
    T total{0};
    for (std::size_t k = 0; k < classes; ++k) {
      dst[k] = std::exp(row[k] - peak);
      total += dst[k];
    }
    for (std::size_t k = 0; k < classes; ++k) dst[k] /= total;
  }
  return out;
}

template <typename T>
Var<T> softmax(Tape<T>& tape, Var<T> xv) {
  const BasicTensor<T>& x = tape.value(xv);
  require_rank(x, 2, "softmax");
  const std::size_t classes = x.dim(1);
  BasicTensor<T> y(x.shape(), softmax_rows<T>(x.data(), classes));
  return tape.record(std::move(y), {xv}, [xv, classes](Tape<T>& t, std::size_t self) {
    const BasicTensor<T>& y = t.value(Var<T>{&t, self});
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t r = 0; r < y.size() / classes; ++r) {
      T dot{0};
      for (std::size_t k = 0; k < classes; ++k) dot += dy[r * classes + k] * y[r * classes + k];
      for (std::size_t k = 0; k < classes; ++k) {
        const std::size_t i = r * classes + k;
        dx[i] += y[i] * (dy[i] - dot);
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Dense, dropout, structural ops

template <typename T>
Var<T> dense(Tape<T>& tape, Var<T> xv, Var<T> wv, Var<T> bv) {
  const BasicTensor<T>& x = tape.value(xv);
  const BasicTensor<T>& w = tape.value(wv);
  const BasicTensor<T>& b = tape.value(bv);
  if (x.rank() != 2 || w.rank() != 2 || b.rank() != 1 || w.dim(1) != x.dim(1) ||
      b.dim(0) != w.dim(0)) {
    throw ShapeError("dense expects input N x D, weight M x D, bias M; got " +
                     to_string(x.shape()) + ", " + to_string(w.shape()) + ", " +
                     to_string(b.shape()));
  }
  const int n = static_cast<int>(x.dim(0));
  const int d = static_cast<int>(x.dim(1));
  const int m = static_cast<int>(w.dim(0));
  BasicTensor<T> y({x.dim(0), w.dim(0)});
  // Row-wise, so a sample's output does not depend on its batch.
  for (int r = 0; r < n; ++r) {
    T* yr = y.ptr() + static_cast<std::size_t>(r) * m;
    std::copy_n(b.ptr(), m, yr);
    detail::gemm(false, true, 1, m, d, T{1}, x.ptr() + static_cast<std::size_t>(r) * d, d,
                 w.ptr(), d, T{1}, yr, m);
  }

  return tape.record(std::move(y), {xv, wv, bv}, [xv, wv, bv, n, d, m](Tape<T>& t, std::size_t self) {
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    std::span<T> dw = t.grad_input(wv);
    std::span<T> db = t.grad_input(bv);
    if (!dx.empty()) {
      detail::gemm(false, false, n, d, m, T{1}, dy.data(), m, t.value(wv).ptr(), d, T{1},
                   dx.data(), d);
    }
    if (!dw.empty()) {
      detail::gemm(true, false, m, d, n, T{1}, dy.data(), m, t.value(xv).ptr(), d, T{1},
                   dw.data(), d);
    }
    if (!db.empty()) {
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < m; ++k) db[k] += dy[static_cast<std::size_t>(r) * m + k];
    }
  });
}

template <typename T>
Var<T> dropout(Tape<T>& tape, Var<T> xv, double p, Mode mode, std::mt19937_64& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ValidationError("dropout probability must be in [0, 1), got " + std::to_string(p));
  }
  if (mode == Mode::inference || p == 0.0) return xv;

  const BasicTensor<T>& x = tape.value(xv);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<T> mask(x.size());
  for (T& m : mask) m = coin(rng) < p ? T{0} : keep_scale;

  BasicTensor<T> y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= mask[i];
  return tape.record(std::move(y), {xv}, [xv, mask = std::move(mask)](Tape<T>& t, std::size_t self) {
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * mask[i];
  });
}

template <typename T>
Var<T> add(Tape<T>& tape, Var<T> av, Var<T> bv) {
  const BasicTensor<T>& a = tape.value(av);
  const BasicTensor<T>& b = tape.value(bv);
  if (a.shape() != b.shape()) {
    throw ShapeError("add: shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) +
                     " differ");
  }
  BasicTensor<T> y = a;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
  return tape.record(std::move(y), {av, bv}, [av, bv](Tape<T>& t, std::size_t self) {
    std::span<const T> dy = t.grad_output(self);
    for (Var<T> in : {av, bv}) {
      std::span<T> d = t.grad_input(in);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += dy[i];
    }
  });
}

template <typename T>
Var<T> scale(Tape<T>& tape, Var<T> xv, double factor) {
  BasicTensor<T> y = tape.value(xv);
  const T f = static_cast<T>(factor);
  for (T& v : y.data()) v *= f;
  return tape.record(std::move(y), {xv}, [xv, f](Tape<T>& t, std::size_t self) {
    std::span<const T> dy = t.grad_output(self);
    std::span<T> d = t.grad_input(xv);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += f * dy[i];
  });
}

template <typename T>
Var<T> flatten(Tape<T>& tape, Var<T> xv) {
  const BasicTensor<T>& x = tape.value(xv);
  if (x.rank() == 2) return xv;
  require_rank(x, 3, "flatten");
  BasicTensor<T> y = x.reshaped({x.dim(0), x.dim(1) * x.dim(2)});
  return tape.record(std::move(y), {xv}, [xv](Tape<T>& t, std::size_t self) {
    std::span<const T> dy = t.grad_output(self);
    std::span<T> dx = t.grad_input(xv);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i];
  });
}

template <typename T>
Var<T> sum(Tape<T>& tape, Var<T> xv) {
  const BasicTensor<T>& x = tape.value(xv);
  T total{0};
  for (T v : x.data()) total += v;
  return tape.record(BasicTensor<T>({1}, std::vector<T>{total}), {xv},
                     [xv](Tape<T>& t, std::size_t self) {
                       const T g = t.grad_output(self)[0];
                       for (T& d : t.grad_input(xv)) d += g;
                     });
}

template <typename T>
Var<T> cross_entropy(Tape<T>& tape, Var<T> logits_v, std::span<const int> labels) {
  const BasicTensor<T>& logits = tape.value(logits_v);
  require_rank(logits, 2, "cross_entropy");
  const std::size_t n = logits.dim(0);
  const std::size_t classes = logits.dim(1);
  if (labels.size() != n) {
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(n) + " rows");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw ValidationError("cross_entropy: label " + std::to_string(label) + " outside [0, " +
                            std::to_string(classes) + ")");
    }
  }
  std::vector<T> probs = softmax_rows<T>(logits.data(), classes);
  double loss = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const T* row = logits.ptr() + r * classes;
    const T peak = *std::max_element(row, row + classes);
    double total = 0;
    for (std::size_t k = 0; k < classes; ++k) total += std::exp(static_cast<double>(row[k] - peak));
    loss += std::log(total) - static_cast<double>(row[labels[r]] - peak);
  }
  loss /= static_cast<double>(n);

  std::vector<int> owned_labels(labels.begin(), labels.end());
  return tape.record(
      BasicTensor<T>({1}, std::vector<T>{static_cast<T>(loss)}), {logits_v},
      [logits_v, n, classes, probs = std::move(probs),
       owned_labels = std::move(owned_labels)](Tape<T>& t, std::size_t self) {
        const T g = t.grad_output(self)[0] / static_cast<T>(n);
        std::span<T> dx = t.grad_input(logits_v);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t k = 0; k < classes; ++k) {
            const std::size_t i = r * classes + k;
            const T target = static_cast<int>(k) == owned_labels[r] ? T{1} : T{0};
            dx[i] += g * (probs[i] - target);
          }
      });
}

#define WAVEGENRE_INSTANTIATE(T)                                                           \
  template Var<T> maxpool1d(Tape<T>&, Var<T>, std::size_t, std::size_t);                   \
  template Var<T> avgpool1d(Tape<T>&, Var<T>, std::size_t, std::size_t);                   \
  template struct BatchNormState<T>;                                                       \
  template Var<T> batchnorm1d(Tape<T>&, Var<T>, BatchNormState<T>&, Mode);                 \
  template Var<T> batchnorm1d(Tape<T>&, Var<T>, Var<T>, Var<T>, BatchNormState<T>&, Mode); \
  template Var<T> relu(Tape<T>&, Var<T>);                                                  \
  template Var<T> leaky_relu(Tape<T>&, Var<T>, double);                                    \
  template Var<T> sigmoid(Tape<T>&, Var<T>);                                               \
  template Var<T> softmax(Tape<T>&, Var<T>);                                               \
  template std::vector<T> softmax_rows(std::span<const T>, std::size_t);                   \
  template Var<T> dense(Tape<T>&, Var<T>, Var<T>, Var<T>);                                 \
  template Var<T> dropout(Tape<T>&, Var<T>, double, Mode, std::mt19937_64&);               \
  template Var<T> add(Tape<T>&, Var<T>, Var<T>);                                           \
  template Var<T> scale(Tape<T>&, Var<T>, double);                                         \
  template Var<T> flatten(Tape<T>&, Var<T>);                                               \
  template Var<T> sum(Tape<T>&, Var<T>);                                                   \
  template Var<T> cross_entropy(Tape<T>&, Var<T>, std::span<const int>);

WAVEGENRE_INSTANTIATE(float)
WAVEGENRE_INSTANTIATE(double)

#undef WAVEGENRE_INSTANTIATE

}  // namespace wavegenre::tensor
