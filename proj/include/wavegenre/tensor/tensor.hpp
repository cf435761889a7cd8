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

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavegenre/errors.hpp"

namespace wavegenre::tensor {

/// Dimensions of a tensor, outermost first. Feature maps are N x C x L,
/// convolution weights C_out x C_in x K, dense weights M x D.
using Shape = std::vector<std::size_t>;

inline constexpr std::size_t kMaxRank = 3;

inline std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, std::size_t b) { return a * b; });
}

std::string to_string(const Shape& shape);

/// Dense row-major array of rank <= 3 with an optional gradient buffer of
/// identical shape. Instantiated for float (production) and double
/// (gradient verification).
template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;

  explicit BasicTensor(Shape shape, T fill = T{0})
      : shape_(std::move(shape)), data_(element_count(shape_), fill) {
    check_rank();
  }

  BasicTensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    check_rank();
    if (data_.size() != element_count(shape_)) {
      throw ShapeError("tensor data has " + std::to_string(data_.size()) +
                       " elements but shape " + to_string(shape_) +
                       " needs " + std::to_string(element_count(shape_)));
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  T* ptr() { return data_.data(); }
  const T* ptr() const { return data_.data(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  bool requires_grad() const { return requires_grad_; }

  /// Enabling allocates a zeroed gradient buffer; disabling drops it.
  void set_requires_grad(bool on) {
    requires_grad_ = on;
    if (on) {
      grad_.assign(data_.size(), T{0});
    } else {
      grad_.clear();
      grad_.shrink_to_fit();
    }
  }

  bool has_grad() const { return requires_grad_ && grad_.size() == data_.size(); }
  std::span<T> grad() { return grad_; }
  std::span<const T> grad() const { return grad_; }

  void zero_grad() { std::fill(grad_.begin(), grad_.end(), T{0}); }

  /// Same data viewed under a new shape with the same element count.
  BasicTensor reshaped(Shape shape) const& {
    return BasicTensor(std::move(shape), data_);
  }
  BasicTensor reshaped(Shape shape) && {
    return BasicTensor(std::move(shape), std::move(data_));
  }

  /// Copy converted to another scalar type (no gradient).
  template <typename U>
  BasicTensor<U> cast() const {
    return BasicTensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

 private:
  void check_rank() const {
    if (shape_.size() > kMaxRank) {
      throw ShapeError("tensor rank " + std::to_string(shape_.size()) +
                       " exceeds the supported maximum of 3");
    }
  }

  Shape shape_;
  std::vector<T> data_;
  std::vector<T> grad_;
  bool requires_grad_ = false;
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

/// True when every element is finite.
template <typename T>
bool all_finite(std::span<const T> values);

}  // namespace wavegenre::tensor
