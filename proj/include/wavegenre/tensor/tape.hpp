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
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "wavegenre/tensor/tensor.hpp"

namespace wavegenre::tensor {

template <typename T>
class Tape;

/// Handle to a value recorded on a Tape.
template <typename T>
struct Var {
  const Tape<T>* tape = nullptr;
  std::size_t id = 0;
};

/// Reverse-mode computation tape.
///
/// Operations append entries in execution order, so inputs always precede
/// the entries that consume them. backward() walks the entries once in
/// reverse. Parameter leaves reference caller-owned tensors and accumulate
/// into their grad() buffers, which makes repeated forward/backward passes
/// (micro-batches) sum their gradients until the caller zeroes them.
///
/// A tape belongs to one thread; it is cheap to create one per batch.
template <typename T>
class Tape {
 public:
  using scalar_type = T;
  /// Propagates the entry's output gradient into its inputs' gradients.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf referencing a caller-owned tensor. The tensor must outlive the
  /// tape. Gradients flow into it iff tensor.requires_grad().
  Var<T> parameter(BasicTensor<T>& tensor);

  /// Leaf owning its value. With requires_grad the gradient is readable
  /// through gradient() after backward().
  Var<T> input(BasicTensor<T> value, bool requires_grad = false);

  /// Appends an operation result. The backward rule is kept only when at
  /// least one input needs a gradient.
  Var<T> record(BasicTensor<T> value, std::initializer_list<Var<T>> inputs,
                BackwardFn backward);

  const BasicTensor<T>& value(Var<T> v) const;
  const Shape& shape(Var<T> v) const { return value(v).shape(); }

  bool needs_grad(Var<T> v) const;

  /// Upstream gradient of an entry while its backward rule runs.
  std::span<const T> grad_output(std::size_t id) const;

  /// Writable gradient accumulator of an input; empty when the input does
  /// not need a gradient.
  std::span<T> grad_input(Var<T> v);

  /// Seeds d(loss)/d(loss) = 1 and runs every recorded backward rule in
  /// reverse order. Without retain, intermediate buffers are released as
  /// the walk proceeds and the tape cannot be differentiated again.
  void backward(Var<T> loss, bool retain = false);

  /// Gradient of an owned input leaf after backward().
  std::span<const T> gradient(Var<T> v) const;

  /// Moves an owned value out of the tape (copies a parameter leaf). The
  /// entry must not be read again.
  BasicTensor<T> release(Var<T> v);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    BasicTensor<T> owned;
    BasicTensor<T>* external = nullptr;
    std::vector<T> grad;
    bool needs_grad = false;
    BackwardFn backward;
  };

  void check(Var<T> v) const;
  Var<T> push(Node node);

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace wavegenre::tensor
