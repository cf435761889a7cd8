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

#include "wavegenre/tensor/tape.hpp"

#include <cmath>
#include <sstream>

namespace wavegenre::tensor {

std::string to_string(const Shape& shape) {
  std::ostringstream out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  if (shape.empty()) out << "scalar";
  return out.str();
}

template <typename T>
bool all_finite(std::span<const T> values) {
  for (T v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template bool all_finite<float>(std::span<const float>);
template bool all_finite<double>(std::span<const double>);

template <typename T>
Var<T> Tape<T>::push(Node node) {
  if (consumed_) {
    throw UsageError("tape was already differentiated without retain; record on a new tape");
  }
  nodes_.push_back(std::move(node));
  return Var<T>{this, nodes_.size() - 1};
}

template <typename T>
Var<T> Tape<T>::parameter(BasicTensor<T>& tensor) {
  Node node;
  node.external = &tensor;
  node.needs_grad = tensor.requires_grad();
  return push(std::move(node));
}

template <typename T>
Var<T> Tape<T>::input(BasicTensor<T> value, bool requires_grad) {
  Node node;
  node.owned = std::move(value);
  node.needs_grad = requires_grad;
  return push(std::move(node));
}

template <typename T>
Var<T> Tape<T>::record(BasicTensor<T> value, std::initializer_list<Var<T>> inputs,
                       BackwardFn backward) {
  bool needs = false;
  for (const Var<T>& in : inputs) {
    check(in);
    needs = needs || nodes_[in.id].needs_grad;
  }
  Node node;
  node.owned = std::move(value);
  node.needs_grad = needs;
  if (needs) node.backward = std::move(backward);
  return push(std::move(node));
}

template <typename T>
void Tape<T>::check(Var<T> v) const {
  if (v.tape != this || v.id >= nodes_.size()) {
    throw UsageError("variable is not recorded on this tape");
  }
}

template <typename T>
const BasicTensor<T>& Tape<T>::value(Var<T> v) const {
  check(v);
  const Node& n = nodes_[v.id];
  return n.external ? *n.external : n.owned;
}

template <typename T>
bool Tape<T>::needs_grad(Var<T> v) const {
  check(v);
  return nodes_[v.id].needs_grad;
}

template <typename T>
std::span<const T> Tape<T>::grad_output(std::size_t id) const {
  return nodes_.at(id).grad;
}

template <typename T>
std::span<T> Tape<T>::grad_input(Var<T> v) {
  check(v);
  Node& n = nodes_[v.id];
  if (!n.needs_grad) return {};
  if (n.external) return n.external->grad();
  if (n.grad.empty()) n.grad.assign(n.owned.size(), T{0});
  return n.grad;
}

template <typename T>
void Tape<T>::backward(Var<T> loss, bool retain) {
  check(loss);
  if (consumed_) {
    throw UsageError("tape was already differentiated without retain");
  }
  if (value(loss).size() != 1) {
    throw UsageError("backward requires a scalar loss, got shape " +
                     to_string(value(loss).shape()));
  }
  if (!nodes_[loss.id].needs_grad) return;

  // Intermediate accumulators from a previous retained pass start over;
  // leaf gradients keep accumulating.
  for (Node& n : nodes_) {
    if (n.backward) std::fill(n.grad.begin(), n.grad.end(), T{0});
  }
  std::span<T> seed = grad_input(loss);
  seed[0] += T{1};

  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.backward && !n.grad.empty()) {
      n.backward(*this, i);
    }
    if (!retain && !n.external && n.backward) {
      // Every consumer of entry i sits after it and has already run.
      n.grad.clear();
      n.grad.shrink_to_fit();
      n.owned = BasicTensor<T>();
    }
  }
  if (!retain) consumed_ = true;
}

template <typename T>
std::span<const T> Tape<T>::gradient(Var<T> v) const {
  check(v);
  const Node& n = nodes_[v.id];
  if (n.external) return n.external->grad();
  return n.grad;
}

template <typename T>
BasicTensor<T> Tape<T>::release(Var<T> v) {
  check(v);
  Node& n = nodes_[v.id];
  if (n.external) return n.external->reshaped(n.external->shape());
  return std::move(n.owned);
}

template class Tape<float>;
template class Tape<double>;

}  // namespace wavegenre::tensor
