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

// Central finite-difference oracle for tape-recorded functions. Independent
// of the backward rules under test: it only evaluates forward passes, and
// always in 64-bit so the difference quotient is not swamped by rounding the
// scalar loss to 32 bits. The analytic side runs in the precision under
// test.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wavegenre/tensor/tape.hpp"

namespace wavegenre::testing {

using tensor::BasicTensor;
using tensor::Tape;
using tensor::Var;

// Scalar probe sum_i w_i * y_i with its own backward rule, so the check sees
// every output element under a distinct weight.
template <typename T>
Var<T> weighted_sum(Tape<T>& tape, Var<T> y, const std::vector<double>& weights) {
  const BasicTensor<T>& v = tape.value(y);
  double acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += weights[i] * v[i];
  return tape.record(BasicTensor<T>({1}, std::vector<T>{static_cast<T>(acc)}), {y},
                     [y, weights](Tape<T>& t, std::size_t self) {
                       const T g = t.grad_output(self)[0];
                       std::span<T> d = t.grad_input(y);
                       for (std::size_t i = 0; i < d.size(); ++i)
                         d[i] += g * static_cast<T>(weights[i]);
                     });
}

struct GradCheckResult {
  double relative_error = 0;
  std::size_t checked = 0;
};

// `forward` is a generic callable (Tape<U>&, std::vector<Var<U>>&) -> Var<U>
// recording a scalar loss from parameter leaves, invoked with U = T for the
// analytic gradient and U = double for the difference quotients.
template <typename T, typename Forward>
GradCheckResult check_gradients(std::vector<BasicTensor<T>*> params, Forward&& forward,
                                double step) {
  for (auto* p : params) p->set_requires_grad(true);
  {
    Tape<T> tape;
    std::vector<Var<T>> leaves;
    for (auto* p : params) leaves.push_back(tape.parameter(*p));
    tape.backward(forward(tape, leaves));
  }

  std::vector<BasicTensor<double>> wide;
  for (auto* p : params) wide.push_back(p->template cast<double>());
  auto evaluate = [&]() {
    Tape<double> tape;
    std::vector<Var<double>> leaves;
    for (auto& p : wide) leaves.push_back(tape.parameter(p));
    return tape.value(forward(tape, leaves))[0];
  };

  double diff2 = 0, analytic2 = 0, numeric2 = 0;
  std::size_t checked = 0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    std::span<const T> analytic = params[j]->grad();
    BasicTensor<double>& p = wide[j];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double original = p[i];
      const double center = evaluate();
      double h = step;
      double numeric = 0;
      for (;;) {
        p[i] = original + h;
        const double up = evaluate();
        p[i] = original - h;
        const double down = evaluate();
        p[i] = original;
        numeric = (up - down) / (2 * h);
        // One-sided slopes that disagree mean a kink (ReLU zero, max-pool
        // argmax switch) lies inside [x-h, x+h]; shrink the step.
        const double forward_slope = (up - center) / h;
        const double backward_slope = (center - down) / h;
        const double spread = std::abs(forward_slope - backward_slope);
        if (spread <= 1e-3 * (std::abs(forward_slope) + std::abs(backward_slope)) + 1e-7 ||
            h < 1e-8) {
          break;
        }
        h /= 10;
      }
      const double a = analytic[i];
      diff2 += (numeric - a) * (numeric - a);
      analytic2 += a * a;
      numeric2 += numeric * numeric;
      ++checked;
    }
  }
  const double scale = std::max(std::sqrt(analytic2), std::sqrt(numeric2));
  return {scale > 0 ? std::sqrt(diff2) / scale : std::sqrt(diff2), checked};
}

template <typename T>
BasicTensor<T> random_tensor(tensor::Shape shape, std::mt19937_64& rng, double lo = -1,
                             double hi = 1) {
  BasicTensor<T> t(std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (T& v : t.data()) v = static_cast<T>(dist(rng));
  return t;
}

// Magnitudes at least `gap` away from zero, so kinked activations are never
// straddled by a finite-difference step.
template <typename T>
BasicTensor<T> random_away_from_zero(tensor::Shape shape, std::mt19937_64& rng, double gap) {
  BasicTensor<T> t(std::move(shape));
  std::uniform_real_distribution<double> mag(gap, 1.0);
  std::bernoulli_distribution sign(0.5);
  for (T& v : t.data()) v = static_cast<T>(sign(rng) ? mag(rng) : -mag(rng));
  return t;
}

// Distinct values separated by at least `gap`, so max-pool argmax positions
// are stable under the perturbation.
template <typename T>
BasicTensor<T> random_distinct(tensor::Shape shape, std::mt19937_64& rng, double gap) {
  BasicTensor<T> t(std::move(shape));
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    t[order[i]] = static_cast<T>((static_cast<double>(i) - order.size() / 2.0) * gap);
  }
  return t;
}

inline std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<double> w(n);
  for (double& v : w) v = dist(rng);
  return w;
}

}  // namespace wavegenre::testing
