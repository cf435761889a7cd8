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
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wavegenre/model/network.hpp"
#include "wavegenre/train/dataset.hpp"

namespace wavegenre::train {

struct TrainConfig {
  std::string architecture = "resnet1d";
  std::size_t max_epochs = 100;
  std::size_t batch_size = 80;
  /// Segments per forward pass. Gradients of the micro-batches of one batch
  /// are accumulated before the optimizer step; batch normalization uses
  /// each micro-batch's own statistics.
  std::size_t micro_batch = 8;
  std::size_t patience = 10;
  bool augment = false;
  std::uint64_t seed = 0;
  double learning_rate = 1e-3;

  /// Throws UsageError naming the first invalid field.
  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0;
  double train_accuracy = 0;  // running, training mode
  double validation_loss = 0;
  double validation_accuracy = 0;
  bool improved = false;
};

enum class StopReason { max_epochs, early_stopping, requested };

const char* to_string(StopReason reason);

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  double best_validation_loss = std::numeric_limits<double>::infinity();
  StopReason stop_reason = StopReason::max_epochs;
};

/// Tracks the best validation loss; stops after `patience` consecutive
/// epochs without a strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Returns true when loss is a new best.
  bool update(std::size_t epoch, double loss);
  bool should_stop() const { return best_epoch_ > 0 && stale_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  std::size_t best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t stale_ = 0;
};

/// Called after every epoch with the current (not yet restored) network.
/// Returning false ends training after that epoch.
using EpochCallback = std::function<bool(const EpochStats&, model::Network<float>&)>;

/// Shuffled mini-batch training with Adam and segment-level cross-entropy.
/// After every epoch the validation loss drives early stopping; on return
/// the network holds the weights of the best validation epoch.
///
/// Throws NumericError when a loss is not finite, ValidationError when
/// either set is empty.
TrainHistory fit(model::Network<float>& net, const SegmentSet& train_set,
                 const SegmentSet& validation_set, const TrainConfig& config,
                 const EpochCallback& on_epoch = {});

struct LossAccuracy {
  double loss = 0;
  double accuracy = 0;
};

/// Inference-mode mean cross-entropy and accuracy over a segment set.
LossAccuracy measure(model::Network<float>& net, const SegmentSet& set, std::size_t micro_batch);

}  // namespace wavegenre::train
