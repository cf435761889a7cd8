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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wavegenre/model/network.hpp"
#include "wavegenre/train/dataset.hpp"
#include "wavegenre/train/folds.hpp"
#include "wavegenre/train/predict.hpp"
#include "wavegenre/train/trainer.hpp"

namespace wavegenre::train {

struct RoundResult {
  int round = 0;
  double segment_accuracy = 0;
  double track_accuracy_majority = 0;
  double track_accuracy_sum = 0;
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  std::size_t test_tracks = 0;
  TrainHistory history;
  std::vector<PredictionRecord> predictions;

  double track_accuracy(AggregationRule rule) const {
    return rule == AggregationRule::sum ? track_accuracy_sum : track_accuracy_majority;
  }
};

struct MeanStd {
  double mean = 0;
  double std = 0;  // sample (n - 1) estimator; 0 for a single round
};

MeanStd mean_std(std::span<const double> values);

struct Summary {
  MeanStd segment;
  MeanStd majority;
  MeanStd sum;
  AggregationRule headline = AggregationRule::sum;  // rule with the higher mean
  MeanStd aggregation;                              // the headline rule's figures
};

Summary summarize(std::span<const RoundResult> rounds);

struct Evaluation {
  std::string architecture;
  bool augment = false;
  std::vector<RoundResult> rounds;
  Summary summary;
};

/// Predicts every test clip and fills the accuracy fields of a RoundResult
/// (history and epoch fields are left empty).
RoundResult test_round(model::Network<float>& net, const ClipSource& source,
                       std::span<const std::size_t> test_clips, std::size_t micro_batch);

/// Seed used for a round's network initialization, shuffling and dropout.
std::uint64_t round_seed(std::uint64_t seed, int round);

struct EvaluationHooks {
  std::function<void(int round, const EpochStats&)> on_epoch;
  /// Receives the restored best network and the finished round.
  std::function<void(int round, model::Network<float>&, const RoundResult&)> on_round;
};

/// Trains and tests the requested rounds (1-based) in order. Rounds are
/// independent: each starts from a fresh network seeded by round_seed.
/// A failing round propagates its exception; rounds completed before it
/// have already been passed to on_round.
Evaluation evaluate(const ClipSource& source, const FoldPlan& plan, const TrainConfig& config,
                    std::span<const int> rounds, const EvaluationHooks& hooks = {});

}  // namespace wavegenre::train
