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

#include "wavegenre/train/evaluate.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "wavegenre/errors.hpp"
#include "wavegenre/model/architecture.hpp"

namespace wavegenre::train {

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1));
  }
  return out;
}

Summary summarize(std::span<const RoundResult> rounds) {
  std::vector<double> seg, maj, sum;
  for (const RoundResult& r : rounds) {
    seg.push_back(r.segment_accuracy);
    maj.push_back(r.track_accuracy_majority);
    sum.push_back(r.track_accuracy_sum);
  }
  Summary s;
  s.segment = mean_std(seg);
  s.majority = mean_std(maj);
  s.sum = mean_std(sum);
  s.headline = s.majority.mean > s.sum.mean ? AggregationRule::majority : AggregationRule::sum;
  s.aggregation = s.headline == AggregationRule::sum ? s.sum : s.majority;
  return s;
}

RoundResult test_round(model::Network<float>& net, const ClipSource& source,
                       std::span<const std::size_t> test_clips, std::size_t micro_batch) {
  if (test_clips.empty()) throw ValidationError("test fold is empty");
  RoundResult result;
  std::size_t segments = 0, segments_right = 0, majority_right = 0, sum_right = 0;
  for (std::size_t c : test_clips) {
    const ClipInfo& info = source.info(c);
    const std::vector<float> samples = source.samples(c);
    PredictionRecord record = predict_track(net, samples, info.track_id, info.label, micro_batch);
    for (const auto& p : record.probabilities) {
      ++segments;
      if (argmax(p) == info.label) ++segments_right;
    }
    if (record.majority == info.label) ++majority_right;
    if (record.sum == info.label) ++sum_right;
    result.predictions.push_back(std::move(record));
  }
  const double tracks = static_cast<double>(test_clips.size());
  result.test_tracks = test_clips.size();
  result.segment_accuracy = static_cast<double>(segments_right) / segments;
  result.track_accuracy_majority = majority_right / tracks;
  result.track_accuracy_sum = sum_right / tracks;
  return result;
}

std::uint64_t round_seed(std::uint64_t seed, int round) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(round)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return static_cast<std::uint64_t>(words[0]) << 32 | words[1];
}

Evaluation evaluate(const ClipSource& source, const FoldPlan& plan, const TrainConfig& config,
                    std::span<const int> rounds, const EvaluationHooks& hooks) {
  config.validate();
  Evaluation evaluation;
  evaluation.architecture = config.architecture;
  evaluation.augment = config.augment;
  for (int round : rounds) {
    const RoundData data = select_round(source, plan, round, config.augment);
    check_no_leakage(source, plan, round, data);

    TrainConfig round_config = config;
    round_config.seed = round_seed(config.seed, round);
    model::Network<float> net(model::build_architecture(config.architecture), round_config.seed);
    const SegmentSet train_set(source, data.train);
    const SegmentSet validation_set(source, data.validation);
    EpochCallback on_epoch;
    if (hooks.on_epoch) {
      on_epoch = [&](const EpochStats& stats, model::Network<float>&) {
        hooks.on_epoch(round, stats);
        return true;
      };
    }
    TrainHistory history = fit(net, train_set, validation_set, round_config, on_epoch);

    RoundResult result = test_round(net, source, data.test, config.micro_batch);
    result.round = round;
    result.epochs = history.epochs.size();
    result.best_epoch = history.best_epoch;
    result.history = std::move(history);
    if (hooks.on_round) hooks.on_round(round, net, result);
    evaluation.rounds.push_back(std::move(result));
  }
  evaluation.summary = summarize(evaluation.rounds);
  return evaluation;
}

}  // namespace wavegenre::train
