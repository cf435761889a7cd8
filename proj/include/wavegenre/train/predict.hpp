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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavegenre/model/network.hpp"

namespace wavegenre::train {

enum class AggregationRule { majority, sum };

const char* to_string(AggregationRule rule);

struct PredictionRecord {
  std::string track_id;
  std::optional<int> label;
  std::vector<std::vector<double>> probabilities;  // one softmax vector per segment
  int majority = -1;
  int sum = -1;

  int predicted(AggregationRule rule) const { return rule == AggregationRule::sum ? sum : majority; }
};

/// Inference-mode softmax of all 21 segments of a clip. Throws TooShortError
/// (via segmentation) for clips below the minimum length.
PredictionRecord predict_track(model::Network<float>& net, std::span<const float> samples,
                               std::string track_id, std::optional<int> label = {},
                               std::size_t micro_batch = 8);

/// sum: argmax of the summed vectors. majority: the class with the most
/// per-segment argmax votes; when several classes tie for most votes, the
/// sum rule decides. Argmax ties resolve to the lowest class index.
/// Throws ValidationError for an empty record.
int aggregate(const PredictionRecord& record, AggregationRule rule);

/// Index of the largest element; the first one on ties.
int argmax(std::span<const double> v);

}  // namespace wavegenre::train
