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

#include "wavegenre/train/predict.hpp"

#include <algorithm>

#include "wavegenre/audio/segment.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/tensor/ops.hpp"

namespace wavegenre::train {

const char* to_string(AggregationRule rule) {
  return rule == AggregationRule::sum ? "sum" : "majority";
}

int argmax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

PredictionRecord predict_track(model::Network<float>& net, std::span<const float> samples,
                               std::string track_id, std::optional<int> label,
                               std::size_t micro_batch) {
  if (micro_batch == 0) throw ValidationError("micro_batch must be positive");
  PredictionRecord record;
  record.track_id = std::move(track_id);
  record.label = label;
  for (std::size_t start = 0; start < audio::kSegmentsPerClip; start += micro_batch) {
    const std::size_t n = std::min(micro_batch, audio::kSegmentsPerClip - start);
    tensor::BasicTensor<float> batch({n, 1, audio::kWindow});
    for (std::size_t b = 0; b < n; ++b) {
      audio::copy_segment(samples, start + b,
                          std::span<float>(batch.ptr() + b * audio::kWindow, audio::kWindow),
                          record.track_id);
    }
    const auto logits = net.infer(batch);
    const std::size_t classes = logits.dim(1);
    const auto probs = tensor::softmax_rows<float>(logits.data(), classes);
    for (std::size_t b = 0; b < n; ++b) {
      record.probabilities.emplace_back(probs.begin() + b * classes,
                                        probs.begin() + (b + 1) * classes);
    }
  }
  record.majority = aggregate(record, AggregationRule::majority);
  record.sum = aggregate(record, AggregationRule::sum);
  return record;
}

int aggregate(const PredictionRecord& record, AggregationRule rule) {
  if (record.probabilities.empty()) {
    throw ValidationError("cannot aggregate an empty prediction record for " + record.track_id);
  }
  const std::size_t classes = record.probabilities.front().size();
  std::vector<double> total(classes, 0.0);
  std::vector<double> votes(classes, 0.0);
  for (const auto& p : record.probabilities) {
    if (p.size() != classes) throw ShapeError("prediction vectors differ in length");
    for (std::size_t k = 0; k < classes; ++k) total[k] += p[k];
    votes[argmax(p)] += 1;
  }
  const int by_sum = argmax(total);
  if (rule == AggregationRule::sum) return by_sum;
  const double most = *std::max_element(votes.begin(), votes.end());
  if (std::count(votes.begin(), votes.end(), most) > 1) return by_sum;
  return argmax(votes);
}

}  // namespace wavegenre::train
