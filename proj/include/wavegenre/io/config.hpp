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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavegenre/audio/augment.hpp"
#include "wavegenre/train/trainer.hpp"

namespace wavegenre::io {

/// Everything a train or evaluate run depends on. `train.seed` also seeds
/// the fold plan.
struct RunConfig {
  train::TrainConfig train;
  audio::AugmentationConfig augmentation;
  std::vector<int> rounds{1, 2, 3};
  bool any_size = false;  // relaxed fold construction

  /// Throws UsageError.
  void validate() const;
};

/// Flat JSON schema: architecture, max_epochs, batch_size, micro_batch,
/// patience, augment, seed, learning_rate, rounds, any_size, noise_min,
/// noise_max, gain_db_min, gain_db_max, loudness_target, pitch_min,
/// pitch_max, stretch_min, stretch_max. Missing keys keep their defaults;
/// unknown keys and wrong types throw UsageError.
RunConfig parse_config(const nlohmann::json& j, RunConfig base = {});
RunConfig read_config(const std::filesystem::path& path, RunConfig base = {});

nlohmann::json to_json(const RunConfig& config);

/// SHA-256 of the canonical JSON form.
std::string config_digest(const RunConfig& config);

/// SHA-256 of the augmentation ranges and seed.
std::string augmentation_digest(const audio::AugmentationConfig& config);

}  // namespace wavegenre::io
