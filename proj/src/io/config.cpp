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

#include "wavegenre/io/config.hpp"

#include <set>

#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"
#include "wavegenre/io/digest.hpp"

namespace wavegenre::io {

void RunConfig::validate() const {
  train.validate();
  try {
    audio::validate(augmentation);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  if (rounds.empty()) throw UsageError("at least one round is required");
  std::set<int> seen;
  for (int r : rounds) {
    if (r < 1 || r > train::kNumFolds) {
      throw UsageError("round " + std::to_string(r) + " outside [1, 3]");
    }
    if (!seen.insert(r).second) throw UsageError("round " + std::to_string(r) + " listed twice");
  }
}

namespace {

template <typename V>
void read_key(const nlohmann::json& j, const char* key, V& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<V>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type: " + it->dump());
  }
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known{
      "architecture", "max_epochs",  "batch_size",  "micro_batch", "patience",
      "augment",      "seed",        "learning_rate", "rounds",    "any_size",
      "noise_min",    "noise_max",   "gain_db_min", "gain_db_max", "loudness_target",
      "pitch_min",    "pitch_max",   "stretch_min", "stretch_max"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  for (const char* key : {"max_epochs", "batch_size", "micro_batch", "patience", "seed"}) {
    if (j.contains(key) && !j.at(key).is_number_unsigned()) {
      throw UsageError(std::string("config key '") + key + "' must be a non-negative integer");
    }
  }
  read_key(j, "architecture", c.train.architecture);
  read_key(j, "max_epochs", c.train.max_epochs);
  read_key(j, "batch_size", c.train.batch_size);
  read_key(j, "micro_batch", c.train.micro_batch);
  read_key(j, "patience", c.train.patience);
  read_key(j, "augment", c.train.augment);
  read_key(j, "seed", c.train.seed);
  read_key(j, "learning_rate", c.train.learning_rate);
  read_key(j, "rounds", c.rounds);
  read_key(j, "any_size", c.any_size);
  read_key(j, "noise_min", c.augmentation.noise_amplitude.lo);
  read_key(j, "noise_max", c.augmentation.noise_amplitude.hi);
  read_key(j, "gain_db_min", c.augmentation.gain_db.lo);
  read_key(j, "gain_db_max", c.augmentation.gain_db.hi);
  read_key(j, "loudness_target", c.augmentation.loudness_target);
  read_key(j, "pitch_min", c.augmentation.pitch_semitones.lo);
  read_key(j, "pitch_max", c.augmentation.pitch_semitones.hi);
  read_key(j, "stretch_min", c.augmentation.stretch_rate.lo);
  read_key(j, "stretch_max", c.augmentation.stretch_rate.hi);
  return c;
}

RunConfig read_config(const std::filesystem::path& path, RunConfig base) {
  try {
    return parse_config(nlohmann::json::parse(read_file(path)), std::move(base));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const RunConfig& c) {
  const auto& a = c.augmentation;
  return {{"architecture", c.train.architecture},
          {"max_epochs", c.train.max_epochs},
          {"batch_size", c.train.batch_size},
          {"micro_batch", c.train.micro_batch},
          {"patience", c.train.patience},
          {"augment", c.train.augment},
          {"seed", c.train.seed},
          {"learning_rate", c.train.learning_rate},
          {"rounds", c.rounds},
          {"any_size", c.any_size},
          {"noise_min", a.noise_amplitude.lo},
          {"noise_max", a.noise_amplitude.hi},
          {"gain_db_min", a.gain_db.lo},
          {"gain_db_max", a.gain_db.hi},
          {"loudness_target", a.loudness_target},
          {"pitch_min", a.pitch_semitones.lo},
          {"pitch_max", a.pitch_semitones.hi},
          {"stretch_min", a.stretch_rate.lo},
          {"stretch_max", a.stretch_rate.hi}};
}

std::string config_digest(const RunConfig& config) { return sha256_hex(to_json(config).dump()); }

std::string augmentation_digest(const audio::AugmentationConfig& a) {
  const nlohmann::json j{{"noise", {a.noise_amplitude.lo, a.noise_amplitude.hi}},
                         {"gain_db", {a.gain_db.lo, a.gain_db.hi}},
                         {"loudness_target", a.loudness_target},
                         {"pitch", {a.pitch_semitones.lo, a.pitch_semitones.hi}},
                         {"stretch", {a.stretch_rate.lo, a.stretch_rate.hi}},
                         {"seed", a.seed}};
  return sha256_hex(j.dump());
}

}  // namespace wavegenre::io
