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

#include <string>

#include <nlohmann/json.hpp>

#include "wavegenre/train/evaluate.hpp"

namespace wavegenre::train {

/// Per-round metrics, per-epoch history, per-track decisions and the
/// mean +- std summary.
nlohmann::json to_json(const Evaluation& evaluation);

/// One row per round plus "mean" and "std" rows. Columns: architecture,
/// augmentation, round, segment_acc, track_acc_majority, track_acc_sum,
/// epochs, best_epoch.
std::string to_csv(const Evaluation& evaluation);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace wavegenre::train
