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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavegenre/io/config.hpp"

namespace wavegenre::cli {

enum ExitCode : int {
  kOk = 0,
  kDataError = 2,
  kUsageError = 64,
  kNumericError = 70,
};

struct PrepareOptions {
  std::filesystem::path data_dir;
  std::filesystem::path out;
  bool any_size = false;
  bool lenient = false;  // unreadable files only warn
};

struct AugmentOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
};

struct TrainOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  io::RunConfig run;
  std::optional<std::filesystem::path> from;  // evaluate saved checkpoints instead of training
};

struct PredictOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path wav;
  std::optional<std::filesystem::path> out;
};

struct ArchInfoOptions {
  std::vector<std::string> names;  // empty: all
  bool json = false;
};

int prepare(const PrepareOptions& options, std::ostream& out, std::ostream& log);
int augment(const AugmentOptions& options, std::ostream& out, std::ostream& log);
int train(const TrainOptions& options, std::ostream& out, std::ostream& log);
int predict(const PredictOptions& options, std::ostream& out, std::ostream& log);
int arch_info(const ArchInfoOptions& options, std::ostream& out);

/// Runs fn, mapping library exceptions to exit codes and printing the
/// message to log.
int guarded(std::ostream& log, const std::function<int()>& fn);

}  // namespace wavegenre::cli
