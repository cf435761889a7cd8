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

#include "wavegenre/train/folds.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "wavegenre/errors.hpp"

namespace wavegenre::train {

int FoldPlan::fold_of(const std::string& track_id) const {
  const auto it = assignment.find(track_id);
  return it == assignment.end() ? 0 : it->second;
}

std::vector<std::string> FoldPlan::tracks_in(int fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : assignment) {
    if (f == fold) out.push_back(id);
  }
  return out;
}

const Round& FoldPlan::round(int index) const {
  if (index < 1 || index > kNumFolds) {
    throw ValidationError("round " + std::to_string(index) + " outside [1, 3]");
  }
  return rounds[index - 1];
}

std::array<std::size_t, kNumFolds> fold_sizes(std::size_t n) {
  std::array<std::size_t, kNumFolds> sizes{};
  for (std::size_t f = 0; f < kNumFolds; ++f) sizes[f] = n / kNumFolds + (f < n % kNumFolds);
  return sizes;
}

FoldPlan make_folds(std::span<const TrackRef> tracks, std::uint64_t seed, FoldMode mode) {
  std::map<int, std::vector<std::string>> by_genre;
  std::set<std::string> seen;
  for (const TrackRef& t : tracks) {
    if (!seen.insert(t.track_id).second) {
      throw ValidationError("duplicate track id " + t.track_id);
    }
    by_genre[t.genre].push_back(t.track_id);
  }

  if (mode == FoldMode::strict) {
    std::string problems;
    for (const auto& [genre, ids] : by_genre) {
      if (ids.size() != kTracksPerGenre) {
        problems += " genre " + std::to_string(genre) + ": " + std::to_string(ids.size()) + ";";
      }
    }
    if (by_genre.size() != kGenres) {
      problems += " " + std::to_string(by_genre.size()) + " genres instead of 10;";
    }
    if (!problems.empty()) {
      throw ProtocolError("fold construction needs 100 tracks in each of 10 genres:" + problems);
    }
  } else {
    for (const auto& [genre, ids] : by_genre) {
      if (ids.size() < kNumFolds) {
        throw ProtocolError("genre " + std::to_string(genre) + " has " +
                            std::to_string(ids.size()) + " tracks; at least 3 are needed");
      }
    }
  }

  FoldPlan plan;
  plan.seed = seed;
  for (auto& [genre, ids] : by_genre) {
    std::sort(ids.begin(), ids.end());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(genre)};
    std::mt19937_64 rng(seq);
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto sizes = fold_sizes(ids.size());
    std::size_t pos = 0;
    for (int f = 0; f < kNumFolds; ++f) {
      for (std::size_t i = 0; i < sizes[f]; ++i) plan.assignment[ids[pos++]] = f + 1;
    }
  }
  return plan;
}

}  // namespace wavegenre::train
