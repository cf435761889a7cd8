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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wavegenre::train {

inline constexpr int kNumFolds = 3;
inline constexpr std::size_t kTracksPerGenre = 100;
inline constexpr std::size_t kGenres = 10;

struct TrackRef {
  std::string track_id;
  int genre = 0;
};

/// Fold numbers (1-based) playing each role in one round.
struct Round {
  int train = 1;
  int validation = 2;
  int test = 3;
};

enum class FoldMode {
  strict,   // 10 genres x 100 tracks
  relaxed,  // any genre sizes >= 3, same 1/3 split rule
};

struct FoldPlan {
  std::map<std::string, int> assignment;  // track_id -> fold in {1, 2, 3}
  std::array<Round, kNumFolds> rounds{Round{1, 2, 3}, Round{2, 3, 1}, Round{3, 1, 2}};
  std::uint64_t seed = 0;

  int fold_of(const std::string& track_id) const;  // 0 when unknown
  std::vector<std::string> tracks_in(int fold) const;
  const Round& round(int index) const;  // index in {1, 2, 3}
};

/// Per-genre shuffle of the tracks (sorted by id first, so input order does
/// not matter), then the first ceil-ish third to fold 1, the next to fold 2,
/// the rest to fold 3. For 100 tracks per genre: 34 / 33 / 33.
///
/// Strict mode throws ProtocolError listing every genre whose count is not
/// 100, or when there are not exactly 10 genres. Duplicate track ids throw
/// ValidationError.
FoldPlan make_folds(std::span<const TrackRef> tracks, std::uint64_t seed,
                    FoldMode mode = FoldMode::strict);

/// Tracks per fold for a genre of n tracks.
std::array<std::size_t, kNumFolds> fold_sizes(std::size_t n);

}  // namespace wavegenre::train
