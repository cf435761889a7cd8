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

#include <cstddef>
#include <filesystem>
#include <list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavegenre/tensor/tensor.hpp"
#include "wavegenre/train/folds.hpp"

namespace wavegenre::train {

inline constexpr const char* kOriginalTag = "original";

struct ClipInfo {
  std::string track_id;
  std::string origin;                  // track the clip derives from; itself for originals
  std::string transform = kOriginalTag;
  int label = 0;

  bool augmented() const { return transform != kOriginalTag; }
};

/// Indexed collection of labelled clips whose waveforms are fetched on
/// demand.
class ClipSource {
 public:
  virtual ~ClipSource() = default;
  virtual std::size_t size() const = 0;
  virtual const ClipInfo& info(std::size_t i) const = 0;
  /// Waveform at 22,050 Hz, at least kMinClipLength samples long.
  virtual std::vector<float> samples(std::size_t i) const = 0;
};

class MemoryClipSource : public ClipSource {
 public:
  void add(ClipInfo info, std::vector<float> samples);

  std::size_t size() const override { return clips_.size(); }
  const ClipInfo& info(std::size_t i) const override { return clips_.at(i).first; }
  std::vector<float> samples(std::size_t i) const override { return clips_.at(i).second; }

 private:
  std::vector<std::pair<ClipInfo, std::vector<float>>> clips_;
};

/// Reads WAV files through audio::ingest and canonicalize_length each time a
/// clip is requested.
class FileClipSource : public ClipSource {
 public:
  void add(ClipInfo info, std::filesystem::path path);

  std::size_t size() const override { return clips_.size(); }
  const ClipInfo& info(std::size_t i) const override { return clips_.at(i).first; }
  std::vector<float> samples(std::size_t i) const override;
  const std::filesystem::path& path(std::size_t i) const { return clips_.at(i).second; }

 private:
  std::vector<std::pair<ClipInfo, std::filesystem::path>> clips_;
};

struct SegmentRef {
  std::size_t clip = 0;   // index into the source
  std::size_t index = 0;  // segment number in [0, 21)
  int label = 0;
};

/// All 21 segments of a subset of a source's clips, with a small cache of
/// decoded waveforms for batch assembly.
class SegmentSet {
 public:
  SegmentSet(const ClipSource& source, std::vector<std::size_t> clips,
             std::size_t cache_clips = 8);

  std::size_t size() const { return refs_.size(); }
  const SegmentRef& ref(std::size_t i) const { return refs_.at(i); }
  const std::vector<std::size_t>& clips() const { return clips_; }
  const ClipSource& source() const { return source_; }

  /// Writes the selected segments into an n x 1 x kWindow batch and their
  /// labels into labels. Throws ProtocolError when a segment's label differs
  /// from its clip's label.
  void assemble(std::span<const std::size_t> which, tensor::BasicTensor<float>& batch,
                std::vector<int>& labels) const;

 private:
  const std::vector<float>& waveform(std::size_t clip) const;

  const ClipSource& source_;
  std::vector<std::size_t> clips_;
  std::vector<SegmentRef> refs_;
  std::size_t cache_clips_;
  mutable std::list<std::pair<std::size_t, std::vector<float>>> cache_;
};

/// Clip indices used by one round.
struct RoundData {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Originals of the round's training fold (plus clips derived from them when
/// augment is set), and originals of the validation and test folds. Clips
/// whose origin has no fold assignment throw ProtocolError.
RoundData select_round(const ClipSource& source, const FoldPlan& plan, int round, bool augment);

/// Throws ProtocolError when a validation or test clip is augmented, when
/// any clip sits in a role other than its origin's fold, or when a clip is
/// used in two roles.
void check_no_leakage(const ClipSource& source, const FoldPlan& plan, int round,
                      const RoundData& data);

}  // namespace wavegenre::train
