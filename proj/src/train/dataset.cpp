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

#include "wavegenre/train/dataset.hpp"

#include <algorithm>
#include <set>

#include "wavegenre/audio/segment.hpp"
#include "wavegenre/audio/wav.hpp"
#include "wavegenre/errors.hpp"

namespace wavegenre::train {

void MemoryClipSource::add(ClipInfo info, std::vector<float> samples) {
  clips_.emplace_back(std::move(info), std::move(samples));
}

void FileClipSource::add(ClipInfo info, std::filesystem::path path) {
  clips_.emplace_back(std::move(info), std::move(path));
}

std::vector<float> FileClipSource::samples(std::size_t i) const {
  const auto& [info, path] = clips_.at(i);
  audio::AudioClip clip = audio::ingest(path, info.track_id, info.label);
  audio::canonicalize_length(clip);
  return std::move(clip.samples);
}

SegmentSet::SegmentSet(const ClipSource& source, std::vector<std::size_t> clips,
                       std::size_t cache_clips)
    : source_(source), clips_(std::move(clips)), cache_clips_(std::max<std::size_t>(1, cache_clips)) {
  refs_.reserve(clips_.size() * audio::kSegmentsPerClip);
  for (std::size_t c : clips_) {
    const int label = source_.info(c).label;
    for (std::size_t k = 0; k < audio::kSegmentsPerClip; ++k) refs_.push_back({c, k, label});
  }
}

const std::vector<float>& SegmentSet::waveform(std::size_t clip) const {
  for (auto it = cache_.begin(); it != cache_.end(); ++it) {
    if (it->first == clip) {
      cache_.splice(cache_.begin(), cache_, it);
      return cache_.front().second;
    }
  }
  cache_.emplace_front(clip, source_.samples(clip));
  if (cache_.size() > cache_clips_) cache_.pop_back();
  return cache_.front().second;
}

void SegmentSet::assemble(std::span<const std::size_t> which, tensor::BasicTensor<float>& batch,
                          std::vector<int>& labels) const {
  const std::size_t n = which.size();
  if (batch.shape() != tensor::Shape{n, 1, audio::kWindow}) {
    batch = tensor::BasicTensor<float>({n, 1, audio::kWindow});
  }
  labels.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    const SegmentRef& r = refs_.at(which[b]);
    const ClipInfo& info = source_.info(r.clip);
    if (r.label != info.label) {
      throw ProtocolError("segment " + std::to_string(r.index) + " of " + info.track_id +
                          " carries label " + std::to_string(r.label) + ", track label is " +
                          std::to_string(info.label));
    }
    audio::copy_segment(waveform(r.clip), r.index,
                        std::span<float>(batch.ptr() + b * audio::kWindow, audio::kWindow),
                        info.track_id);
    labels[b] = r.label;
  }
}

RoundData select_round(const ClipSource& source, const FoldPlan& plan, int round, bool augment) {
  const Round& r = plan.round(round);
  RoundData data;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const ClipInfo& info = source.info(i);
    const int fold = plan.fold_of(info.origin);
    if (fold == 0) throw ProtocolError("clip " + info.track_id + " has no fold assignment");
    if (fold == r.train) {
      if (!info.augmented() || augment) data.train.push_back(i);
    } else if (!info.augmented()) {
      (fold == r.validation ? data.validation : data.test).push_back(i);
    }
  }
  return data;
}

void check_no_leakage(const ClipSource& source, const FoldPlan& plan, int round,
                      const RoundData& data) {
  const Round& r = plan.round(round);
  std::set<std::size_t> used;
  auto check = [&](const std::vector<std::size_t>& clips, int fold, const char* role,
                   bool allow_augmented) {
    for (std::size_t i : clips) {
      const ClipInfo& info = source.info(i);
      if (!used.insert(i).second) {
        throw ProtocolError("clip " + info.track_id + " is used in more than one role");
      }
      if (info.augmented() && !allow_augmented) {
        throw ProtocolError(std::string("augmented clip ") + info.track_id + " in " + role +
                            " data");
      }
      if (plan.fold_of(info.origin) != fold) {
        throw ProtocolError("clip " + info.track_id + " from fold " +
                            std::to_string(plan.fold_of(info.origin)) + " in " + role +
                            " fold " + std::to_string(fold));
      }
    }
  };
  check(data.train, r.train, "training", true);
  check(data.validation, r.validation, "validation", false);
  check(data.test, r.test, "test", false);
}

}  // namespace wavegenre::train
