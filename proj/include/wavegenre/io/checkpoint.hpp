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
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavegenre/model/network.hpp"

namespace wavegenre::io {

inline constexpr char kCheckpointMagic[4] = {'W', '1', 'D', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Little-endian layout: magic "W1DC", u32 version, u16 length + name of
/// the architecture, u32 tensor count, then per tensor u16 length + name,
/// u8 rank, u64 dims and float32 data; finally u32 length + JSON metadata.
struct Checkpoint {
  std::string architecture;
  std::vector<std::pair<std::string, tensor::BasicTensor<float>>> tensors;
  nlohmann::json metadata = nlohmann::json::object();
};

std::string encode_checkpoint(model::Network<float>& net, const nlohmann::json& metadata);

/// Throws ValidationError for bad magic, unknown versions, truncation or
/// trailing bytes.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, model::Network<float>& net,
                     const nlohmann::json& metadata);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Copies the checkpoint's tensors into net after checking that the
/// architecture name, tensor names and shapes all match. Throws
/// ValidationError or ShapeError without modifying net on mismatch.
void load_into(model::Network<float>& net, const Checkpoint& checkpoint);

/// Builds the named architecture and loads the checkpoint into it.
model::Network<float> restore_network(const Checkpoint& checkpoint);

}  // namespace wavegenre::io
