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

#include "wavegenre/io/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"
#include "wavegenre/model/architecture.hpp"

namespace wavegenre::io {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

namespace {

template <typename U>
void put(std::string& out, U value) {
  char buf[sizeof(U)];
  std::memcpy(buf, &value, sizeof(U));
  out.append(buf, sizeof(U));
}

void put_string16(std::string& out, std::string_view s) {
  if (s.size() > 0xFFFF) throw ValidationError("name too long for checkpoint: " + std::string(s));
  put<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename U>
  U get(const char* what) {
    U value;
    std::memcpy(&value, take(sizeof(U), what), sizeof(U));
    return value;
  }

  std::string string16(const char* what) {
    const auto n = get<std::uint16_t>(what);
    return std::string(take(n, what), n);
  }

  const char* take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw ValidationError(std::string("checkpoint truncated while reading ") + what);
    }
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(model::Network<float>& net, const nlohmann::json& metadata) {
  std::string out(kCheckpointMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string16(out, net.spec().name);
  const auto tensors = net.tensors();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    put_string16(out, t.name);
    const auto& shape = t.tensor->shape();
    put<std::uint8_t>(out, static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) put<std::uint64_t>(out, d);
    const auto data = t.tensor->data();
    out.append(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(float));
  }
  const std::string meta = metadata.dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out += meta;
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader in(bytes);
  if (std::memcmp(in.take(4, "magic"), kCheckpointMagic, 4) != 0) {
    throw ValidationError("not a wavegenre checkpoint (bad magic)");
  }
  const auto version = in.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint cp;
  cp.architecture = in.string16("architecture name");
  const auto count = in.get<std::uint32_t>("tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = in.string16("tensor name");
    const auto rank = in.get<std::uint8_t>("tensor rank");
    tensor::Shape shape(rank);
    std::size_t size = 1;
    for (auto& d : shape) {
      d = static_cast<std::size_t>(in.get<std::uint64_t>("tensor dims"));
      if (d != 0 && size > (std::size_t{1} << 40) / d) {
        throw ValidationError("tensor " + name + " is implausibly large");
      }
      size *= d;
    }
    tensor::BasicTensor<float> t(shape);
    std::memcpy(t.data().data(), in.take(size * sizeof(float), "tensor data"),
                size * sizeof(float));
    cp.tensors.emplace_back(std::move(name), std::move(t));
  }
  const auto meta_len = in.get<std::uint32_t>("metadata length");
  const char* meta = in.take(meta_len, "metadata");
  if (!in.done()) throw ValidationError("trailing bytes after checkpoint metadata");
  try {
    cp.metadata = nlohmann::json::parse(std::string_view(meta, meta_len));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint metadata is not JSON: ") + e.what());
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, model::Network<float>& net,
                     const nlohmann::json& metadata) {
  write_file_atomic(path, encode_checkpoint(net, metadata));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_checkpoint(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void load_into(model::Network<float>& net, const Checkpoint& checkpoint) {
  if (checkpoint.architecture != net.spec().name) {
    throw ValidationError("checkpoint holds " + checkpoint.architecture + ", network is " +
                          net.spec().name);
  }
  const auto tensors = net.tensors();
  if (tensors.size() != checkpoint.tensors.size()) {
    throw ValidationError("checkpoint has " + std::to_string(checkpoint.tensors.size()) +
                          " tensors, " + net.spec().name + " needs " +
                          std::to_string(tensors.size()));
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& [name, t] = checkpoint.tensors[i];
    if (name != tensors[i].name) {
      throw ValidationError("checkpoint tensor " + std::to_string(i) + " is " + name +
                            ", expected " + tensors[i].name);
    }
    if (t.shape() != tensors[i].tensor->shape()) {
      throw ShapeError("checkpoint tensor " + name + " has shape " + tensor::to_string(t.shape()) +
                       ", expected " + tensor::to_string(tensors[i].tensor->shape()));
    }
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto src = checkpoint.tensors[i].second.data();
    std::copy(src.begin(), src.end(), tensors[i].tensor->data().begin());
  }
}

model::Network<float> restore_network(const Checkpoint& checkpoint) {
  const auto names = model::architecture_names();
  if (std::find(names.begin(), names.end(), checkpoint.architecture) == names.end()) {
    throw ValidationError("checkpoint names unknown architecture " + checkpoint.architecture);
  }
  model::Network<float> net(model::build_architecture(checkpoint.architecture), 0);
  load_into(net, checkpoint);
  return net;
}

}  // namespace wavegenre::io
