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

#include "wavegenre/audio/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "wavegenre/audio/resample.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"

namespace wavegenre::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }

std::uint32_t u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Format {
  std::uint16_t code = 0;
  int channels = 0;
  std::uint32_t rate = 0;
  int bits = 0;
  int block_align = 0;
};

Format parse_fmt(const unsigned char* p, std::uint32_t size) {
  if (size < 16) throw MalformedAudioError("fmt chunk is " + std::to_string(size) + " bytes");
  Format f;
  f.code = u16(p);
  f.channels = u16(p + 2);
  f.rate = u32(p + 4);
  f.block_align = u16(p + 12);
  f.bits = u16(p + 14);
  if (f.code == kFormatExtensible) {
    if (size < 40) throw MalformedAudioError("extensible fmt chunk is too short");
    f.code = u16(p + 24);  // first two bytes of the subformat GUID
  }
  return f;
}

}  // namespace

WavData decode_wav(std::string_view bytes) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  if (n < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw MalformedAudioError("not a RIFF/WAVE file");
  }
  std::optional<Format> fmt;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char* id = data + pos;
    const std::uint32_t size = u32(data + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (body + size > n) throw MalformedAudioError("fmt chunk runs past end of file");
      fmt = parse_fmt(data + body, size);
    } else if (std::memcmp(id, "data", 4) == 0) {
      payload = data + body;
      // Streamed writers leave the size unset; take what is there.
      payload_size = std::min<std::size_t>(size, n - body);
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!fmt) throw MalformedAudioError("missing fmt chunk");
  if (!payload) throw MalformedAudioError("missing data chunk");

  const Format& f = *fmt;
  const bool pcm = f.code == kFormatPcm && (f.bits == 8 || f.bits == 16 || f.bits == 24);
  const bool flt = f.code == kFormatFloat && f.bits == 32;
  if (!pcm && !flt) {
    throw UnsupportedFormatError("unsupported WAV encoding: format " + std::to_string(f.code) +
                                 ", " + std::to_string(f.bits) + " bits");
  }
  if (f.channels < 1 || f.channels > 2) {
    throw UnsupportedFormatError("unsupported channel count " + std::to_string(f.channels));
  }
  if (f.rate == 0) throw MalformedAudioError("sample rate is zero");
  const int width = f.bits / 8;
  if (f.block_align != width * f.channels) {
    throw MalformedAudioError("block alignment " + std::to_string(f.block_align) +
                              " does not match " + std::to_string(f.channels) + " x " +
                              std::to_string(f.bits) + "-bit samples");
  }
  const std::size_t frames = payload_size / f.block_align;
  if (frames == 0) throw EmptyAudioError("WAV data chunk holds no samples");

  WavData out;
  out.channels = f.channels;
  out.sample_rate = f.rate;
  out.bits_per_sample = f.bits;
  out.samples.resize(frames * f.channels);
  const unsigned char* p = payload;
  for (float& s : out.samples) {
    switch (f.bits) {
      case 8:
        s = (static_cast<int>(p[0]) - 128) / 128.0f;
        break;
      case 16:
        s = static_cast<std::int16_t>(u16(p)) / 32768.0f;
        break;
      case 24: {
        std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
        if (v & 0x800000) v -= 0x1000000;
        s = static_cast<float>(v / 8388608.0);
        break;
      }
      default: {
        const std::uint32_t bits = u32(p);
        float v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) throw MalformedAudioError("non-finite float sample");
        s = std::clamp(v, -1.0f, 1.0f);
      }
    }
    p += width;
  }
  return out;
}

WavData read_wav(const std::filesystem::path& path) {
  const std::string bytes = io::read_file(path);
  try {
    return decode_wav(bytes);
  } catch (const MalformedAudioError& e) {
    throw MalformedAudioError(path.string() + ": " + e.what());
  } catch (const UnsupportedFormatError& e) {
    throw UnsupportedFormatError(path.string() + ": " + e.what());
  } catch (const EmptyAudioError& e) {
    throw EmptyAudioError(path.string() + ": " + e.what());
  }
}

AudioClip ingest(const std::filesystem::path& path, std::string track_id,
                 std::optional<int> genre_label) {
  WavData wav = read_wav(path);
  std::vector<float> mono(wav.samples.size() / wav.channels);
  for (std::size_t i = 0; i < mono.size(); ++i) {
    float acc = 0;
    for (int c = 0; c < wav.channels; ++c) acc += wav.samples[i * wav.channels + c];
    mono[i] = acc / wav.channels;
  }
  AudioClip clip;
  clip.track_id = std::move(track_id);
  clip.genre_label = genre_label;
  clip.sample_rate = kSampleRate;
  clip.samples = wav.sample_rate == kSampleRate ? std::move(mono)
                                                : resample(mono, wav.sample_rate, kSampleRate);
  return clip;
}

std::string encode_wav16(std::span<const float> samples, double sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate));
  std::string s;
  s.reserve(44 + data_bytes);
  s += "RIFF";
  put32(s, 36 + data_bytes);
  s += "WAVEfmt ";
  put32(s, 16);
  put16(s, kFormatPcm);
  put16(s, 1);
  put32(s, rate);
  put32(s, rate * 2);
  put16(s, 2);
  put16(s, 16);
  s += "data";
  put32(s, data_bytes);
  for (float x : samples) {
    const float c = std::clamp(x, -1.0f, 1.0f);
    put16(s, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0f))));
  }
  return s;
}

void write_wav16(const std::filesystem::path& path, std::span<const float> samples,
                 double sample_rate) {
  io::write_file_atomic(path, encode_wav16(samples, sample_rate));
}

}  // namespace wavegenre::audio
