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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <unistd.h>

#include "spectrum.hpp"
#include "wavegenre/audio/augment.hpp"
#include "wavegenre/audio/loudness.hpp"
#include "wavegenre/audio/resample.hpp"
#include "wavegenre/audio/segment.hpp"
#include "wavegenre/audio/vocoder.hpp"
#include "wavegenre/audio/wav.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"

namespace wavegenre::audio {
namespace {

namespace fs = std::filesystem;
using testing::relative_l2;
using testing::sine;
using testing::spectral_peak;

// Independent little-endian WAV builder for decoder tests.
struct WavBuilder {
  std::uint16_t format = 1;
  std::uint16_t channels = 1;
  std::uint32_t rate = 22050;
  std::uint16_t bits = 16;
  bool extensible = false;
  std::string payload;

  static void le(std::string& s, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  std::string build() const {
    std::string fmt;
    le(fmt, extensible ? 0xFFFE : format, 2);
    le(fmt, channels, 2);
    le(fmt, rate, 4);
    le(fmt, rate * channels * bits / 8, 4);
    le(fmt, channels * bits / 8, 2);
    le(fmt, bits, 2);
    if (extensible) {
      le(fmt, 22, 2);
      le(fmt, bits, 2);
      le(fmt, 0, 4);
      le(fmt, format, 2);
      fmt += std::string("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
    }
    std::string body = "WAVE";
    body += "fmt ";
    le(body, fmt.size(), 4);
    body += fmt;
    body += "LIST";  // an unrelated chunk to skip
    le(body, 3, 4);
    body += std::string("abc\0", 4);
    body += "data";
    le(body, payload.size(), 4);
    body += payload;
    std::string out = "RIFF";
    le(out, body.size(), 4);
    return out + body;
  }
};

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / ("wavegenre_audio_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::vector<float> music_like(std::size_t n, double sr, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> note(110, 880);
  std::normal_distribution<double> hiss(0, 0.01);
  std::vector<float> x(n, 0.0f);
  const std::size_t note_len = static_cast<std::size_t>(0.25 * sr);
  for (std::size_t start = 0; start < n; start += note_len) {
    const double f = note(rng);
    for (std::size_t i = start; i < std::min(n, start + note_len); ++i) {
      const double t = (i - start) / sr;
      const double env = std::exp(-4 * t);
      double v = 0;
      for (int h = 1; h <= 4; ++h) v += std::sin(2 * std::numbers::pi * f * h * i / sr) / h;
      x[i] = static_cast<float>(0.3 * env * v + hiss(rng));
    }
  }
  return x;
}

// ---------------------------------------------------------------- WAV

TEST(Wav, Decodes16BitMonoVerbatim) {
  WavBuilder b;
  for (std::int16_t v : {0, 16384, -32768, 32767}) WavBuilder::le(b.payload, static_cast<std::uint16_t>(v), 2);
  const auto w = decode_wav(b.build());
  ASSERT_EQ(w.samples.size(), 4u);
  EXPECT_EQ(w.channels, 1);
  EXPECT_EQ(w.sample_rate, 22050);
  EXPECT_FLOAT_EQ(w.samples[1], 0.5f);
  EXPECT_FLOAT_EQ(w.samples[2], -1.0f);
  EXPECT_FLOAT_EQ(w.samples[3], 32767.0f / 32768.0f);
}

TEST(Wav, Decodes8And24BitAndFloat) {
  WavBuilder b8;
  b8.bits = 8;
  b8.payload = std::string("\x80\x00\xC0", 3);
  auto w = decode_wav(b8.build());
  EXPECT_FLOAT_EQ(w.samples[0], 0.0f);
  EXPECT_FLOAT_EQ(w.samples[1], -1.0f);
  EXPECT_FLOAT_EQ(w.samples[2], 0.5f);

  WavBuilder b24;
  b24.bits = 24;
  WavBuilder::le(b24.payload, 0x400000, 3);
  WavBuilder::le(b24.payload, 0x800000, 3);
  w = decode_wav(b24.build());
  EXPECT_FLOAT_EQ(w.samples[0], 0.5f);
  EXPECT_FLOAT_EQ(w.samples[1], -1.0f);

  WavBuilder bf;
  bf.format = 3;
  bf.bits = 32;
  bf.extensible = true;
  for (float f : {0.25f, -2.0f}) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    WavBuilder::le(bf.payload, u, 4);
  }
  w = decode_wav(bf.build());
  EXPECT_FLOAT_EQ(w.samples[0], 0.25f);
  EXPECT_FLOAT_EQ(w.samples[1], -1.0f);
}

TEST(Wav, DistinctErrors) {
  EXPECT_THROW(decode_wav("RIFF"), MalformedAudioError);
  EXPECT_THROW(decode_wav(std::string("RIFF\0\0\0\0WAVE", 12)), MalformedAudioError);
  WavBuilder b;
  b.bits = 12;
  b.payload = "abcd";
  EXPECT_THROW(decode_wav(b.build()), UnsupportedFormatError);
  b = {};
  b.channels = 3;
  b.payload = std::string(12, '\0');
  EXPECT_THROW(decode_wav(b.build()), UnsupportedFormatError);
  b = {};
  b.format = 2;  // ADPCM
  b.payload = "abcd";
  EXPECT_THROW(decode_wav(b.build()), UnsupportedFormatError);
  b = {};
  EXPECT_THROW(decode_wav(b.build()), EmptyAudioError);
  EXPECT_THROW(read_wav("/nonexistent/file.wav"), IoError);
}

TEST(Wav, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(-1, 1);
  std::vector<float> x(1000);
  for (float& v : x) v = u(rng);
  const auto w = decode_wav(encode_wav16(x, 22050));
  ASSERT_EQ(w.samples.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(w.samples[i], x[i], 2.0 / 32767);
}

TEST(Ingest, IdentityPathAndStereoMean) {
  const auto dir = temp_dir();
  std::vector<float> x(500);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>(i % 7) / 8.0f;
  write_wav16(dir / "mono.wav", x, 22050);
  const auto clip = ingest(dir / "mono.wav", "t1", 3);
  EXPECT_EQ(clip.samples.size(), 500u);
  EXPECT_EQ(clip.track_id, "t1");
  EXPECT_EQ(clip.genre_label, 3);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(clip.samples[i], x[i], 2.0 / 32767);

  WavBuilder b;
  b.channels = 2;
  for (int i = 0; i < 10; ++i) {
    WavBuilder::le(b.payload, static_cast<std::uint16_t>(8192), 2);
    WavBuilder::le(b.payload, static_cast<std::uint16_t>(-16384), 2);
  }
  io::write_file_atomic(dir / "stereo.wav", b.build());
  const auto s = ingest(dir / "stereo.wav", "t2");
  ASSERT_EQ(s.samples.size(), 10u);
  for (float v : s.samples) EXPECT_FLOAT_EQ(v, (0.25f - 0.5f) / 2);
  fs::remove_all(dir);
}

TEST(Ingest, ResamplesFrom44100KeepingTonePeak) {
  const auto dir = temp_dir();
  write_wav16(dir / "hi.wav", sine(1000, 44100, 88200, 0.8), 44100);
  const auto clip = ingest(dir / "hi.wav", "hi");
  EXPECT_EQ(clip.samples.size(), 44100u);
  const auto peak = spectral_peak(clip.samples, 22050);
  EXPECT_LE(std::abs(peak.frequency - 1000), peak.bin_width);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------- resample

TEST(Resample, PreservesInBandToneAmplitude) {
  const auto x = sine(440, 16000, 16000, 0.5);
  const auto y = resample(x, 16000, 22050);
  ASSERT_EQ(y.size(), 22050u);
  const auto ref = sine(440, 22050, 22050, 0.5);
  double err = 0;
  for (std::size_t i = 200; i + 200 < y.size(); ++i) err = std::max(err, double(std::abs(y[i] - ref[i])));
  EXPECT_LT(err, 2e-3);
}

TEST(Resample, RejectsAboveOutputNyquist) {
  const auto x = sine(15000, 44100, 44100, 0.9);
  const auto y = resample(x, 44100, 22050);
  double rms = 0;
  for (std::size_t i = 500; i + 500 < y.size(); ++i) rms += double(y[i]) * y[i];
  rms = std::sqrt(rms / (y.size() - 1000));
  EXPECT_LT(rms, 0.9 / std::sqrt(2.0) * 0.01);  // at least 40 dB down
}

TEST(Resample, ToLengthAndErrors) {
  const auto x = sine(100, 22050, 1000);
  EXPECT_EQ(resample_to_length(x, 1234).size(), 1234u);
  EXPECT_EQ(resample_to_length(x, 1000), x);
  EXPECT_THROW(resample(x, 0, 22050), ValidationError);
}

// ---------------------------------------------------------------- segments

TEST(Segment, ExactWindowsAcrossClipLengths) {
  std::mt19937_64 rng(17);
  std::vector<std::size_t> lengths{661'490, 661'499, 661'500, 662'500};
  std::uniform_int_distribution<std::size_t> pick(661'490, 662'500);
  for (int i = 0; i < 16; ++i) lengths.push_back(pick(rng));
  for (std::size_t len : lengths) {
    AudioClip clip;
    clip.track_id = "blues.00001";
    clip.genre_label = 0;
    clip.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) clip.samples[i] = static_cast<float>((i * 2654435761u) % 1000) / 1000.0f;
    const auto segs = segment(clip);
    ASSERT_EQ(segs.size(), 21u);
    for (std::size_t k = 0; k < segs.size(); ++k) {
      ASSERT_EQ(segs[k].samples.size(), 110'250u);
      EXPECT_EQ(segs[k].index, k);
      EXPECT_EQ(segs[k].genre_label, 0);
      EXPECT_EQ(segs[k].track_id, "blues.00001");
      for (std::size_t i = 0; i < 110'250; ++i) {
        const std::size_t src = k * 27'562 + i;
        const float expect = src < len ? clip.samples[src] : 0.0f;
        if (segs[k].samples[i] != expect) FAIL() << "len " << len << " seg " << k << " i " << i;
      }
    }
    // Neighbors share exactly window - hop samples.
    EXPECT_EQ(110'250 - 27'562, 82'688);
    EXPECT_TRUE(std::equal(segs[3].samples.begin() + 27'562, segs[3].samples.end(),
                           segs[4].samples.begin()));
  }
}

TEST(Segment, TooShortNamesTrack) {
  AudioClip clip;
  clip.track_id = "jazz.00042";
  clip.samples.resize(661'489);
  try {
    segment(clip);
    FAIL();
  } catch (const TooShortError& e) {
    EXPECT_NE(std::string(e.what()).find("jazz.00042"), std::string::npos);
  }
}

TEST(Segment, Canonicalize) {
  AudioClip clip;
  clip.track_id = "x";
  clip.samples.assign(661'000, 0.5f);
  canonicalize_length(clip);
  EXPECT_EQ(clip.samples.size(), kClipLength);
  EXPECT_EQ(clip.samples.back(), 0.0f);
  clip.samples.assign(700'000, 0.5f);
  canonicalize_length(clip);
  EXPECT_EQ(clip.samples.size(), kClipLength);
  clip.samples.assign(600'000, 0.5f);
  EXPECT_THROW(canonicalize_length(clip), TooShortError);
}

// ---------------------------------------------------------------- loudness

TEST(Loudness, KWeightingMatchesPublished48kCoefficients) {
  const auto k = k_weighting(48000);
  EXPECT_NEAR(k[0].b[0], 1.53512485958697, 1e-8);
  EXPECT_NEAR(k[0].b[1], -2.69169618940638, 1e-8);
  EXPECT_NEAR(k[0].b[2], 1.19839281085285, 1e-8);
  EXPECT_NEAR(k[0].a[1], -1.69065929318241, 1e-8);
  EXPECT_NEAR(k[0].a[2], 0.73248077421585, 1e-8);
  EXPECT_NEAR(k[1].a[1], -1.99004745483398, 1e-8);
  EXPECT_NEAR(k[1].a[2], 0.99007225036621, 1e-8);
}

TEST(Loudness, FullScaleSine997) {
  const auto x = sine(997, 22050, 22050 * 6);
  EXPECT_NEAR(measure_loudness(x, 22050), -3.01, 0.1);
}

TEST(Loudness, SilenceIsNegativeInfinity) {
  std::vector<float> x(22050, 0.0f);
  EXPECT_EQ(measure_loudness(x, 22050), -std::numeric_limits<double>::infinity());
}

TEST(Loudness, TooShortIsValidationError) {
  std::vector<float> x(8819, 0.1f);
  EXPECT_THROW(measure_loudness(x, 22050), ValidationError);
}

TEST(Loudness, Homogeneity) {
  const auto x = music_like(22050 * 8, 22050, 5);
  const double base = measure_loudness(x, 22050);
  std::vector<float> half(x.size());
  const double g = std::pow(10.0, -6.02 / 20);
  for (std::size_t i = 0; i < x.size(); ++i) half[i] = static_cast<float>(x[i] * g);
  EXPECT_NEAR(measure_loudness(half, 22050), base - 6.02, 0.05);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> alpha(0.1, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double a = alpha(rng);
    std::vector<float> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<float>(x[i] * a);
    EXPECT_NEAR(measure_loudness(y, 22050), base + 20 * std::log10(a), 0.05) << a;
  }
}

// ---------------------------------------------------------------- vocoder

TEST(Vocoder, UnitRateIsNearIdentity) {
  const auto x = music_like(22050 * 4, 22050, 9);
  const auto y = time_stretch(x, 1.0);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_LT(relative_l2(y, x), 1e-3);
}

TEST(Vocoder, HalfRateDoublesDuration) {
  const auto x = music_like(22050 * 10, 22050, 10);
  const auto y = time_stretch(x, 0.5);
  EXPECT_NEAR(static_cast<double>(y.size()), 22050.0 * 20, 512);
  EXPECT_EQ(time_stretch(x, 1.5).size(), static_cast<std::size_t>(std::llround(x.size() / 1.5)));
  EXPECT_THROW(time_stretch(x, 0.0), ValidationError);
}

TEST(Vocoder, StretchKeepsPitch) {
  const auto x = sine(440, 22050, 22050 * 4, 0.5);
  for (double r : {0.5, 0.8, 1.3}) {
    const auto y = time_stretch(x, r);
    const auto p = spectral_peak(y, 22050);
    EXPECT_NEAR(p.frequency, 440, 440 * 0.01) << r;
  }
}

TEST(Vocoder, PitchOctaveUpDoublesPeak) {
  const auto x = sine(440, 22050, 22050 * 5, 0.5);
  const auto y = pitch_shift(x, 12);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_NEAR(spectral_peak(y, 22050).frequency, 880, 880 * 0.01);
  EXPECT_NEAR(spectral_peak(pitch_shift(x, -5), 22050).frequency, 440 * std::pow(2, -5 / 12.0),
              4.4);
}

std::vector<float> chord(std::size_t n, double sr) {
  const double f[] = {220, 277.2, 329.6, 440};
  const double phase[] = {0, 1, 2, 0.5};
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / sr;
    double v = 0;
    for (int k = 0; k < 4; ++k) v += 0.2 * std::sin(2 * std::numbers::pi * f[k] * t + phase[k]);
    x[i] = static_cast<float>(v * (1 + 0.3 * std::sin(2 * std::numbers::pi * 0.5 * t)));
  }
  return x;
}

double round_trip_error(const std::vector<float>& x, double r) {
  auto y = time_stretch(time_stretch(x, r), 1.0 / r);
  y.resize(x.size(), 0.0f);
  return relative_l2(y, x);
}

TEST(Vocoder, RoundTripOnTonalSignals) {
  const auto tone = sine(440, 22050, 22050 * 4, 0.5);
  const auto triad = chord(22050 * 4, 22050);
  for (double r = 0.5; r <= 1.501; r += 0.1) {
    EXPECT_LT(round_trip_error(tone, r), 0.15) << r;
    EXPECT_LT(round_trip_error(triad, r), 0.2) << r;
  }
}

// ---------------------------------------------------------------- augment

AudioClip test_clip(std::size_t n = 22050 * 3, std::uint64_t seed = 1) {
  AudioClip c;
  c.track_id = "rock.00007";
  c.genre_label = 9;
  c.samples = music_like(n, 22050, seed);
  return c;
}

TEST(Augment, ZeroGainIsIdentity) {
  const auto c = test_clip();
  EXPECT_EQ(apply_gain(c.samples, 0.0), c.samples);
}

TEST(Augment, ParametersDrawnFromRanges) {
  const auto c = test_clip();
  AugmentationConfig cfg;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    for (Transform t : kAugmentations) {
      const auto a = augment(c, t, cfg, rng);
      EXPECT_EQ(a.clip.genre_label, 9);
      EXPECT_EQ(a.clip.samples.size(), c.samples.size());
      EXPECT_EQ(a.origin_track, "rock.00007");
      for (float v : a.clip.samples) ASSERT_TRUE(v >= -1.0f && v <= 1.0f);
      switch (t) {
        case Transform::noise:
          EXPECT_GE(a.parameter, 0.005);
          EXPECT_LE(a.parameter, 0.02);
          break;
        case Transform::gain:
          EXPECT_GE(a.parameter, -12);
          EXPECT_LE(a.parameter, 12);
          break;
        case Transform::pitch:
          EXPECT_GE(a.parameter, -8);
          EXPECT_LE(a.parameter, 8);
          break;
        case Transform::stretch:
          EXPECT_GE(a.parameter, 0.5);
          EXPECT_LE(a.parameter, 1.5);
          break;
        default:
          break;
      }
    }
  }
}

TEST(Augment, NoiseStandardDeviation) {
  std::vector<float> zero(200'000, 0.0f);
  std::mt19937_64 rng(1);
  const auto y = add_noise(zero, 0.01, rng);
  double s = 0, s2 = 0;
  for (float v : y) {
    s += v;
    s2 += double(v) * v;
  }
  const double mean = s / y.size();
  EXPECT_NEAR(mean, 0, 1e-4);
  EXPECT_NEAR(std::sqrt(s2 / y.size() - mean * mean), 0.01, 1e-4);
}

TEST(Augment, LoudnessReachesTarget) {
  const auto c = test_clip(22050 * 6);
  AugmentationConfig cfg;
  std::mt19937_64 rng(0);
  const auto a = augment(c, Transform::loudness, cfg, rng);
  EXPECT_FALSE(a.warning.has_value());
  EXPECT_NEAR(measure_loudness(a.clip.samples, 22050), -23.0, 0.05);
}

TEST(Augment, LoudnessOnSilenceWarns) {
  AudioClip c;
  c.track_id = "silent";
  c.samples.assign(22050, 0.0f);
  std::mt19937_64 rng(0);
  const auto a = augment(c, Transform::loudness, {}, rng);
  ASSERT_TRUE(a.warning.has_value());
  EXPECT_EQ(a.clip.samples, c.samples);
}

TEST(Augment, ClipProducesSixTaggedDeterministicEntries) {
  const auto c = test_clip();
  AugmentationConfig cfg;
  cfg.seed = 42;
  const auto a = augment_clip(c, cfg);
  const auto b = augment_clip(c, cfg);
  ASSERT_EQ(a.size(), 6u);
  const Transform tags[] = {Transform::original, Transform::noise, Transform::gain,
                            Transform::loudness, Transform::pitch, Transform::stretch};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a[i].transform, tags[i]);
    EXPECT_EQ(a[i].clip.samples, b[i].clip.samples);
    EXPECT_EQ(a[i].parameter, b[i].parameter);
  }
  EXPECT_EQ(a[0].clip.samples, c.samples);
  EXPECT_EQ(a[4].clip.track_id, "rock.00007.pitch");
  cfg.seed = 43;
  EXPECT_NE(augment_clip(c, cfg)[1].clip.samples, a[1].clip.samples);
}

TEST(Augment, SeedDerivationIsOrderFreeAndDistinct) {
  EXPECT_EQ(derive_seed(1, "a", Transform::noise), derive_seed(1, "a", Transform::noise));
  EXPECT_NE(derive_seed(1, "a", Transform::noise), derive_seed(1, "a", Transform::gain));
  EXPECT_NE(derive_seed(1, "a", Transform::noise), derive_seed(1, "b", Transform::noise));
  EXPECT_NE(derive_seed(1, "a", Transform::noise), derive_seed(2, "a", Transform::noise));
  EXPECT_NE(derive_seed(1, "ab", Transform::noise), derive_seed(1, "a", Transform::noise));
}

TEST(Augment, DatasetSixfoldAndAbortOnFailure) {
  std::vector<AudioClip> clips;
  for (int i = 0; i < 3; ++i) {
    clips.push_back(test_clip(22050, i));
    clips.back().track_id = "t" + std::to_string(i);
  }
  std::vector<AugmentedClip> out;
  const auto summary = augment_dataset(clips, {}, [&](AugmentedClip&& a) { out.push_back(std::move(a)); });
  EXPECT_EQ(out.size(), 18u);
  EXPECT_EQ(summary.produced, 18u);
  EXPECT_EQ(summary.clips, 3u);

  clips[1].samples.resize(100);  // too short to measure loudness
  out.clear();
  try {
    augment_dataset(clips, {}, [&](AugmentedClip&& a) { out.push_back(std::move(a)); });
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("t1"), std::string::npos);
    EXPECT_NE(msg.find("loudness"), std::string::npos);
  }
}

TEST(Augment, ConfigValidation) {
  AugmentationConfig cfg;
  cfg.stretch_rate = {0.0, 1.5};
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = {};
  cfg.gain_db = {3, -3};
  EXPECT_THROW(validate(cfg), ValidationError);
  EXPECT_EQ(parse_transform("pitch"), Transform::pitch);
  EXPECT_THROW(parse_transform("reverb"), ValidationError);
}

}  // namespace
}  // namespace wavegenre::audio
