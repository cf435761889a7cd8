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

#include <cstring>
#include <filesystem>
#include <random>

#include "wavegenre/errors.hpp"
#include "wavegenre/io/checkpoint.hpp"
#include "wavegenre/io/config.hpp"
#include "wavegenre/io/digest.hpp"
#include "wavegenre/io/manifest.hpp"
#include "wavegenre/model/architecture.hpp"

namespace wavegenre::io {
namespace {

using nlohmann::json;

model::Network<float> perturbed(const char* arch, std::uint64_t seed) {
  model::Network<float> net(model::build_architecture(arch), seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> d(0.f, 1.f);
  for (auto& t : net.tensors()) {
    for (std::size_t i = 0; i < t.tensor->size(); ++i) (*t.tensor)[i] += 0.1f * d(rng);
  }
  return net;
}

bool bit_equal(model::Network<float>& a, model::Network<float>& b) {
  auto ta = a.tensors();
  auto tb = b.tensors();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].name != tb[i].name || ta[i].tensor->shape() != tb[i].tensor->shape()) return false;
    if (std::memcmp(ta[i].tensor->ptr(), tb[i].tensor->ptr(),
                    ta[i].tensor->size() * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  for (const char* arch : {"dieleman", "pons_scale", "koerich"}) {
    auto net = perturbed(arch, 3);
    const json meta = {{"round", 2}, {"note", "x"}};
    const auto bytes = encode_checkpoint(net, meta);
    const auto ck = decode_checkpoint(bytes);
    EXPECT_EQ(ck.architecture, arch);
    EXPECT_EQ(ck.metadata, meta);
    auto restored = restore_network(ck);
    EXPECT_TRUE(bit_equal(net, restored)) << arch;
    EXPECT_EQ(encode_checkpoint(restored, meta), bytes);
  }
}

TEST(Checkpoint, InferenceMatchesAfterReload) {
  auto net = perturbed("dieleman", 5);
  auto restored = restore_network(decode_checkpoint(encode_checkpoint(net, json::object())));
  tensor::BasicTensor<float> x({2, 1, 110250});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng);
  const auto a = net.infer(x);
  const auto b = restored.infer(x);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.ptr(), b.ptr(), a.size() * sizeof(float)), 0);
}

TEST(Checkpoint, CorruptionIsRejected) {
  auto net = perturbed("dieleman", 1);
  const auto bytes = encode_checkpoint(net, {{"k", 1}});
  for (std::size_t cut : {0ul, 3ul, 4ul, 9ul, 40ul, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(decode_checkpoint(std::string_view(bytes).substr(0, cut)), ValidationError) << cut;
  }
  EXPECT_THROW(decode_checkpoint(bytes + "x"), ValidationError);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad), ValidationError);
  bad = bytes;
  bad[4] = 7;
  EXPECT_THROW(decode_checkpoint(bad), ValidationError);
}

TEST(Checkpoint, MismatchedArchitectureLeavesNetworkUntouched) {
  auto net = perturbed("dieleman", 1);
  auto other = perturbed("pons_scale", 2);
  const auto before = encode_checkpoint(other, json::object());
  const auto ck = decode_checkpoint(encode_checkpoint(net, json::object()));
  EXPECT_THROW(load_into(other, ck), ValidationError);
  EXPECT_EQ(encode_checkpoint(other, json::object()), before);

  auto renamed = ck;
  renamed.tensors.back().second = tensor::BasicTensor<float>({3});
  auto target = perturbed("dieleman", 9);
  const auto target_before = encode_checkpoint(target, json::object());
  EXPECT_ANY_THROW(load_into(target, renamed));
  EXPECT_EQ(encode_checkpoint(target, json::object()), target_before);
}

Manifest sample_manifest() {
  Manifest m;
  m.genres = {"blues", "rock"};
  m.seed = 12;
  m.augmentation_digest = "abc";
  m.entries.push_back({"blues.00000", "blues/blues.00000.wav", 0, 661500, "blues.00000", "original"});
  m.entries.push_back({"rock.00000", "/abs/rock.00000.wav", 1, 661794, "rock.00000", "original"});
  m.entries.push_back({"rock.00000.pitch", "aug/rock.00000.pitch.wav", 1, 661500, "rock.00000", "pitch"});
  return m;
}

TEST(Manifest, SerializeParseRoundTrip) {
  const auto m = sample_manifest();
  const auto text = serialize(m);
  const auto back = parse_manifest(text, "/data");
  EXPECT_EQ(back.genres, m.genres);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.augmentation_digest, "abc");
  ASSERT_EQ(back.entries.size(), 3u);
  EXPECT_EQ(back.entries[2].origin, "rock.00000");
  EXPECT_TRUE(back.entries[2].augmented());
  EXPECT_EQ(back.resolve(back.entries[0]), std::filesystem::path("/data/blues/blues.00000.wav"));
  EXPECT_EQ(back.resolve(back.entries[1]), std::filesystem::path("/abs/rock.00000.wav"));
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(back.original_tracks().size(), 2u);
  EXPECT_NE(back.find("rock.00000.pitch"), nullptr);
  EXPECT_EQ(back.find("nope"), nullptr);
}

TEST(Manifest, ValidationFailures) {
  auto dup = sample_manifest();
  dup.entries.push_back(dup.entries[0]);
  EXPECT_THROW(validate(dup), ValidationError);

  auto range = sample_manifest();
  range.entries[0].genre = 2;
  EXPECT_THROW(validate(range), ValidationError);

  auto orphan = sample_manifest();
  orphan.entries[2].origin = "rock.00099";
  EXPECT_THROW(validate(orphan), ValidationError);

  auto relabeled = sample_manifest();
  relabeled.entries[2].genre = 0;
  EXPECT_THROW(validate(relabeled), ValidationError);
}

TEST(Manifest, MalformedLinesReportLineNumbers) {
  auto text = serialize(sample_manifest());
  const auto pos = text.find('\n', text.find('\n') + 1);
  text.insert(pos + 1, "{not json\n");
  try {
    parse_manifest(text, "/");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_manifest("", "/"), ValidationError);
  EXPECT_THROW(parse_manifest(R"({"format":"other","version":1})" "\n", "/"), ValidationError);
}

TEST(Config, ParsesFlatKeysAndRejectsUnknown) {
  const auto c = parse_config(json::parse(R"({"architecture":"dieleman","max_epochs":3,
      "rounds":[2],"pitch_min":-2,"pitch_max":2,"augment":true,"seed":5})"));
  EXPECT_EQ(c.train.architecture, "dieleman");
  EXPECT_EQ(c.train.max_epochs, 3u);
  EXPECT_EQ(c.rounds, std::vector<int>{2});
  EXPECT_EQ(c.augmentation.pitch_semitones.lo, -2.0);
  EXPECT_TRUE(c.train.augment);
  EXPECT_EQ(c.train.seed, 5u);
  EXPECT_EQ(c.train.batch_size, 80u);

  EXPECT_THROW(parse_config(json::parse(R"({"epochs":3})")), UsageError);
  EXPECT_THROW(parse_config(json::parse(R"({"max_epochs":-1})")), UsageError);
  EXPECT_THROW(parse_config(json::parse(R"({"max_epochs":"3"})")), UsageError);
  EXPECT_THROW(parse_config(json::parse("[1]")), UsageError);
}

TEST(Config, JsonRoundTripAndDigests) {
  RunConfig c;
  c.train.architecture = "sample_cnn";
  c.train.learning_rate = 3e-4;
  c.rounds = {1, 3};
  const auto back = parse_config(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_digest(back), config_digest(c));
  EXPECT_EQ(config_digest(c).size(), 64u);
  auto changed = c;
  changed.train.patience = 11;
  EXPECT_NE(config_digest(changed), config_digest(c));

  audio::AugmentationConfig a;
  auto b = a;
  EXPECT_EQ(augmentation_digest(a), augmentation_digest(b));
  b.seed = 1;
  EXPECT_NE(augmentation_digest(a), augmentation_digest(b));
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace wavegenre::io
