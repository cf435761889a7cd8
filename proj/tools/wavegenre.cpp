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

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "wavegenre/errors.hpp"

namespace {

using namespace wavegenre;
namespace fs = std::filesystem;

std::vector<int> parse_rounds(const std::string& text) {
  std::vector<int> rounds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      rounds.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--rounds expects a comma-separated list such as 1,2,3; got '" + text + "'");
    }
  }
  return rounds;
}

struct TrainFlags {
  std::string manifest;
  std::string out_dir = "run";
  std::string config;
  std::string from;
  std::string arch;
  std::string rounds;
  bool augment = false;
  bool any_size = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> patience, max_epochs, batch_size, micro_batch;
  std::optional<double> learning_rate;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("manifest", f.manifest, "Dataset manifest (JSON Lines)")->required();
  cmd->add_option("-o,--out", f.out_dir, "Output directory for checkpoints and metrics");
  cmd->add_option("--config", f.config, "JSON config; flags override its values");
  cmd->add_option("--arch", f.arch, "Architecture name (see arch-info)");
  cmd->add_flag("--augment", f.augment, "Train on the augmented training fold");
  cmd->add_option("--seed", f.seed, "Seed for folds, initialization and shuffling");
  cmd->add_option("--rounds", f.rounds, "Rounds to run, e.g. 1,2,3");
  cmd->add_option("--patience", f.patience, "Early-stopping patience in epochs");
  cmd->add_option("--max-epochs", f.max_epochs, "Upper bound on epochs per round");
  cmd->add_option("--batch-size", f.batch_size, "Segments per optimizer step");
  cmd->add_option("--micro-batch", f.micro_batch, "Segments per forward pass");
  cmd->add_option("--lr", f.learning_rate, "Adam learning rate");
  cmd->add_flag("--any-size", f.any_size, "Allow corpora other than 10 genres x 100 tracks");
}

cli::TrainOptions resolve(const TrainFlags& f) {
  cli::TrainOptions o;
  o.manifest = f.manifest;
  o.out_dir = f.out_dir;
  if (!f.config.empty()) o.run = io::read_config(f.config);
  auto& t = o.run.train;
  if (!f.arch.empty()) t.architecture = f.arch;
  if (f.augment) t.augment = true;
  if (f.any_size) o.run.any_size = true;
  if (f.seed) t.seed = *f.seed;
  if (f.patience) t.patience = *f.patience;
  if (f.max_epochs) t.max_epochs = *f.max_epochs;
  if (f.batch_size) t.batch_size = *f.batch_size;
  if (f.micro_batch) t.micro_batch = *f.micro_batch;
  if (f.learning_rate) t.learning_rate = *f.learning_rate;
  if (!f.rounds.empty()) o.run.rounds = parse_rounds(f.rounds);
  if (!f.from.empty()) o.from = fs::path(f.from);
  o.run.validate();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raw-waveform music genre classification"};
  app.require_subcommand(1);

  cli::PrepareOptions prep;
  std::string prep_dir;
  std::string prep_out = "manifest.jsonl";
  auto* prepare = app.add_subcommand("prepare", "Scan <genre>/<track>.wav into a manifest");
  prepare->add_option("data_dir", prep_dir, "Dataset root (default: $WAVEGENRE_DATA_ROOT)");
  prepare->add_option("-o,--out", prep_out, "Manifest to write");
  prepare->add_flag("--any-size", prep.any_size, "Accept genre counts other than 10 x 100");
  prepare->add_flag("--lenient", prep.lenient, "Skip unreadable files without failing");

  cli::AugmentOptions aug;
  std::string aug_manifest, aug_out = "augmented", aug_config;
  auto* augment = app.add_subcommand("augment", "Write five augmented copies of every clip");
  augment->add_option("manifest", aug_manifest, "Manifest of original clips")->required();
  augment->add_option("-o,--out", aug_out, "Output directory");
  augment->add_option("--seed", aug.seed, "Augmentation seed");
  augment->add_option("--config", aug_config, "JSON config with augmentation ranges");

  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "Train and test the three-fold protocol");
  add_train_flags(train, train_flags);

  TrainFlags eval_flags;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Run the protocol, or re-test saved checkpoints with --from");
  add_train_flags(evaluate, eval_flags);
  evaluate->add_option("--from", eval_flags.from, "Directory holding round<N>.ckpt files");

  cli::PredictOptions pred;
  std::string pred_ckpt, pred_wav, pred_out;
  auto* predict = app.add_subcommand("predict", "Classify one WAV file");
  predict->add_option("checkpoint", pred_ckpt, "Checkpoint file")->required();
  predict->add_option("wav", pred_wav, "WAV file of at least 30 s")->required();
  predict->add_option("-o,--out", pred_out, "Also write the JSON result here");

  cli::ArchInfoOptions info;
  auto* arch_info = app.add_subcommand("arch-info", "Print layer shapes and parameter counts");
  arch_info->add_option("names", info.names, "Architectures (default: all)");
  arch_info->add_flag("--json", info.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  return cli::guarded(std::cerr, [&]() -> int {
    if (*prepare) {
      if (prep_dir.empty()) {
        const char* root = std::getenv("WAVEGENRE_DATA_ROOT");
        if (!root || !*root) throw UsageError("no data directory given and WAVEGENRE_DATA_ROOT is unset");
        prep_dir = root;
      }
      prep.data_dir = prep_dir;
      prep.out = prep_out;
      return cli::prepare(prep, std::cout, std::cerr);
    }
    if (*augment) {
      aug.manifest = aug_manifest;
      aug.out_dir = aug_out;
      if (!aug_config.empty()) aug.config = fs::path(aug_config);
      return cli::augment(aug, std::cout, std::cerr);
    }
    if (*train) return cli::train(resolve(train_flags), std::cout, std::cerr);
    if (*evaluate) return cli::train(resolve(eval_flags), std::cout, std::cerr);
    if (*predict) {
      pred.checkpoint = pred_ckpt;
      pred.wav = pred_wav;
      if (!pred_out.empty()) pred.out = fs::path(pred_out);
      return cli::predict(pred, std::cout, std::cerr);
    }
    return cli::arch_info(info, std::cout);
  });
}
