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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavegenre/audio/augment.hpp"
#include "wavegenre/audio/segment.hpp"
#include "wavegenre/audio/wav.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/io/atomic_file.hpp"
#include "wavegenre/io/checkpoint.hpp"
#include "wavegenre/io/manifest.hpp"
#include "wavegenre/model/architecture.hpp"
#include "wavegenre/train/evaluate.hpp"
#include "wavegenre/train/report.hpp"

namespace wavegenre::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string thousands(std::size_t n) {
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(i, ",");
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

fs::path relative_to(const fs::path& file, const fs::path& dir) {
  const fs::path abs = fs::absolute(file).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(dir).lexically_normal());
  if (rel.empty() || *rel.begin() == "..") return abs;
  return rel;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> genre_order(std::vector<std::string> dirs) {
  const bool all_known = std::all_of(dirs.begin(), dirs.end(), [](const std::string& d) {
    return std::find(io::kGtzanGenres.begin(), io::kGtzanGenres.end(), d) != io::kGtzanGenres.end();
  });
  if (all_known) {
    std::vector<std::string> out;
    for (const char* g : io::kGtzanGenres) {
      if (std::find(dirs.begin(), dirs.end(), g) != dirs.end()) out.push_back(g);
    }
    return out;
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace

int guarded(std::ostream& log, const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericError& e) {
    log << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kNumericError;
  }
}

// ---------------------------------------------------------------- prepare

int prepare(const PrepareOptions& options, std::ostream& out, std::ostream& log) {
  if (!fs::is_directory(options.data_dir)) {
    throw IoError("data directory " + options.data_dir.string() + " does not exist");
  }
  std::vector<std::string> dirs;
  for (const auto& e : fs::directory_iterator(options.data_dir)) {
    if (e.is_directory()) dirs.push_back(e.path().filename().string());
  }
  const auto genres = genre_order(dirs);
  if (genres.size() > train::kGenres) {
    throw ValidationError("found " + std::to_string(genres.size()) +
                          " genre directories; at most 10 are supported");
  }

  io::Manifest manifest;
  manifest.genres = genres;
  manifest.base = options.out.parent_path();
  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> per_genre;
  std::set<std::string> ids;
  for (std::size_t g = 0; g < genres.size(); ++g) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(options.data_dir / genres[g])) {
      if (e.is_regular_file() && lower(e.path().extension().string()) == ".wav") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    per_genre[genres[g]] = 0;
    for (const fs::path& file : files) {
      const std::string id = file.stem().string();
      if (!ids.insert(id).second) {
        warnings.push_back(file.string() + ": duplicate track id " + id);
        continue;
      }
      try {
        const audio::AudioClip clip = audio::ingest(file, id, static_cast<int>(g));
        io::ManifestEntry entry;
        entry.track_id = id;
        entry.path = relative_to(file, manifest.base.empty() ? fs::path(".") : manifest.base);
        entry.genre = static_cast<int>(g);
        entry.duration = clip.samples.size();
        entry.origin = id;
        manifest.entries.push_back(std::move(entry));
        ++per_genre[genres[g]];
      } catch (const IngestError& e) {
        warnings.push_back(e.what());
      } catch (const IoError& e) {
        warnings.push_back(e.what());
      }
    }
  }
  if (manifest.entries.empty()) {
    throw ValidationError("no readable WAV files under " + options.data_dir.string() +
                          " (expected <genre>/<track>.wav)");
  }
  for (const auto& w : warnings) log << "warning: " << w << "\n";

  std::vector<std::string> problems;
  if (!options.any_size) {
    if (genres.size() != train::kGenres) {
      problems.push_back(std::to_string(genres.size()) + " genres instead of 10");
    }
    for (const auto& [genre, n] : per_genre) {
      if (n != train::kTracksPerGenre) {
        problems.push_back(genre + ": " + std::to_string(n) + " tracks instead of 100");
      }
    }
  }
  io::write_manifest(options.out, manifest);
  out << "wrote " << manifest.entries.size() << " entries in " << genres.size() << " genres to "
      << options.out.string() << "\n";
  for (const auto& [genre, n] : per_genre) out << "  " << genre << ": " << n << "\n";
  for (const auto& p : problems) log << "error: " << p << "\n";
  if (!problems.empty()) return kDataError;
  if (!warnings.empty() && !options.lenient) {
    log << "error: " << warnings.size() << " file(s) could not be read\n";
    return kDataError;
  }
  return kOk;
}

// ---------------------------------------------------------------- augment

int augment(const AugmentOptions& options, std::ostream& out, std::ostream& log) {
  io::RunConfig run;
  if (options.config) run = io::read_config(*options.config);
  audio::AugmentationConfig config = run.augmentation;
  config.seed = options.seed.value_or(run.train.seed);
  try {
    audio::validate(config);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  const io::Manifest input = io::read_manifest(options.manifest);
  for (const auto& e : input.entries) {
    if (e.augmented()) {
      throw UsageError(options.manifest.string() + " is already augmented (" + e.track_id + ")");
    }
  }

  const fs::path manifest_path = options.out_dir / "manifest.jsonl";
  io::Manifest output;
  output.genres = input.genres;
  output.seed = config.seed;
  output.augmentation_digest = io::augmentation_digest(config);
  output.base = options.out_dir;

  std::vector<fs::path> written;
  std::size_t warnings = 0;
  try {
    for (const auto& entry : input.entries) {
      const audio::AudioClip clip = audio::ingest(input.resolve(entry), entry.track_id, entry.genre);
      for (auto& aug : audio::augment_clip(clip, config)) {
        io::ManifestEntry e;
        e.track_id = aug.clip.track_id;
        e.genre = entry.genre;
        e.duration = aug.clip.samples.size();
        e.origin = entry.track_id;
        e.transform = std::string(audio::to_string(aug.transform));
        if (aug.transform == audio::Transform::original) {
          e.path = relative_to(input.resolve(entry), options.out_dir);
        } else {
          e.path = fs::path(input.genres[entry.genre]) / (e.track_id + ".wav");
          const fs::path file = options.out_dir / e.path;
          audio::write_wav16(file, aug.clip.samples, audio::kSampleRate);
          written.push_back(file);
        }
        if (aug.warning) {
          ++warnings;
          log << "warning: " << e.track_id << ": " << *aug.warning << "\n";
        }
        output.entries.push_back(std::move(e));
      }
    }
    io::write_manifest(manifest_path, output);
  } catch (...) {
    std::error_code ec;
    for (const auto& f : written) fs::remove(f, ec);
    log << "removed " << written.size() << " partial output file(s)\n";
    throw;
  }
  out << "wrote " << output.entries.size() << " entries (" << input.entries.size()
      << " originals x 6) to " << manifest_path.string() << "\n";
  if (warnings) out << warnings << " warning(s)\n";
  return kOk;
}

// ---------------------------------------------------------------- train / evaluate

namespace {

json fold_json(const train::FoldPlan& plan, bool relaxed) {
  json folds = json::object();
  for (const auto& [id, f] : plan.assignment) folds[id] = f;
  return {{"seed", plan.seed}, {"mode", relaxed ? "relaxed" : "strict"}, {"assignment", folds}};
}

fs::path checkpoint_path(const fs::path& dir, int round) {
  return dir / ("round" + std::to_string(round) + ".ckpt");
}

void write_metrics(const fs::path& dir, const train::Evaluation& ev) {
  io::write_file_atomic(dir / "metrics.json", train::to_json(ev).dump(2) + "\n");
  io::write_file_atomic(dir / "metrics.csv", train::to_csv(ev));
}

void print_summary(std::ostream& out, const train::Evaluation& ev) {
  const auto& s = ev.summary;
  auto pct = [](const train::MeanStd& m) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << 100 * m.mean << " +- " << 100 * m.std;
    return o.str();
  };
  for (const auto& r : ev.rounds) {
    out << "round " << r.round << ": segments " << std::fixed << std::setprecision(2)
        << 100 * r.segment_accuracy << "%, majority " << 100 * r.track_accuracy_majority
        << "%, sum " << 100 * r.track_accuracy_sum << "%, epochs " << r.epochs << " (best "
        << r.best_epoch << ")\n";
  }
  out << ev.architecture << (ev.augment ? " with" : " without") << " augmentation: segments "
      << pct(s.segment) << ", aggregation (" << train::to_string(s.headline) << ") "
      << pct(s.aggregation) << "\n";
}

}  // namespace

int train(const TrainOptions& options, std::ostream& out, std::ostream& log) {
  io::RunConfig run = options.run;
  if (options.from) {
    // Re-testing reproduces the saved run's folds and settings.
    const io::Checkpoint cp = io::read_checkpoint(checkpoint_path(*options.from, run.rounds.front()));
    if (cp.metadata.contains("config")) run = io::parse_config(cp.metadata.at("config"));
  }
  run.validate();
  const io::Manifest manifest = io::read_manifest(options.manifest);
  const bool has_augmented = std::any_of(manifest.entries.begin(), manifest.entries.end(),
                                         [](const auto& e) { return e.augmented(); });
  if (run.train.augment && !has_augmented) {
    throw UsageError("--augment needs an augmented manifest; run 'wavegenre augment' first");
  }

  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();
  const auto tracks = manifest.original_tracks();
  const train::FoldPlan plan = train::make_folds(
      tracks, run.train.seed, run.any_size ? train::FoldMode::relaxed : train::FoldMode::strict);
  const train::FileClipSource source = manifest.clip_source();
  fs::create_directories(options.out_dir);
  io::write_file_atomic(options.out_dir / "folds.json", fold_json(plan, run.any_size).dump(1));

  train::Evaluation ev;
  ev.architecture = run.train.architecture;
  ev.augment = run.train.augment;
  if (options.from) {
    for (int round : run.rounds) {
      const io::Checkpoint cp = io::read_checkpoint(checkpoint_path(*options.from, round));
      if (cp.metadata.value("config_digest", "") != io::config_digest(run)) {
        throw ValidationError("checkpoint for round " + std::to_string(round) +
                              " comes from a different run configuration");
      }
      if (cp.architecture != run.train.architecture) {
        throw UsageError("checkpoint for round " + std::to_string(round) + " holds " +
                         cp.architecture + ", not " + run.train.architecture);
      }
      model::Network<float> net = io::restore_network(cp);
      const auto data = train::select_round(source, plan, round, false);
      train::check_no_leakage(source, plan, round, data);
      train::RoundResult r = train::test_round(net, source, data.test, run.train.micro_batch);
      r.round = round;
      r.epochs = cp.metadata.value("epochs", std::size_t{0});
      r.best_epoch = cp.metadata.value("best_epoch", std::size_t{0});
      log << "round " << round << ": evaluated " << checkpoint_path(*options.from, round).string()
          << "\n";
      ev.rounds.push_back(std::move(r));
    }
    ev.summary = train::summarize(ev.rounds);
  } else {
    std::ofstream progress(options.out_dir / "train.log", std::ios::app);
    const std::string digest = io::config_digest(run);
    train::EvaluationHooks hooks;
    hooks.on_epoch = [&](int round, const train::EpochStats& s) {
      std::ostringstream line;
      line << "round " << round << " epoch " << s.epoch << "/" << run.train.max_epochs
           << std::fixed << std::setprecision(5) << " train_loss " << s.train_loss
           << " train_acc " << s.train_accuracy << " val_loss " << s.validation_loss
           << " val_acc " << s.validation_accuracy << (s.improved ? " *" : "") << "\n";
      log << line.str() << std::flush;
      progress << line.str() << std::flush;
    };
    hooks.on_round = [&](int round, model::Network<float>& net, const train::RoundResult& r) {
      const json meta{{"round", round},
                      {"epochs", r.epochs},
                      {"best_epoch", r.best_epoch},
                      {"seed", train::round_seed(run.train.seed, round)},
                      {"fold_seed", plan.seed},
                      {"config_digest", digest},
                      {"config", io::to_json(run)},
                      {"genres", manifest.genres}};
      io::save_checkpoint(checkpoint_path(options.out_dir, round), net, meta);
      ev.rounds.push_back(r);
      ev.summary = train::summarize(ev.rounds);
      write_metrics(options.out_dir, ev);
    };
    try {
      ev = train::evaluate(source, plan, run.train, run.rounds, hooks);
    } catch (...) {
      if (!ev.rounds.empty()) {
        log << "partial results for " << ev.rounds.size() << " round(s) kept in "
            << (options.out_dir / "metrics.json").string() << "\n";
      }
      throw;
    }
  }
  write_metrics(options.out_dir, ev);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  io::write_file_atomic(options.out_dir / "run_info.json",
                        json{{"started", started_at},
                             {"finished", utc_now()},
                             {"seconds", seconds},
                             {"manifest", options.manifest.string()},
                             {"from_checkpoints", options.from ? options.from->string() : ""}}
                                .dump(2));
  print_summary(out, ev);
  return kOk;
}

// ---------------------------------------------------------------- predict

int predict(const PredictOptions& options, std::ostream& out, std::ostream& log) {
  const io::Checkpoint cp = io::read_checkpoint(options.checkpoint);
  model::Network<float> net = io::restore_network(cp);
  std::vector<std::string> genres(io::kGtzanGenres.begin(), io::kGtzanGenres.end());
  if (cp.metadata.contains("genres")) genres = cp.metadata.at("genres").get<std::vector<std::string>>();
  std::size_t micro_batch = 8;
  if (cp.metadata.contains("config")) {
    micro_batch = cp.metadata.at("config").value("micro_batch", micro_batch);
  }

  audio::AudioClip clip = audio::ingest(options.wav, options.wav.stem().string());
  audio::canonicalize_length(clip);
  const train::PredictionRecord record =
      train::predict_track(net, clip.samples, clip.track_id, {}, micro_batch);

  auto decision = [&](int cls) {
    const std::string name =
        cls >= 0 && static_cast<std::size_t>(cls) < genres.size() ? genres[cls] : "class " + std::to_string(cls);
    return json{{"index", cls}, {"genre", name}};
  };
  const json result{{"track_id", record.track_id},
                    {"architecture", cp.architecture},
                    {"majority", decision(record.majority)},
                    {"sum", decision(record.sum)},
                    {"probabilities", record.probabilities}};
  const std::string text = result.dump(2) + "\n";
  if (options.out) io::write_file_atomic(*options.out, text);
  out << text;
  log << record.track_id << ": " << decision(record.sum).at("genre").get<std::string>()
      << " (sum rule), " << decision(record.majority).at("genre").get<std::string>()
      << " (majority vote)\n";
  return kOk;
}

// ---------------------------------------------------------------- arch-info

int arch_info(const ArchInfoOptions& options, std::ostream& out) {
  std::vector<std::string> names = options.names;
  if (names.empty()) names = model::architecture_names();
  json all = json::array();
  for (const auto& name : names) {
    const auto spec = model::build_architecture(name);
    const auto trace = model::shape_trace(spec);
    const std::size_t count = model::count_parameters(spec);
    const auto published = model::published_parameter_count(name);
    const long long diff = static_cast<long long>(count) - static_cast<long long>(published.parameters);
    const double rel = static_cast<double>(diff) / published.parameters;
    bool has_gammatone = false;
    for (const auto& l : spec.layers) has_gammatone |= l.init == model::Init::gammatone;
    const std::size_t frozen = model::count_parameters(spec, {.include_gammatone = false});

    if (options.json) {
      json layers = json::array();
      for (const auto& t : trace) {
        layers.push_back({{"index", t.index},
                          {"kind", std::string(model::to_string(t.kind))},
                          {"label", t.label},
                          {"shape", t.shape}});
      }
      json entry{{"name", name},
                 {"input_length", spec.input_length},
                 {"parameters", count},
                 {"published_parameters", published.parameters},
                 {"difference", diff},
                 {"relative_difference", rel},
                 {"tolerance", published.tolerance},
                 {"layers", layers}};
      if (has_gammatone) entry["parameters_gammatone_frozen"] = frozen;
      all.push_back(entry);
      continue;
    }

    out << name << " (input 1 x " << spec.input_length << ")\n";
    for (const auto& t : trace) {
      std::string shape;
      for (std::size_t i = 0; i < t.shape.size(); ++i) {
        shape += (i ? " x " : "") + std::to_string(t.shape[i]);
      }
      out << "  " << std::setw(2) << t.index << "  " << std::left << std::setw(34) << t.label
          << std::right << shape << "\n";
    }
    out << "  parameters: " << thousands(count) << "\n";
    out << "  published:  " << thousands(published.parameters);
    if (diff == 0) {
      out << " (exact match)\n";
    } else {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (difference %+lld, %+.3f%%, tolerance %.1f%%)\n", diff,
                    100 * rel, 100 * published.tolerance);
      out << buf;
    }
    if (has_gammatone) {
      out << "  with gammatone weights and biases frozen: " << thousands(frozen) << " trainable\n";
    }
    out << "\n";
  }
  if (options.json) out << all.dump(2) << "\n";
  return kOk;
}

}  // namespace wavegenre::cli
