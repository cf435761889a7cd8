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

#include "wavegenre/train/report.hpp"

#include <charconv>
#include <sstream>

namespace wavegenre::train {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::json mean_std_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

}  // namespace

nlohmann::json to_json(const Evaluation& evaluation) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const RoundResult& r : evaluation.rounds) {
    nlohmann::json history = nlohmann::json::array();
    for (const EpochStats& e : r.history.epochs) {
      history.push_back({{"epoch", e.epoch},
                         {"train_loss", e.train_loss},
                         {"train_acc", e.train_accuracy},
                         {"val_loss", e.validation_loss},
                         {"val_acc", e.validation_accuracy},
                         {"improved", e.improved}});
    }
    nlohmann::json tracks = nlohmann::json::array();
    for (const PredictionRecord& p : r.predictions) {
      tracks.push_back({{"track_id", p.track_id},
                        {"label", p.label ? nlohmann::json(*p.label) : nlohmann::json()},
                        {"majority", p.majority},
                        {"sum", p.sum}});
    }
    rounds.push_back({{"round", r.round},
                      {"segment_acc", r.segment_accuracy},
                      {"track_acc_majority", r.track_accuracy_majority},
                      {"track_acc_sum", r.track_accuracy_sum},
                      {"epochs", r.epochs},
                      {"best_epoch", r.best_epoch},
                      {"test_tracks", r.test_tracks},
                      {"stop_reason", to_string(r.history.stop_reason)},
                      {"history", history},
                      {"predictions", tracks}});
  }
  const Summary& s = evaluation.summary;
  return {{"architecture", evaluation.architecture},
          {"augmentation", evaluation.augment},
          {"rounds", rounds},
          {"summary",
           {{"segment_acc", mean_std_json(s.segment)},
            {"track_acc_majority", mean_std_json(s.majority)},
            {"track_acc_sum", mean_std_json(s.sum)},
            {"headline_rule", to_string(s.headline)},
            {"aggregation", mean_std_json(s.aggregation)}}}};
}

std::string to_csv(const Evaluation& evaluation) {
  std::ostringstream out;
  out << "architecture,augmentation,round,segment_acc,track_acc_majority,track_acc_sum,epochs,"
         "best_epoch\n";
  const std::string prefix =
      evaluation.architecture + "," + (evaluation.augment ? "true" : "false") + ",";
  for (const RoundResult& r : evaluation.rounds) {
    out << prefix << r.round << "," << format_double(r.segment_accuracy) << ","
        << format_double(r.track_accuracy_majority) << ","
        << format_double(r.track_accuracy_sum) << "," << r.epochs << "," << r.best_epoch << "\n";
  }
  const Summary& s = evaluation.summary;
  out << prefix << "mean," << format_double(s.segment.mean) << ","
      << format_double(s.majority.mean) << "," << format_double(s.sum.mean) << ",,\n";
  out << prefix << "std," << format_double(s.segment.std) << "," << format_double(s.majority.std)
      << "," << format_double(s.sum.std) << ",,\n";
  return out.str();
}

}  // namespace wavegenre::train
