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

#include "wavegenre/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "wavegenre/errors.hpp"
#include "wavegenre/model/architecture.hpp"
#include "wavegenre/tensor/ops.hpp"
#include "wavegenre/tensor/optim.hpp"

namespace wavegenre::train {

using tensor::BasicTensor;
using tensor::Tape;

void TrainConfig::validate() const {
  const auto names = model::architecture_names();
  if (std::find(names.begin(), names.end(), architecture) == names.end()) {
    throw UsageError("unknown architecture '" + architecture + "'");
  }
  if (max_epochs == 0) throw UsageError("max_epochs must be positive");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (micro_batch == 0) throw UsageError("micro_batch must be positive");
  if (patience == 0) throw UsageError("patience must be positive");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning_rate must be a positive finite number");
  }
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::early_stopping: return "early_stopping";
    case StopReason::requested: return "requested";
  }
  return "?";
}

bool EarlyStopping::update(std::size_t epoch, double loss) {
  if (loss < best_loss_) {
    best_loss_ = loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

namespace {

std::size_t count_correct(const BasicTensor<float>& logits, std::span<const int> labels) {
  const std::size_t classes = logits.dim(1);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const float* row = logits.ptr() + r * classes;
    if (std::max_element(row, row + classes) - row == labels[r]) ++correct;
  }
  return correct;
}

double summed_cross_entropy(const BasicTensor<float>& logits, std::span<const int> labels) {
  const std::size_t classes = logits.dim(1);
  double total = 0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const float* row = logits.ptr() + r * classes;
    const double peak = *std::max_element(row, row + classes);
    double z = 0;
    for (std::size_t k = 0; k < classes; ++k) z += std::exp(row[k] - peak);
    total += std::log(z) - (row[labels[r]] - peak);
  }
  return total;
}

}  // namespace

LossAccuracy measure(model::Network<float>& net, const SegmentSet& set, std::size_t micro_batch) {
  if (set.size() == 0) throw ValidationError("cannot measure an empty segment set");
  std::vector<std::size_t> which;
  BasicTensor<float> batch;
  std::vector<int> labels;
  double loss = 0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < set.size(); start += micro_batch) {
    const std::size_t n = std::min(micro_batch, set.size() - start);
    which.resize(n);
    std::iota(which.begin(), which.end(), start);
    set.assemble(which, batch, labels);
    const BasicTensor<float> logits = net.infer(batch);
    loss += summed_cross_entropy(logits, labels);
    correct += count_correct(logits, labels);
  }
  const double n = static_cast<double>(set.size());
  return {loss / n, correct / n};
}

TrainHistory fit(model::Network<float>& net, const SegmentSet& train_set,
                 const SegmentSet& validation_set, const TrainConfig& config,
                 const EpochCallback& on_epoch) {
  config.validate();
  if (train_set.size() == 0) throw ValidationError("training set is empty");
  if (validation_set.size() == 0) throw ValidationError("validation set is empty");

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32)};
  std::mt19937_64 shuffle_rng(seq);
  std::mt19937_64 dropout_rng(shuffle_rng());

  tensor::AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  tensor::Adam<float> adam(net.parameters(), adam_config);

  EarlyStopping stopper(config.patience);
  std::optional<model::Network<float>> best;
  TrainHistory history;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  BasicTensor<float> batch;
  std::vector<int> labels;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0;
    std::size_t correct = 0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t size = std::min(config.batch_size, order.size() - start);
      adam.zero_grad();
      for (std::size_t m = 0; m < size; m += config.micro_batch) {
        const std::size_t n = std::min(config.micro_batch, size - m);
        train_set.assemble(std::span(order).subspan(start + m, n), batch, labels);
        Tape<float> tape;
        const auto x = tape.input(std::move(batch));
        const auto logits = net.forward(tape, x, tensor::Mode::training, dropout_rng);
        const auto loss = tensor::cross_entropy(tape, logits, labels);
        const double value = tape.value(loss)[0];
        if (!std::isfinite(value)) {
          std::ostringstream msg;
          msg << "non-finite training loss " << value << " at epoch " << epoch << ", batch "
              << batch_index + 1 << " (segments " << start + m << ".." << start + m + n - 1
              << "), optimizer step " << adam.steps() << ", learning rate "
              << config.learning_rate;
          throw NumericError(msg.str());
        }
        loss_sum += value * n;
        correct += count_correct(tape.value(logits), labels);
        tape.backward(tensor::scale(tape, loss, static_cast<double>(n) / size));
        batch = BasicTensor<float>();
      }
      adam.step();
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / order.size();
    stats.train_accuracy = static_cast<double>(correct) / order.size();
    const LossAccuracy val = measure(net, validation_set, config.micro_batch);
    if (!std::isfinite(val.loss)) {
      throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch) +
                         ", optimizer step " + std::to_string(adam.steps()));
    }
    stats.validation_loss = val.loss;
    stats.validation_accuracy = val.accuracy;
    stats.improved = stopper.update(epoch, val.loss);
    if (stats.improved) {
      if (best) best->copy_state_from(net);
      else best.emplace(net);
    }
    history.epochs.push_back(stats);

    const bool keep_going = !on_epoch || on_epoch(stats, net);
    if (!keep_going) {
      history.stop_reason = StopReason::requested;
      break;
    }
    if (stopper.should_stop()) {
      history.stop_reason = StopReason::early_stopping;
      break;
    }
  }
  history.best_epoch = stopper.best_epoch();
  history.best_validation_loss = stopper.best_loss();
  if (best) net.copy_state_from(*best);
  return history;
}

}  // namespace wavegenre::train
