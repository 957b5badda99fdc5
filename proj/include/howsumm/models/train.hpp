// Copyright 2026 The howsumm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/corpus.hpp"
#include "howsumm/models/model.hpp"
#include "howsumm/numcore/adam.hpp"

namespace howsumm::models {

struct TrainSchedule {
  double lr = 4e-4;
  bool halve_on_no_improve = true;
  std::size_t max_epochs = 50;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  // Stop early once the epoch's mean train loss drops below this (0 = off).
  double stop_below_train_loss = 0.0;
  bool restore_best = true;
  numcore::AdamHyper adam{};

  void validate() const {
    if (!(lr > 0.0)) throw Error("models", "schedule lr must be > 0");
    if (max_epochs < 1) throw Error("models", "schedule max_epochs must be >= 1");
    if (batch_size < 1) throw Error("models", "schedule batch_size must be >= 1");
  }
};

// Halves the rate after every epoch whose validation loss does not improve
// on the best seen so far. The rate never increases.
class HalvingSchedule {
 public:
  HalvingSchedule(double lr, bool enabled) : lr_(lr), enabled_(enabled) {}

  // Returns the rate for the next epoch.
  double after_epoch(double val_loss) {
    if (val_loss < best_) {
      best_ = val_loss;
      improved_ = true;
    } else {
      improved_ = false;
      if (enabled_) lr_ /= 2.0;
    }
    return lr_;
  }

  double lr() const { return lr_; }
  double best() const { return best_; }
  bool improved() const { return improved_; }

 private:
  double lr_;
  bool enabled_;
  double best_ = std::numeric_limits<double>::infinity();
  bool improved_ = false;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // rate after this epoch's halving decision
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();

  std::string to_tsv() const {
    std::string out = "epoch\ttrain_loss\tval_loss\tlr\n";
    char buf[160];
    for (const auto& e : epochs) {
      std::snprintf(buf, sizeof buf, "%zu\t%.17g\t%.17g\t%.17g\n", e.epoch, e.train_loss, e.val_loss, e.lr);
      out += buf;
    }
    return out;
  }
};

struct TrainHooks {
  // Replaces the measured validation loss (used to script the schedule).
  std::function<double(std::size_t epoch, double measured)> val_loss;
  std::function<void(const EpochRecord&)> on_epoch;
};

template <class T>
double mean_loss(const Model<T>& model, const std::vector<EncodedExample>& data) {
  if (data.empty()) throw Error("models", "mean_loss over an empty split");
  double sum = 0.0;
  for (const auto& ex : data) sum += forward_teacher_forced(model, ex).loss;
  return sum / static_cast<double>(data.size());
}

// Batches are length-sorted buckets; bucket order is reshuffled every epoch.
// The batch objective is the mean of the per-example mean token losses, so
// examples never see padding.
template <class T>
TrainLog train(Model<T>& model, const std::vector<EncodedExample>& train_set, const std::vector<EncodedExample>& val_set,
               const TrainSchedule& schedule, const TrainHooks& hooks = {}) {
  schedule.validate();
  if (train_set.empty()) throw Error("models", "empty train split");
  if (val_set.empty()) throw Error("models", "empty val split");

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return train_set[a].src.size() < train_set[b].src.size();
  });
  std::vector<std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < order.size(); i += schedule.batch_size)
    buckets.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + schedule.batch_size)));

  Rng rng(schedule.seed);
  HalvingSchedule lr_schedule(schedule.lr, schedule.halve_on_no_improve);
  numcore::AdamHyper hyper = schedule.adam;
  TrainLog log;
  std::optional<ParamStore<T>> best;

  for (std::size_t epoch = 1; epoch <= schedule.max_epochs; ++epoch) {
    hyper.lr = lr_schedule.lr();
    rng.shuffle(buckets.begin(), buckets.end());
    double train_sum = 0.0;
    for (const auto& bucket : buckets) {
      auto grads = model.params.zero_grads();
      const T weight = T(1) / static_cast<T>(bucket.size());
      for (const auto idx : bucket) {
        Tape<T> tape(&model.params, true);
        const Var loss = teacher_forced_loss(tape, model, train_set[idx]);
        const double value = static_cast<double>(tape.scalar(loss));
        if (!std::isfinite(value))
          throw Error("models", "non-finite loss at epoch " + std::to_string(epoch) + " on example '" +
                                    train_set[idx].id + "'");
        train_sum += value;
        tape.accumulate_gradients(loss, grads, weight);
      }
      numcore::adam_step(model.params, grads, hyper);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_sum / static_cast<double>(train_set.size());
    rec.val_loss = mean_loss(model, val_set);
    if (hooks.val_loss) rec.val_loss = hooks.val_loss(epoch, rec.val_loss);
    if (!std::isfinite(rec.val_loss))
      throw Error("models", "non-finite validation loss at epoch " + std::to_string(epoch));
    rec.lr = lr_schedule.after_epoch(rec.val_loss);
    if (lr_schedule.improved()) {
      log.best_epoch = epoch;
      log.best_val_loss = rec.val_loss;
      if (schedule.restore_best) best = model.params;
    }
    log.epochs.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);
    if (schedule.stop_below_train_loss > 0.0 && rec.train_loss < schedule.stop_below_train_loss) break;
  }
  if (schedule.restore_best && best) model.params = std::move(*best);
  return log;
}

template <class T>
TrainLog train(Model<T>& model, const corpus::Corpus& corpus, const corpus::Vocabulary& src_vocab,
               const corpus::Vocabulary& tgt_vocab, const TrainSchedule& schedule, const TrainHooks& hooks = {}) {
  if (!corpus.has_split("train") || corpus.split("train").empty()) throw Error("models", "empty train split");
  if (!corpus.has_split("val") || corpus.split("val").empty()) throw Error("models", "empty val split");
  const auto limit = model.config.src_limit;
  return train(model, encode_split(corpus.split("train"), src_vocab, tgt_vocab, limit),
               encode_split(corpus.split("val"), src_vocab, tgt_vocab, limit), schedule, hooks);
}

}  // namespace howsumm::models
