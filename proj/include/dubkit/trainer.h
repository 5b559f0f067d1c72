// dubkit/trainer.h

// Copyright 2026  Dubkit Authors

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

#ifndef DUBKIT_TRAINER_H_
#define DUBKIT_TRAINER_H_

#include <functional>
#include <stdexcept>

#include "dubkit/corpus.h"
#include "dubkit/model.h"

namespace dubkit {

struct TrainConfig {
  double learning_rate = 5e-4;
  double p_speaker_embed = 0.8;  // else the reference enters as context
  double p_drop_text = 0.2;
  double p_drop_face = 0.6;
  double p_drop_lip = 0.6;
  int64_t steps = 2000;
  int64_t batch_size = 2;
  uint64_t seed = 1;
  int64_t checkpoint_every = 500;

  void validate() const;
  // Canonical fixed-order key=value encoding; doubles survive a round trip.
  std::string to_text() const;
  static TrainConfig from_text(const std::string& text);
};

// Raised when a training step produces a non-finite loss. The message names
// the failing step and its derived seed so the step can be replayed.
struct TrainAbort : std::runtime_error {
  TrainAbort(const std::string& what, int64_t step, uint64_t step_seed)
      : std::runtime_error(what), step(step), step_seed(step_seed) {}
  int64_t step;
  uint64_t step_seed;
};

struct TrainResult {
  std::vector<double> loss_trace;  // mean item loss per step
};

struct TrainHooks {
  // Called after optimizer step `step_index` (1-based) at every
  // checkpoint_every boundary and after the final step.
  std::function<void(int64_t step_index, const Model& model,
                     const std::vector<double>& trace)>
      on_checkpoint;
};

// Deterministic single-threaded training over the train split. Every random
// draw comes from a per-step stream derived from config.seed, so a given
// (corpus, config, model seed) triple reproduces the run bit for bit.
TrainResult train(Model& model, const Corpus& corpus, const TrainConfig& config,
                  const TrainHooks& hooks = {});

// Derived stream seed for one optimizer step.
uint64_t train_step_seed(uint64_t seed, int64_t step);

}  // namespace dubkit

#endif  // DUBKIT_TRAINER_H_
