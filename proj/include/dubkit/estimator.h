// dubkit/estimator.h

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

#ifndef DUBKIT_ESTIMATOR_H_
#define DUBKIT_ESTIMATOR_H_

#include <optional>

#include "dubkit/data_types.h"
#include "dubkit/mask.h"
#include "dubkit/nn.h"

namespace dubkit {

// How speaker identity is conveyed to the estimator. Training alternates
// between kSpkembOnly and kContextOnly; kNone is the unconditional variant
// used for guidance.
enum class SpeakerMode { kContextOnly, kSpkembOnly, kBoth, kNone };

struct ConditionFlags {
  bool use_text = true;
  bool use_face = true;
  bool use_lip = true;
  SpeakerMode speaker_mode = SpeakerMode::kSpkembOnly;
};

bool speaker_mode_uses_context(SpeakerMode mode);
bool speaker_mode_uses_embedding(SpeakerMode mode);

struct EstimatorConfig {
  int mel_bins = kMelBins;
  int c_text = 64;
  int c_est = 128;
  int blocks = 4;
  int heads = 4;
  int ff_mult = 2;
  int f_embed = 64;
};

// Vector-field estimator. Inputs per frame: the flowed state x_t, the
// context spectrogram (zeroed unless the speaker mode grants it), and the
// fused conditioning stream; a time embedding (plus the speaker embedding
// when granted) is broadcast over frames. The output projection starts at
// zero, so an untrained estimator predicts the zero field.
class EstimatorModel {
 public:
  explicit EstimatorModel(EstimatorConfig cfg) : cfg_(cfg) {}

  const EstimatorConfig& config() const { return cfg_; }

  void init_params(ParamSet& ps, Rng& rng);

  // x_t, context both [mel_bins x T]; z_tv [T x c_text] on the tape; e_g a
  // [1 x f_embed] tape var, required exactly when the mode grants the
  // embedding. Returns the predicted field [mel_bins x T].
  Var forward(Tape& tape, Binding& bind, const Grid& x_t, const Grid& context,
              Var z_tv, std::optional<Var> e_g, double t,
              const ConditionFlags& flags) const;

 private:
  EstimatorConfig cfg_;
  LinearSpec in_, time1_, time2_, spk_, out_;
  std::vector<AttentionBlockSpec> blocks_;
};

// Straight-line interpolation (1 - t) * x0 + t * x1; t must lie in [0, 1].
Grid interpolate_path(const Grid& x0, const Grid& x1, double t);

// Masked regression of the predicted field onto x1 - x0: squared error
// averaged over masked elements only. An all-zero mask yields a zero loss
// and sets *empty_mask (the gradient is zero everywhere).
Var fm_loss(Tape& tape, Var pred, const Grid& x1, const Grid& x0,
            const BinaryMask& mask, bool* empty_mask = nullptr);

struct ConditionProbs {
  double p_speaker_embed = 0.8;  // else context
  double p_drop_text = 0.2;
  double p_drop_face = 0.6;
  double p_drop_lip = 0.6;
};

// Stochastic conditioning pattern for one training item; four independent
// draws in a fixed order (speaker, text, face, lip).
ConditionFlags sample_condition_flags(Rng& rng, const ConditionProbs& probs);

}  // namespace dubkit

#endif  // DUBKIT_ESTIMATOR_H_
