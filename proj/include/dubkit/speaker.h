// dubkit/speaker.h

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

#ifndef DUBKIT_SPEAKER_H_
#define DUBKIT_SPEAKER_H_

#include "dubkit/data_types.h"
#include "dubkit/nn.h"

namespace dubkit {

struct SpeakerConfig {
  int mel_bins = kMelBins;
  int c_spk = 32;
  int f_embed = 64;
  int blocks = 6;
  int heads = 4;
  int ff_mult = 2;
  int conv_k = 3;
};

// The frozen statistics branch is always initialized from this constant, so
// its projection is identical in every model regardless of the model seed.
inline constexpr uint64_t kFrozenSpeakerSeed = 0x5EEDF00D5EEDF00DULL;

inline constexpr int64_t kMinSpeakerClipFrames = 8;

// Dual speaker encoder. The frozen branch pools clip statistics through a
// fixed random projection and L2-normalizes; the learnable branch is a small
// conv + transformer encoder. The two embeddings are summed.
class SpeakerModel {
 public:
  explicit SpeakerModel(SpeakerConfig cfg) : cfg_(cfg) {}

  const SpeakerConfig& config() const { return cfg_; }

  void init_params(ParamSet& ps, Rng& rng);

  // Frozen-branch embedding [1 x f_embed]; pure function of the clip and the
  // frozen projection, no tape involved.
  Grid pretrained_embed(const MelGrid& clip, const ParamSet& ps) const;

  // Learnable-branch embedding [1 x f_embed] on the tape.
  Var learnable_embed(Tape& tape, Binding& bind, const MelGrid& clip) const;

  // Both branches combined on the tape (frozen branch enters as a constant).
  Var combined_embed(Tape& tape, Binding& bind, const MelGrid& clip,
                     const ParamSet& ps) const;

 private:
  SpeakerConfig cfg_;
  LinearSpec out_;
  std::vector<AttentionBlockSpec> blocks_;
  std::string frozen_name_ = "speaker.frozen.proj";
  std::string conv_name_ = "speaker.conv.kernels";
  std::string conv_bias_name_ = "speaker.conv.bias";
};

// Elementwise sum of two embeddings of equal shape.
Grid combine_embeddings(const Grid& e_pre, const Grid& e_learn);

// Random contiguous clip of the mel used as the speaker reference during
// training: length uniform in [min(T, 25), min(T, 190)], position uniform.
// Requires at least kMinSpeakerClipFrames frames.
MelGrid extract_segment(const MelGrid& mel, Rng& rng);

}  // namespace dubkit

#endif  // DUBKIT_SPEAKER_H_
