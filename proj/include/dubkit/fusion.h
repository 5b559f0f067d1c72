// dubkit/fusion.h

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

#ifndef DUBKIT_FUSION_H_
#define DUBKIT_FUSION_H_

#include "dubkit/data_types.h"
#include "dubkit/nn.h"

namespace dubkit {

struct FusionConfig {
  int vocab = kVocabSize;
  int c_text = 64;
  int c_bottleneck = 16;
  int f_face = kFaceChannels;
  int f_lip = kLipChannels;
  int heads = 4;
  int ff_mult = 2;
  int text_blocks = 2;
};

// Builds the fused conditioning stream z_tv [T x c_text] from text and the
// two visual streams. Dropped branches are replaced by learned null rows.
// The mixing projection starts at zero, so at initialization the fused
// stream equals the text branch exactly.
class FusionModel {
 public:
  explicit FusionModel(FusionConfig cfg) : cfg_(cfg) {}

  const FusionConfig& config() const { return cfg_; }

  void init_params(ParamSet& ps, Rng& rng);

  // Token ownership of each frame: tokens repeated evenly (floor(T/L) frames
  // each), remainder attached to the last token. Requires T >= L.
  static std::vector<int64_t> frame_token_map(int64_t n_tokens, int64_t t_mel);

  // Token embeddings upsampled to frame rate, then the text encoder blocks.
  Var encode_text(Tape& tape, Binding& bind, const TextSequence& text,
                  int64_t t_mel) const;
  // visual [T x f], already aligned to the mel frame rate, time-major.
  Var adapt_face(Tape& tape, Binding& bind, Var visual) const;
  Var adapt_lip(Tape& tape, Binding& bind, Var visual) const;
  Var null_text_rows(Tape& tape, Binding& bind, int64_t t_mel) const;
  Var null_face_rows(Tape& tape, Binding& bind, int64_t t_mel) const;
  Var null_lip_rows(Tape& tape, Binding& bind, int64_t t_mel) const;
  // z = text + mix(concat(text, face, lip)); all inputs [T x c_text].
  Var fuse(Tape& tape, Binding& bind, Var text_src, Var face_src,
           Var lip_src) const;

  // Full conditional stream for one clip. Null pointers or cleared use_*
  // flags select the corresponding null branch.
  Var fused_stream(Tape& tape, Binding& bind, const TextSequence* text,
                   const Grid* face_aligned, const Grid* lip_aligned,
                   bool use_text, bool use_face, bool use_lip,
                   int64_t t_mel) const;

 private:
  struct Adapter {
    LinearSpec in, down, up;
    LayerNormSpec ln;
    std::string null_name;
  };

  Var adapt(Tape& tape, Binding& bind, Var visual, const Adapter& ad) const;

  FusionConfig cfg_;
  std::vector<AttentionBlockSpec> text_blocks_;
  Adapter face_, lip_;
  LinearSpec mix_;
  std::string embed_name_ = "fusion.text.embed";
  std::string text_null_name_ = "fusion.text.null";
};

}  // namespace dubkit

#endif  // DUBKIT_FUSION_H_
