// src/speaker.cc

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

#include "dubkit/speaker.h"

#include <cmath>
#include <stdexcept>

namespace dubkit {

void SpeakerModel::init_params(ParamSet& ps, Rng& rng) {
  // Frozen projection from the constant seed, not from the model stream.
  Rng frozen_rng(kFrozenSpeakerSeed);
  Grid proj({2 * cfg_.mel_bins, cfg_.f_embed});
  double s = 1.0 / std::sqrt(static_cast<double>(2 * cfg_.mel_bins));
  for (double& v : proj.flat()) v = s * frozen_rng.normal();
  ps.add(frozen_name_, std::move(proj), /*trainable=*/false);

  Grid kernels({cfg_.c_spk, cfg_.mel_bins, cfg_.conv_k});
  double ks = 1.0 / std::sqrt(static_cast<double>(cfg_.mel_bins * cfg_.conv_k));
  for (double& v : kernels.flat()) v = ks * rng.normal();
  ps.add(conv_name_, std::move(kernels));
  ps.add(conv_bias_name_, Grid({1, cfg_.c_spk}));

  blocks_.resize(cfg_.blocks);
  for (int i = 0; i < cfg_.blocks; ++i)
    blocks_[i].init(ps, "speaker.blk" + std::to_string(i), cfg_.c_spk,
                    cfg_.heads, cfg_.ff_mult, rng);
  out_.init(ps, "speaker.out", 2 * cfg_.c_spk, cfg_.f_embed, rng);
}

Grid SpeakerModel::pretrained_embed(const MelGrid& clip,
                                    const ParamSet& ps) const {
  if (clip.values.rank() != 2 || clip.bins() != cfg_.mel_bins)
    throw_shape_error("pretrained_embed", clip.values);
  Grid stats = pooled_mean_std(clip.values);
  Grid e = matmul(stats, ps.get(frozen_name_).value);
  double n2 = 0.0;
  for (double v : e.flat()) n2 += v * v;
  double n = std::max(std::sqrt(n2), 1e-12);
  e.scale_inplace(1.0 / n);
  return e;
}

Var SpeakerModel::learnable_embed(Tape& tape, Binding& bind,
                                  const MelGrid& clip) const {
  if (clip.values.rank() != 2 || clip.bins() != cfg_.mel_bins)
    throw_shape_error("learnable_embed", clip.values);
  Var x = tape.leaf(clip.values);
  Var h = tape.conv1d(x, bind[conv_name_]);
  h = tape.add_channel_bias(h, bind[conv_bias_name_]);
  Var ht = tape.transpose(h);
  Var pe = tape.leaf(sinusoidal_position_encoding(clip.frames(), cfg_.c_spk));
  ht = tape.add(ht, pe);
  for (const auto& blk : blocks_) ht = blk.apply(tape, bind, ht);
  Var pooled = tape.mean_std_pool(tape.transpose(ht));
  return out_.apply(tape, bind, pooled);
}

Var SpeakerModel::combined_embed(Tape& tape, Binding& bind, const MelGrid& clip,
                                 const ParamSet& ps) const {
  Var pre = tape.leaf(pretrained_embed(clip, ps));
  Var learn = learnable_embed(tape, bind, clip);
  return tape.add(pre, learn);
}

Grid combine_embeddings(const Grid& e_pre, const Grid& e_learn) {
  if (!e_pre.same_shape(e_learn))
    throw_shape_error("combine_embeddings", e_pre, e_learn);
  return add(e_pre, e_learn);
}

MelGrid extract_segment(const MelGrid& mel, Rng& rng) {
  int64_t t = mel.frames();
  if (t < kMinSpeakerClipFrames)
    throw std::invalid_argument("extract_segment: clip of " +
                                std::to_string(t) + " frames is too short");
  int64_t lo = std::min<int64_t>(t, 25);
  int64_t hi = std::min<int64_t>(t, 190);
  int64_t len = lo + static_cast<int64_t>(
                         rng.uniform_int(static_cast<uint64_t>(hi - lo + 1)));
  int64_t start = static_cast<int64_t>(
      rng.uniform_int(static_cast<uint64_t>(t - len + 1)));
  Grid seg({mel.bins(), len});
  for (int64_t d = 0; d < mel.bins(); ++d)
    for (int64_t j = 0; j < len; ++j) seg.at(d, j) = mel.values.at(d, start + j);
  return MelGrid(std::move(seg));
}

}  // namespace dubkit
