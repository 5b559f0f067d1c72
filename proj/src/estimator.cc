// src/estimator.cc

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

#include "dubkit/estimator.h"

#include <stdexcept>

namespace dubkit {

bool speaker_mode_uses_context(SpeakerMode mode) {
  return mode == SpeakerMode::kContextOnly || mode == SpeakerMode::kBoth;
}

bool speaker_mode_uses_embedding(SpeakerMode mode) {
  return mode == SpeakerMode::kSpkembOnly || mode == SpeakerMode::kBoth;
}

void EstimatorModel::init_params(ParamSet& ps, Rng& rng) {
  in_.init(ps, "est.in", 2 * cfg_.mel_bins + cfg_.c_text, cfg_.c_est, rng);
  time1_.init(ps, "est.time1", cfg_.c_est, cfg_.c_est, rng);
  time2_.init(ps, "est.time2", cfg_.c_est, cfg_.c_est, rng);
  spk_.init(ps, "est.spk", cfg_.f_embed, cfg_.c_est, rng);
  blocks_.resize(cfg_.blocks);
  for (int i = 0; i < cfg_.blocks; ++i)
    blocks_[i].init(ps, "est.blk" + std::to_string(i), cfg_.c_est, cfg_.heads,
                    cfg_.ff_mult, rng);
  // Zero output projection: the untrained field is identically zero.
  out_.init(ps, "est.out", cfg_.c_est, cfg_.mel_bins, rng, 0.0);
}

Var EstimatorModel::forward(Tape& tape, Binding& bind, const Grid& x_t,
                            const Grid& context, Var z_tv,
                            std::optional<Var> e_g, double t,
                            const ConditionFlags& flags) const {
  if (x_t.rank() != 2 || x_t.rows() != cfg_.mel_bins)
    throw_shape_error("estimator x_t", x_t);
  if (!context.same_shape(x_t)) throw_shape_error("estimator context", context, x_t);
  int64_t frames = x_t.cols();
  const Grid& zv = tape.value(z_tv);
  if (zv.rank() != 2 || zv.rows() != frames || zv.cols() != cfg_.c_text)
    throw_shape_error("estimator z_tv", zv);
  if (t < 0.0 || t > 1.0)
    throw std::domain_error("estimator: flow time outside [0, 1]");
  bool want_embed = speaker_mode_uses_embedding(flags.speaker_mode);
  if (want_embed && !e_g.has_value())
    throw std::invalid_argument(
        "estimator: speaker mode needs an embedding but none was given");

  // The context channel is zeroed unless the speaker mode grants it, so a
  // caller-supplied context cannot leak into embedding-only variants.
  Var ctx = speaker_mode_uses_context(flags.speaker_mode)
                ? tape.leaf(context)
                : tape.leaf(Grid(context.shape()));
  Var xt = tape.transpose(tape.leaf(x_t));
  Var ctx_t = tape.transpose(ctx);
  Var h = in_.apply(tape, bind, tape.concat_cols({xt, ctx_t, z_tv}));

  Var tf = tape.leaf(timestep_features(t, cfg_.c_est));
  Var temb = time2_.apply(tape, bind, tape.gelu(time1_.apply(tape, bind, tf)));
  if (want_embed) {
    const Grid& ev = tape.value(*e_g);
    if (ev.rank() != 2 || ev.rows() != 1 || ev.cols() != cfg_.f_embed)
      throw_shape_error("estimator speaker embedding", ev);
    temb = tape.add(temb, spk_.apply(tape, bind, *e_g));
  }
  h = tape.add_rowvec(h, temb);
  h = tape.add(h, tape.leaf(sinusoidal_position_encoding(frames, cfg_.c_est)));
  for (const auto& blk : blocks_) h = blk.apply(tape, bind, h);
  return tape.transpose(out_.apply(tape, bind, h));
}

Grid interpolate_path(const Grid& x0, const Grid& x1, double t) {
  if (!x0.same_shape(x1)) throw_shape_error("interpolate_path", x0, x1);
  if (t < 0.0 || t > 1.0)
    throw std::domain_error("interpolate_path: t outside [0, 1]");
  Grid out = scale(x0, 1.0 - t);
  out.add_scaled(x1, t);
  return out;
}

Var fm_loss(Tape& tape, Var pred, const Grid& x1, const Grid& x0,
            const BinaryMask& mask, bool* empty_mask) {
  const Grid& pv = tape.value(pred);
  if (!pv.same_shape(x1) || !x0.same_shape(x1))
    throw_shape_error("fm_loss", pv, x1);
  if (mask.frames() != x1.cols())
    throw std::invalid_argument("fm_loss: mask has " +
                                std::to_string(mask.frames()) +
                                " frames, grids have " +
                                std::to_string(x1.cols()));
  if (empty_mask) *empty_mask = false;
  int64_t active = mask.masked_frames();
  if (active == 0) {
    if (empty_mask) *empty_mask = true;
    return tape.leaf(Grid({1, 1}));
  }
  Var target = tape.leaf(sub(x1, x0));
  Var m = tape.leaf(mask.to_grid(x1.rows()));
  Var diff = tape.mul(tape.sub(pred, target), m);
  Var sq = tape.mul(diff, diff);
  double denom = static_cast<double>(active * x1.rows());
  return tape.scale(tape.sum(sq), 1.0 / denom);
}

ConditionFlags sample_condition_flags(Rng& rng, const ConditionProbs& probs) {
  ConditionFlags flags;
  flags.speaker_mode = rng.uniform01() < probs.p_speaker_embed
                           ? SpeakerMode::kSpkembOnly
                           : SpeakerMode::kContextOnly;
  flags.use_text = rng.uniform01() >= probs.p_drop_text;
  flags.use_face = rng.uniform01() >= probs.p_drop_face;
  flags.use_lip = rng.uniform01() >= probs.p_drop_lip;
  return flags;
}

}  // namespace dubkit
