// src/fusion.cc

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

#include "dubkit/fusion.h"

#include <stdexcept>

namespace dubkit {

void FusionModel::init_params(ParamSet& ps, Rng& rng) {
  Grid embed({cfg_.vocab, cfg_.c_text});
  for (double& v : embed.flat()) v = 0.02 * rng.normal();
  ps.add(embed_name_, std::move(embed));
  text_blocks_.resize(cfg_.text_blocks);
  for (int i = 0; i < cfg_.text_blocks; ++i)
    text_blocks_[i].init(ps, "fusion.text.blk" + std::to_string(i), cfg_.c_text,
                         cfg_.heads, cfg_.ff_mult, rng);
  Grid tnull({1, cfg_.c_text});
  for (double& v : tnull.flat()) v = 0.02 * rng.normal();
  ps.add(text_null_name_, std::move(tnull));

  auto init_adapter = [&](Adapter& ad, const std::string& prefix, int f_in) {
    ad.in.init(ps, prefix + ".in", f_in, cfg_.c_text, rng);
    ad.ln.init(ps, prefix + ".ln", cfg_.c_text);
    ad.down.init(ps, prefix + ".down", cfg_.c_text, cfg_.c_bottleneck, rng);
    // Zero-initialized up-projection keeps a fresh adapter transparent.
    ad.up.init(ps, prefix + ".up", cfg_.c_bottleneck, cfg_.c_text, rng, 0.0);
    ad.null_name = prefix + ".null";
    Grid null_row({1, cfg_.c_text});
    for (double& v : null_row.flat()) v = 0.02 * rng.normal();
    ps.add(ad.null_name, std::move(null_row));
  };
  init_adapter(face_, "fusion.face", cfg_.f_face);
  init_adapter(lip_, "fusion.lip", cfg_.f_lip);

  // Zero-initialized mixer: the fused stream starts as the text branch.
  mix_.init(ps, "fusion.mix", 3 * cfg_.c_text, cfg_.c_text, rng, 0.0);
}

std::vector<int64_t> FusionModel::frame_token_map(int64_t n_tokens,
                                                  int64_t t_mel) {
  if (n_tokens <= 0)
    throw std::invalid_argument("frame_token_map: empty token sequence");
  if (t_mel < n_tokens)
    throw std::invalid_argument(
        "frame_token_map: " + std::to_string(t_mel) +
        " frames cannot cover " + std::to_string(n_tokens) + " tokens");
  std::vector<int64_t> map(static_cast<size_t>(t_mel));
  int64_t base = t_mel / n_tokens;
  for (int64_t t = 0; t < t_mel; ++t) map[t] = std::min(t / base, n_tokens - 1);
  return map;
}

Var FusionModel::encode_text(Tape& tape, Binding& bind,
                             const TextSequence& text, int64_t t_mel) const {
  for (uint16_t tok : text.tokens)
    if (static_cast<int>(tok) >= cfg_.vocab)
      throw std::invalid_argument("encode_text: token id " +
                                  std::to_string(tok) + " outside vocabulary");
  std::vector<int64_t> map = frame_token_map(text.length(), t_mel);
  std::vector<int64_t> rows(map.size());
  for (size_t j = 0; j < map.size(); ++j) rows[j] = text.tokens[map[j]];
  Var x = tape.gather_rows(bind[embed_name_], std::move(rows));
  for (const auto& blk : text_blocks_) x = blk.apply(tape, bind, x);
  return x;
}

Var FusionModel::adapt(Tape& tape, Binding& bind, Var visual,
                       const Adapter& ad) const {
  Var h = ad.in.apply(tape, bind, visual);
  Var n = ad.ln.apply(tape, bind, h);
  Var d = tape.gelu(ad.down.apply(tape, bind, n));
  return tape.add(h, ad.up.apply(tape, bind, d));
}

Var FusionModel::adapt_face(Tape& tape, Binding& bind, Var visual) const {
  return adapt(tape, bind, visual, face_);
}

Var FusionModel::adapt_lip(Tape& tape, Binding& bind, Var visual) const {
  return adapt(tape, bind, visual, lip_);
}

Var FusionModel::null_text_rows(Tape& tape, Binding& bind, int64_t t_mel) const {
  return tape.repeat_row(bind[text_null_name_], t_mel);
}

Var FusionModel::null_face_rows(Tape& tape, Binding& bind, int64_t t_mel) const {
  return tape.repeat_row(bind[face_.null_name], t_mel);
}

Var FusionModel::null_lip_rows(Tape& tape, Binding& bind, int64_t t_mel) const {
  return tape.repeat_row(bind[lip_.null_name], t_mel);
}

Var FusionModel::fuse(Tape& tape, Binding& bind, Var text_src, Var face_src,
                      Var lip_src) const {
  Var cat = tape.concat_cols({text_src, face_src, lip_src});
  return tape.add(text_src, mix_.apply(tape, bind, cat));
}

Var FusionModel::fused_stream(Tape& tape, Binding& bind,
                              const TextSequence* text,
                              const Grid* face_aligned, const Grid* lip_aligned,
                              bool use_text, bool use_face, bool use_lip,
                              int64_t t_mel) const {
  Var text_src = (use_text && text)
                     ? encode_text(tape, bind, *text, t_mel)
                     : null_text_rows(tape, bind, t_mel);
  Var face_src;
  if (use_face && face_aligned) {
    if (face_aligned->rows() != t_mel || face_aligned->cols() != cfg_.f_face)
      throw_shape_error("fused_stream face", *face_aligned);
    face_src = adapt_face(tape, bind, tape.leaf(*face_aligned));
  } else {
    face_src = null_face_rows(tape, bind, t_mel);
  }
  Var lip_src;
  if (use_lip && lip_aligned) {
    if (lip_aligned->rows() != t_mel || lip_aligned->cols() != cfg_.f_lip)
      throw_shape_error("fused_stream lip", *lip_aligned);
    lip_src = adapt_lip(tape, bind, tape.leaf(*lip_aligned));
  } else {
    lip_src = null_lip_rows(tape, bind, t_mel);
  }
  return fuse(tape, bind, text_src, face_src, lip_src);
}

}  // namespace dubkit
