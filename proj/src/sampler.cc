// src/sampler.cc

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

#include "dubkit/sampler.h"

#include <map>
#include <stdexcept>

#include "dubkit/align.h"

namespace dubkit {

InferenceMode inference_mode(const std::string& name) {
  if (name == "M1") return {"M1", false, false, true, false};
  if (name == "M2") return {"M2", false, false, false, true};
  if (name == "M3") return {"M3", true, true, true, false};
  if (name == "M4") return {"M4", true, true, false, true};
  if (name == "M5") return {"M5", false, true, false, true};
  throw std::invalid_argument("inference_mode: unknown mode '" + name +
                              "' (expected M1, M2, M3, M4 or M5)");
}

Grid cfg_combine(const Grid& full, const Grid& face_text, const Grid& lip_text,
                 const Grid& text_only, const Grid& uncond,
                 const GuidanceScales& scales) {
  for (const Grid* g : {&face_text, &lip_text, &text_only, &uncond})
    if (!g->same_shape(full)) throw_shape_error("cfg_combine", full, *g);
  Grid out = full;
  if (scales.face != 0.0) {
    out.add_scaled(face_text, scales.face);
    out.add_scaled(text_only, -scales.face);
  }
  if (scales.lip != 0.0) {
    out.add_scaled(lip_text, scales.lip);
    out.add_scaled(text_only, -scales.lip);
  }
  if (scales.text != 0.0) {
    out.add_scaled(text_only, scales.text);
    out.add_scaled(uncond, -scales.text);
  }
  return out;
}

Grid guided_estimate(const VariantFn& variant, bool face_available,
                     bool lip_available, const GuidanceScales& scales) {
  double s_face = face_available ? scales.face : 0.0;
  double s_lip = lip_available ? scales.lip : 0.0;
  double s_text = scales.text;

  std::map<int, Grid> memo;
  auto eval = [&](bool f, bool l, bool t, bool s) -> const Grid& {
    int key = (f ? 1 : 0) | (l ? 2 : 0) | (t ? 4 : 0) | (s ? 8 : 0);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, variant(f, l, t, s)).first;
    return it->second;
  };

  Grid out = eval(face_available, lip_available, true, true);
  if (s_face != 0.0) {
    out.add_scaled(eval(true, false, true, true), s_face);
    out.add_scaled(eval(false, false, true, true), -s_face);
  }
  if (s_lip != 0.0) {
    out.add_scaled(eval(false, true, true, true), s_lip);
    out.add_scaled(eval(false, false, true, true), -s_lip);
  }
  if (s_text != 0.0) {
    out.add_scaled(eval(false, false, true, true), s_text);
    out.add_scaled(eval(false, false, false, false), -s_text);
  }
  return out;
}

Grid euler_integrate(const std::vector<int64_t>& shape, const FieldFn& field,
                     int64_t steps, uint64_t seed) {
  if (steps <= 0)
    throw std::invalid_argument("euler_integrate: steps must be positive");
  Rng rng(seed);
  Grid x = Grid::randn(shape, rng);
  double h = 1.0 / static_cast<double>(steps);
  for (int64_t k = 0; k < steps; ++k) {
    double t = static_cast<double>(k) * h;
    Grid v = field(x, t);
    if (!v.same_shape(x)) throw_shape_error("euler_integrate field", v, x);
    if (!v.all_finite())
      throw std::runtime_error("euler_integrate: non-finite field at step " +
                               std::to_string(k));
    x.add_scaled(v, h);
  }
  return x;
}

namespace {

// Branch rows over the full timeline: learned null rows over the context
// prefix, the encoded stream over the generated region.
Grid stack_rows(const Grid& null_row, int64_t ctx_len, const Grid* gen_rows,
                int64_t t_total) {
  Grid out({t_total, null_row.cols()});
  for (int64_t i = 0; i < t_total; ++i)
    for (int64_t j = 0; j < null_row.cols(); ++j) out.at(i, j) = null_row.at(0, j);
  if (gen_rows)
    for (int64_t i = 0; i < gen_rows->rows(); ++i)
      for (int64_t j = 0; j < gen_rows->cols(); ++j)
        out.at(ctx_len + i, j) = gen_rows->at(i, j);
  return out;
}

}  // namespace

MelGrid dub(const Model& model, const DubRequest& request,
            const InferenceMode& mode) {
  if ((mode.face || mode.lip) && request.visual == nullptr)
    throw std::invalid_argument("dub: mode " + mode.name +
                                " needs a visual track");
  if ((mode.context || mode.spkemb) && request.reference == nullptr)
    throw std::invalid_argument("dub: mode " + mode.name +
                                " needs a reference clip");
  if (request.steps <= 0)
    throw std::invalid_argument("dub: steps must be positive");
  if (request.text.length() == 0)
    throw std::invalid_argument("dub: empty text");

  int64_t t_gen = request.t_mel;
  if (t_gen <= 0) {
    if (request.visual == nullptr)
      throw std::invalid_argument(
          "dub: output length needs either t_mel or a visual track");
    t_gen = mel_frames_for_video_frames(request.visual->video_frames());
  }
  if (t_gen < request.text.length())
    throw std::invalid_argument("dub: output of " + std::to_string(t_gen) +
                                " frames cannot cover " +
                                std::to_string(request.text.length()) +
                                " tokens");

  const int64_t bins = model.cfg.estimator.mel_bins;
  int64_t ctx_len = 0;
  if (mode.context)
    ctx_len = std::min<int64_t>(request.reference->frames(), kMaxContextFrames);
  int64_t t_total = ctx_len + t_gen;

  Grid context({bins, t_total});
  if (mode.context) {
    if (request.reference->bins() != bins)
      throw_shape_error("dub reference", request.reference->values);
    for (int64_t d = 0; d < bins; ++d)
      for (int64_t t = 0; t < ctx_len; ++t)
        context.at(d, t) = request.reference->values.at(d, t);
  }

  bool face_avail = mode.face && request.visual != nullptr;
  bool lip_avail = mode.lip && request.visual != nullptr;
  Grid face_gen, lip_gen;  // [t_gen x channels]
  if (face_avail || lip_avail) {
    AlignedVisual av = align_visual(*request.visual, t_gen);
    if (face_avail) face_gen = transpose(av.face);
    if (lip_avail) lip_gen = transpose(av.lip);
  }

  const ParamSet& params = model.params;

  // Condition streams are independent of the flow state, so each needed
  // (face, lip, text) combination of the fused stream is built once.
  Grid text_rows_on, face_rows_on, lip_rows_on;
  {
    Tape tape(false);
    Binding bind(tape, params);
    Grid text_gen = tape.value(
        model.fusion.encode_text(tape, bind, request.text, t_gen));
    text_rows_on =
        stack_rows(params.get("fusion.text.null").value, ctx_len, &text_gen,
                   t_total);
    if (face_avail) {
      Grid ad = tape.value(
          model.fusion.adapt_face(tape, bind, tape.leaf(face_gen)));
      face_rows_on =
          stack_rows(params.get("fusion.face.null").value, ctx_len, &ad, t_total);
    }
    if (lip_avail) {
      Grid ad = tape.value(
          model.fusion.adapt_lip(tape, bind, tape.leaf(lip_gen)));
      lip_rows_on =
          stack_rows(params.get("fusion.lip.null").value, ctx_len, &ad, t_total);
    }
  }
  Grid text_rows_off =
      stack_rows(params.get("fusion.text.null").value, 0, nullptr, t_total);
  Grid face_rows_off =
      stack_rows(params.get("fusion.face.null").value, 0, nullptr, t_total);
  Grid lip_rows_off =
      stack_rows(params.get("fusion.lip.null").value, 0, nullptr, t_total);

  std::map<int, Grid> z_memo;
  auto fused = [&](bool f, bool l, bool t) -> const Grid& {
    int key = (f ? 1 : 0) | (l ? 2 : 0) | (t ? 4 : 0);
    auto it = z_memo.find(key);
    if (it != z_memo.end()) return it->second;
    Tape tape(false);
    Binding bind(tape, params);
    Var z = model.fusion.fuse(
        tape, bind, tape.leaf(t ? text_rows_on : text_rows_off),
        tape.leaf(f && face_avail ? face_rows_on : face_rows_off),
        tape.leaf(l && lip_avail ? lip_rows_on : lip_rows_off));
    return z_memo.emplace(key, tape.value(z)).first->second;
  };

  Grid e_g;
  if (mode.spkemb) {
    Tape tape(false);
    Binding bind(tape, params);
    e_g = tape.value(
        model.speaker.combined_embed(tape, bind, *request.reference, params));
  }

  SpeakerMode base_mode = mode.context && mode.spkemb ? SpeakerMode::kBoth
                          : mode.context              ? SpeakerMode::kContextOnly
                          : mode.spkemb               ? SpeakerMode::kSpkembOnly
                                                      : SpeakerMode::kNone;

  FieldFn field = [&](const Grid& x, double t) -> Grid {
    VariantFn variant = [&](bool f_on, bool l_on, bool t_on,
                            bool s_on) -> Grid {
      Tape tape(false);
      Binding bind(tape, params);
      ConditionFlags flags;
      flags.use_text = t_on;
      flags.use_face = f_on;
      flags.use_lip = l_on;
      flags.speaker_mode = s_on ? base_mode : SpeakerMode::kNone;
      Var z = tape.leaf(fused(f_on, l_on, t_on));
      std::optional<Var> e;
      if (s_on && mode.spkemb) e = tape.leaf(e_g);
      return tape.value(
          model.estimator.forward(tape, bind, x, context, z, e, t, flags));
    };
    return guided_estimate(variant, face_avail, lip_avail, request.scales);
  };

  uint64_t noise_seed = derive_seed(request.seed, 0xD0B0001ULL);
  Grid x = euler_integrate({bins, t_total}, field, request.steps, noise_seed);

  Grid out({bins, t_gen});
  for (int64_t d = 0; d < bins; ++d)
    for (int64_t t = 0; t < t_gen; ++t) out.at(d, t) = x.at(d, ctx_len + t);
  return MelGrid(std::move(out));
}

}  // namespace dubkit
