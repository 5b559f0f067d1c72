// src/gradcheck_suite.cc

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

#include <cmath>
#include <ostream>

#include "dubkit/gradcheck.h"
#include "dubkit/model.h"
#include "dubkit/nn.h"

namespace dubkit {

namespace {

// Fixed non-uniform weights so every output element gets its own adjoint.
Grid loss_weights(const std::vector<int64_t>& shape) {
  Grid w(shape);
  for (int64_t i = 0; i < w.numel(); ++i)
    w.flat()[i] = 0.3 + static_cast<double>((3 * i) % 7) * 0.1;
  return w;
}

Var weighted_sum(Tape& tape, Var out) {
  Grid w = loss_weights(tape.value(out).shape());
  return tape.sum(tape.mul(out, tape.leaf(std::move(w))));
}

// Builds the op output from bound parameters; used for both the analytic
// pass and the finite-difference re-evaluations.
using OpFn = std::function<Var(Tape&, Binding&)>;

double check_op(const OpFn& op, ParamSet& params) {
  Tape tape;
  Binding bind(tape, params);
  Var loss = weighted_sum(tape, op(tape, bind));
  std::vector<Grid> analytic = backward(tape, loss, bind);
  LossFn fn = [&op](const ParamSet& ps) {
    Tape t;
    Binding b(t, ps);
    return t.value(weighted_sum(t, op(t, b))).flat()[0];
  };
  std::vector<Grid> numeric = finite_diff_grad(fn, params);
  return compare_gradients(analytic, numeric, params).max_rel_err;
}

struct SuiteLogger {
  std::ostream& log;
  bool all_ok = true;

  void report(const std::string& name, double err) {
    bool pass = std::isfinite(err) && err < 1e-4;
    log << (pass ? "ok   " : "FAIL ") << name << " max_rel_err=" << err
        << "\n";
    all_ok = all_ok && pass;
  }
};

void check_elementwise_ops(SuiteLogger& s) {
  Rng rng(12345);
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 4}, rng));
    ps.add("w", Grid::randn({4, 5}, rng));
    ps.add("b", Grid::randn({1, 5}, rng));
    s.report("linear", check_op([](Tape& t, Binding& b) {
               return t.linear(b["x"], b["w"], b["b"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 4}, rng));
    s.report("gelu", check_op([](Tape& t, Binding& b) {
               return t.gelu(b["x"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 6}, rng));
    ps.add("g", Grid::randn({1, 6}, rng));
    ps.add("s", Grid::randn({1, 6}, rng));
    s.report("layer_norm", check_op([](Tape& t, Binding& b) {
               return t.layer_norm(b["x"], b["g"], b["s"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 7}, rng));
    ps.add("k", Grid::randn({2, 3, 3}, rng));
    ps.add("b", Grid::randn({1, 2}, rng));
    s.report("conv1d+bias", check_op([](Tape& t, Binding& b) {
               return t.add_channel_bias(t.conv1d(b["x"], b["k"]), b["b"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("q", Grid::randn({5, 6}, rng));
    ps.add("k", Grid::randn({5, 6}, rng));
    ps.add("v", Grid::randn({5, 6}, rng));
    s.report("mhsa", check_op([](Tape& t, Binding& b) {
               return t.mhsa(b["q"], b["k"], b["v"], 2);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 5}, rng));
    s.report("mean_std_pool", check_op([](Tape& t, Binding& b) {
               return t.mean_std_pool(b["x"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({1, 6}, rng));
    s.report("l2_normalize", check_op([](Tape& t, Binding& b) {
               return t.l2_normalize(b["x"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("a", Grid::randn({3, 4}, rng));
    ps.add("b", Grid::randn({3, 4}, rng));
    s.report("add/sub/mul/scale", check_op([](Tape& t, Binding& b) {
               Var u = t.add(b["a"], b["b"]);
               Var v = t.sub(t.scale(u, 1.7), t.mul(b["a"], b["b"]));
               return v;
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({4, 3}, rng));
    ps.add("v", Grid::randn({1, 3}, rng));
    s.report("add_rowvec", check_op([](Tape& t, Binding& b) {
               return t.add_rowvec(b["x"], b["v"]);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("a", Grid::randn({3, 2}, rng));
    ps.add("b", Grid::randn({3, 4}, rng));
    ps.add("c", Grid::randn({3, 1}, rng));
    s.report("concat_cols", check_op([](Tape& t, Binding& b) {
               return t.concat_cols({b["a"], b["b"], b["c"]});
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({4, 3}, rng));
    s.report("gather_rows", check_op([](Tape& t, Binding& b) {
               return t.gather_rows(b["x"], {0, 2, 2, 1, 3, 2});
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("v", Grid::randn({1, 4}, rng));
    s.report("repeat_row", check_op([](Tape& t, Binding& b) {
               return t.repeat_row(b["v"], 5);
             }, ps));
  }
  {
    ParamSet ps;
    ps.add("x", Grid::randn({3, 5}, rng));
    s.report("transpose", check_op([](Tape& t, Binding& b) {
               return t.transpose(b["x"]);
             }, ps));
  }
  {
    ParamSet ps;
    AttentionBlockSpec blk;
    Rng init(777);
    blk.init(ps, "blk", 8, 2, 2, init);
    ps.add("x", Grid::randn({5, 8}, rng));
    s.report("attention_block", check_op([blk](Tape& t, Binding& b) {
               return blk.apply(t, b, b["x"]);
             }, ps));
  }
}

// Composed check: the full conditional flow model at reduced width,
// spectrogram 4 x 6.
double check_full_model(SpeakerMode mode, bool use_text, bool use_face,
                        bool use_lip) {
  Model model(ModelConfig::tiny(4), 2024);
  Rng rng(555);
  // The output, mixing and adapter-up projections start at zero, which
  // blocks gradient flow upstream of them; nudge every trainable weight off
  // init so the check covers the whole graph.
  for (size_t i = 0; i < model.params.size(); ++i) {
    Param& p = model.params.at(i);
    if (!p.trainable) continue;
    for (double& v : p.value.flat()) v += 0.05 * rng.normal();
  }
  const int64_t frames = 6;
  Grid x1 = Grid::randn({4, frames}, rng);
  Grid x0 = Grid::randn({4, frames}, rng);
  double t = 0.37;
  Grid x_t = interpolate_path(x0, x1, t);
  BinaryMask mask;
  mask.frame_flags = {0, 1, 1, 1, 0, 1};
  Grid context(x1.shape());
  for (int64_t tt = 0; tt < frames; ++tt)
    if (!mask.is_masked(tt))
      for (int64_t d = 0; d < 4; ++d) context.at(d, tt) = x1.at(d, tt);
  TextSequence text;
  text.tokens = {1, 3};
  Grid face = Grid::randn({frames, kFaceChannels}, rng);
  Grid lip = Grid::randn({frames, kLipChannels}, rng);
  MelGrid segment(Grid::randn({4, 9}, rng));
  ConditionFlags flags{use_text, use_face, use_lip, mode};

  auto build_loss = [&](Tape& tape, Binding& bind) -> Var {
    Var z = model.fusion.fused_stream(tape, bind, &text, &face, &lip,
                                      flags.use_text, flags.use_face,
                                      flags.use_lip, frames);
    std::optional<Var> e_g;
    if (speaker_mode_uses_embedding(flags.speaker_mode))
      e_g = model.speaker.combined_embed(tape, bind, segment, bind.params());
    Var v = model.estimator.forward(tape, bind, x_t, context, z, e_g, t, flags);
    return fm_loss(tape, v, x1, x0, mask);
  };

  Tape tape;
  Binding bind(tape, model.params);
  std::vector<Grid> analytic = backward(tape, build_loss(tape, bind), bind);

  LossFn fn = [&](const ParamSet& ps) {
    Tape t2;
    Binding b2(t2, ps);
    return t2.value(build_loss(t2, b2)).flat()[0];
  };
  std::vector<Grid> numeric = finite_diff_grad(fn, model.params);
  return compare_gradients(analytic, numeric, model.params).max_rel_err;
}

}  // namespace

bool run_grad_check_suite(std::ostream& log) {
  SuiteLogger s{log};
  check_elementwise_ops(s);
  s.report("full_model_all_conditions",
           check_full_model(SpeakerMode::kBoth, true, true, true));
  s.report("full_model_null_branches",
           check_full_model(SpeakerMode::kContextOnly, false, false, true));
  log << (s.all_ok ? "gradient audit passed" : "gradient audit FAILED") << "\n";
  return s.all_ok;
}

}  // namespace dubkit
