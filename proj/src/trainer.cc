// src/trainer.cc

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

#include "dubkit/trainer.h"

#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <sstream>

#include "dubkit/align.h"
#include "dubkit/binio.h"
#include "dubkit/optim.h"

namespace dubkit {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw FormatError("TrainConfig: bad value '" + s + "' for " + key);
  }
}

int64_t parse_int(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return static_cast<int64_t>(v);
  } catch (const std::exception&) {
    throw FormatError("TrainConfig: bad value '" + s + "' for " + key);
  }
}

uint64_t parse_uint(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return static_cast<uint64_t>(v);
  } catch (const std::exception&) {
    throw FormatError("TrainConfig: bad value '" + s + "' for " + key);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate <= 0.0)
    throw std::invalid_argument("TrainConfig: learning rate must be positive");
  for (double p : {p_speaker_embed, p_drop_text, p_drop_face, p_drop_lip})
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("TrainConfig: probabilities must lie in [0, 1]");
  if (steps <= 0 || batch_size <= 0)
    throw std::invalid_argument("TrainConfig: steps and batch size must be positive");
  if (checkpoint_every <= 0)
    throw std::invalid_argument("TrainConfig: checkpoint interval must be positive");
}

std::string TrainConfig::to_text() const {
  std::ostringstream os;
  os << "learning_rate=" << fmt_double(learning_rate) << "\n"
     << "p_speaker_embed=" << fmt_double(p_speaker_embed) << "\n"
     << "p_drop_text=" << fmt_double(p_drop_text) << "\n"
     << "p_drop_face=" << fmt_double(p_drop_face) << "\n"
     << "p_drop_lip=" << fmt_double(p_drop_lip) << "\n"
     << "steps=" << steps << "\n"
     << "batch_size=" << batch_size << "\n"
     << "seed=" << seed << "\n"
     << "checkpoint_every=" << checkpoint_every << "\n";
  return os.str();
}

TrainConfig TrainConfig::from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("TrainConfig: malformed line '" + line + "'");
    std::string key = line.substr(0, eq);
    if (kv.count(key))
      throw FormatError("TrainConfig: duplicate key '" + key + "'");
    kv[key] = line.substr(eq + 1);
  }
  const char* expected[] = {"learning_rate", "p_speaker_embed", "p_drop_text",
                            "p_drop_face",   "p_drop_lip",      "steps",
                            "batch_size",    "seed",            "checkpoint_every"};
  for (const char* key : expected)
    if (!kv.count(key)) throw FormatError(std::string("TrainConfig: missing key '") + key + "'");
  if (kv.size() != std::size(expected))
    for (const auto& [key, value] : kv) {
      bool known = false;
      for (const char* k : expected) known = known || key == k;
      if (!known) throw FormatError("TrainConfig: unknown key '" + key + "'");
    }
  TrainConfig cfg;
  cfg.learning_rate = parse_double(kv["learning_rate"], "learning_rate");
  cfg.p_speaker_embed = parse_double(kv["p_speaker_embed"], "p_speaker_embed");
  cfg.p_drop_text = parse_double(kv["p_drop_text"], "p_drop_text");
  cfg.p_drop_face = parse_double(kv["p_drop_face"], "p_drop_face");
  cfg.p_drop_lip = parse_double(kv["p_drop_lip"], "p_drop_lip");
  cfg.steps = parse_int(kv["steps"], "steps");
  cfg.batch_size = parse_int(kv["batch_size"], "batch_size");
  cfg.seed = parse_uint(kv["seed"], "seed");
  cfg.checkpoint_every = parse_int(kv["checkpoint_every"], "checkpoint_every");
  cfg.validate();
  return cfg;
}

uint64_t train_step_seed(uint64_t seed, int64_t step) {
  return derive_seed(seed, 0x57E40000ULL + static_cast<uint64_t>(step));
}

TrainResult train(Model& model, const Corpus& corpus, const TrainConfig& config,
                  const TrainHooks& hooks) {
  config.validate();
  std::vector<const Sample*> train_set = corpus_split(corpus, Split::kTrain);
  if (train_set.empty())
    throw std::invalid_argument("train: empty training split");

  ConditionProbs probs{config.p_speaker_embed, config.p_drop_text,
                       config.p_drop_face, config.p_drop_lip};

  // Visual streams aligned to the mel rate once, stored time-major.
  struct Prepared {
    Grid face, lip;
  };
  std::vector<Prepared> prepared(train_set.size());
  for (size_t i = 0; i < train_set.size(); ++i) {
    AlignedVisual av =
        align_visual(train_set[i]->visual, train_set[i]->mel.frames());
    prepared[i].face = transpose(av.face);
    prepared[i].lip = transpose(av.lip);
  }

  AdamOptimizer opt(model.params, config.learning_rate);
  TrainResult result;
  result.loss_trace.reserve(static_cast<size_t>(config.steps));

  for (int64_t step = 0; step < config.steps; ++step) {
    uint64_t step_seed = train_step_seed(config.seed, step);
    Rng rng(step_seed);
    std::vector<Grid> grad_sum;
    double loss_sum = 0.0;
    for (int64_t b = 0; b < config.batch_size; ++b) {
      size_t idx = static_cast<size_t>(
          rng.uniform_int(static_cast<uint64_t>(train_set.size())));
      const Sample& sample = *train_set[idx];
      int64_t frames = sample.mel.frames();
      const Grid& x1 = sample.mel.values;

      double t = rng.uniform01();
      Grid x0 = Grid::randn({sample.mel.bins(), frames}, rng);
      BinaryMask mask = sample_mask(frames, rng);
      ConditionFlags flags = sample_condition_flags(rng, probs);
      MelGrid segment;
      if (speaker_mode_uses_embedding(flags.speaker_mode))
        segment = extract_segment(sample.mel, rng);

      Grid context(x1.shape());
      for (int64_t tt = 0; tt < frames; ++tt)
        if (!mask.is_masked(tt))
          for (int64_t d = 0; d < x1.rows(); ++d)
            context.at(d, tt) = x1.at(d, tt);
      Grid x_t = interpolate_path(x0, x1, t);

      Tape tape;
      Binding bind(tape, model.params);
      Var z_tv = model.fusion.fused_stream(
          tape, bind, &sample.text, &prepared[idx].face, &prepared[idx].lip,
          flags.use_text, flags.use_face, flags.use_lip, frames);
      std::optional<Var> e_g;
      if (speaker_mode_uses_embedding(flags.speaker_mode))
        e_g = model.speaker.combined_embed(tape, bind, segment, model.params);
      Var v = model.estimator.forward(tape, bind, x_t, context, z_tv, e_g, t,
                                      flags);
      Var loss = fm_loss(tape, v, x1, x0, mask);
      double loss_value = tape.value(loss).flat()[0];
      if (!std::isfinite(loss_value))
        throw TrainAbort("train: non-finite loss at step " +
                             std::to_string(step) + " (step seed " +
                             std::to_string(step_seed) + ")",
                         step, step_seed);
      loss_sum += loss_value;
      std::vector<Grid> grads = backward(tape, loss, bind);
      if (grad_sum.empty()) {
        grad_sum = std::move(grads);
      } else {
        for (size_t g = 0; g < grads.size(); ++g)
          if (grads[g].numel() > 0 && grad_sum[g].numel() > 0)
            grad_sum[g].add(grads[g]);
      }
    }
    double inv_b = 1.0 / static_cast<double>(config.batch_size);
    for (Grid& g : grad_sum) g.scale_inplace(inv_b);
    opt.step(grad_sum);
    result.loss_trace.push_back(loss_sum * inv_b);

    int64_t done = step + 1;
    if (hooks.on_checkpoint &&
        (done % config.checkpoint_every == 0 || done == config.steps))
      hooks.on_checkpoint(done, model, result.loss_trace);
  }
  return result;
}

}  // namespace dubkit
