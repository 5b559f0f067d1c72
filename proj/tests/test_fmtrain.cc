// tests/test_fmtrain.cc

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
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "dubkit/binio.h"
#include "dubkit/checkpoint.h"

using namespace dubkit;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Corpus small_corpus(uint64_t seed) {
  CorpusConfig cfg;
  cfg.speakers = 2;
  cfg.samples_per_speaker = 3;
  return generate_corpus(cfg, seed);
}

}  // namespace

TEST_CASE("interpolation endpoints and midpoint") {
  Rng rng(2);
  Grid x0 = Grid::randn({3, 5}, rng);
  Grid x1 = Grid::randn({3, 5}, rng);
  CHECK(grids_equal(interpolate_path(x0, x1, 0.0), x0));
  CHECK(grids_equal(interpolate_path(x0, x1, 1.0), x1));
  Grid mid = interpolate_path(x0, x1, 0.25);
  for (int64_t i = 0; i < x0.numel(); ++i)
    CHECK(mid.flat()[i] ==
          doctest::Approx(0.75 * x0.flat()[i] + 0.25 * x1.flat()[i])
              .epsilon(1e-15));
  CHECK_THROWS_AS(interpolate_path(x0, x1, -0.01), std::domain_error);
  CHECK_THROWS_AS(interpolate_path(x0, x1, 1.01), std::domain_error);
}

TEST_CASE("an exact displacement stub zeroes the loss") {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    Grid x0 = Grid::randn({4, 9}, rng);
    Grid x1 = Grid::randn({4, 9}, rng);
    BinaryMask mask = sample_mask(9, rng);
    Tape tape;
    Var pred = tape.leaf(sub(x1, x0));
    Var loss = fm_loss(tape, pred, x1, x0, mask);
    CHECK(std::abs(tape.value(loss).flat()[0]) < 1e-12);
  }
}

TEST_CASE("masked loss closed form") {
  // 2 bins x 3 frames, middle frame masked only.
  Grid x0 = Grid::matrix({{0, 0, 0}, {0, 0, 0}});
  Grid x1 = Grid::matrix({{1, 2, 3}, {4, 5, 6}});
  BinaryMask mask;
  mask.frame_flags = {0, 1, 0};
  Tape tape;
  Var pred = tape.leaf(Grid::matrix({{9, 9, 9}, {9, 9, 9}}));
  Var loss = fm_loss(tape, pred, x1, x0, mask);
  // Masked elements: (9-2)^2 and (9-5)^2, averaged over 2 elements.
  CHECK(tape.value(loss).flat()[0] == doctest::Approx(32.5).epsilon(1e-14));

  // Unmasked frames must not leak in; change them and recheck.
  Grid x1b = Grid::matrix({{-7, 2, 11}, {0, 5, -2}});
  Tape tape2;
  Var pred2 = tape2.leaf(Grid::matrix({{9, 9, 9}, {9, 9, 9}}));
  Var loss2 = fm_loss(tape2, pred2, x1b, x0, mask);
  CHECK(tape2.value(loss2).flat()[0] == tape.value(loss).flat()[0]);
}

TEST_CASE("all-zero mask gives exactly zero loss") {
  Rng rng(8);
  Grid x0 = Grid::randn({3, 4}, rng);
  Grid x1 = Grid::randn({3, 4}, rng);
  BinaryMask mask;
  mask.frame_flags = {0, 0, 0, 0};
  Tape tape;
  Var pred = tape.leaf(Grid::randn({3, 4}, rng), true);
  bool empty = false;
  Var loss = fm_loss(tape, pred, x1, x0, mask, &empty);
  CHECK(empty);
  CHECK(tape.value(loss).flat()[0] == 0.0);
  tape.backward(loss);
  Grid g = tape.grad(pred);
  for (double v : g.flat()) CHECK(v == 0.0);
}

TEST_CASE("condition draws follow the documented order") {
  // Replay the four uniform draws (speaker, text, face, lip) against a
  // same-seed stream.
  ConditionProbs probs;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng a(seed), b(seed);
    ConditionFlags flags = sample_condition_flags(a, probs);
    bool embed = b.uniform01() < probs.p_speaker_embed;
    bool drop_text = b.uniform01() < probs.p_drop_text;
    bool drop_face = b.uniform01() < probs.p_drop_face;
    bool drop_lip = b.uniform01() < probs.p_drop_lip;
    CHECK(flags.speaker_mode == (embed ? SpeakerMode::kSpkembOnly
                                       : SpeakerMode::kContextOnly));
    CHECK(flags.use_text == !drop_text);
    CHECK(flags.use_face == !drop_face);
    CHECK(flags.use_lip == !drop_lip);
  }
}

TEST_CASE("condition frequencies approach their probabilities") {
  ConditionProbs probs;
  Rng rng(123);
  const int n = 20000;
  int embed = 0, text = 0, face = 0, lip = 0;
  for (int i = 0; i < n; ++i) {
    ConditionFlags f = sample_condition_flags(rng, probs);
    embed += f.speaker_mode == SpeakerMode::kSpkembOnly;
    text += !f.use_text;
    face += !f.use_face;
    lip += !f.use_lip;
  }
  CHECK(std::abs(static_cast<double>(embed) / n - 0.8) < 0.01);
  CHECK(std::abs(static_cast<double>(text) / n - 0.2) < 0.01);
  CHECK(std::abs(static_cast<double>(face) / n - 0.6) < 0.01);
  CHECK(std::abs(static_cast<double>(lip) / n - 0.6) < 0.01);
}

TEST_CASE("train config text round trip is strict") {
  TrainConfig cfg;
  cfg.learning_rate = 3.25e-4;
  cfg.p_drop_face = 0.55;
  cfg.steps = 123;
  cfg.seed = 0xFFFFFFFFFFFFFFFFULL;
  std::string text = cfg.to_text();
  TrainConfig back = TrainConfig::from_text(text);
  CHECK(back.learning_rate == cfg.learning_rate);
  CHECK(back.p_speaker_embed == cfg.p_speaker_embed);
  CHECK(back.p_drop_text == cfg.p_drop_text);
  CHECK(back.p_drop_face == cfg.p_drop_face);
  CHECK(back.p_drop_lip == cfg.p_drop_lip);
  CHECK(back.steps == cfg.steps);
  CHECK(back.batch_size == cfg.batch_size);
  CHECK(back.seed == cfg.seed);
  CHECK(back.checkpoint_every == cfg.checkpoint_every);
  CHECK(back.to_text() == text);

  CHECK_THROWS_AS(TrainConfig::from_text("nonsense"), FormatError);
  CHECK_THROWS_AS(TrainConfig::from_text(text + "extra_key=1\n"), FormatError);
  std::string truncated = text.substr(0, text.find('\n') + 1);
  CHECK_THROWS_AS(TrainConfig::from_text(truncated), FormatError);
}

TEST_CASE("training runs are reproducible bit for bit") {
  Corpus corpus = small_corpus(40);
  TrainConfig cfg;
  cfg.steps = 4;
  cfg.batch_size = 1;
  cfg.seed = 9;
  cfg.checkpoint_every = 2;

  Model m1(ModelConfig::defaults(), 55);
  Model m2(ModelConfig::defaults(), 55);
  std::vector<int64_t> hook_steps;
  TrainHooks hooks;
  hooks.on_checkpoint = [&](int64_t step, const Model&,
                            const std::vector<double>&) {
    hook_steps.push_back(step);
  };
  TrainResult r1 = train(m1, corpus, cfg, hooks);
  TrainResult r2 = train(m2, corpus, cfg);

  REQUIRE(r1.loss_trace.size() == 4);
  CHECK(r1.loss_trace == r2.loss_trace);
  for (double l : r1.loss_trace) CHECK(std::isfinite(l));
  CHECK(hook_steps == std::vector<int64_t>({2, 4}));

  REQUIRE(m1.params.size() == m2.params.size());
  for (size_t i = 0; i < m1.params.size(); ++i)
    CHECK(grids_equal(m1.params.at(i).value, m2.params.at(i).value));

  // A different training seed moves the weights differently.
  Model m3(ModelConfig::defaults(), 55);
  cfg.seed = 10;
  train(m3, corpus, cfg);
  bool diff = false;
  for (size_t i = 0; i < m1.params.size() && !diff; ++i)
    diff = !grids_equal(m1.params.at(i).value, m3.params.at(i).value);
  CHECK(diff);
}

TEST_CASE("training never touches frozen parameters") {
  Corpus corpus = small_corpus(41);
  TrainConfig cfg;
  cfg.steps = 3;
  cfg.batch_size = 1;
  Model model(ModelConfig::defaults(), 3);
  Grid frozen_before = model.params.get("speaker.frozen.proj").value;
  train(model, corpus, cfg);
  CHECK(grids_equal(model.params.get("speaker.frozen.proj").value,
                    frozen_before));
}

TEST_CASE("step seeds are distinct derived streams") {
  CHECK(train_step_seed(1, 0) != train_step_seed(1, 1));
  CHECK(train_step_seed(1, 5) != train_step_seed(2, 5));
  CHECK(train_step_seed(7, 3) == train_step_seed(7, 3));
}

TEST_CASE("empty train split is rejected") {
  Corpus corpus;
  TrainConfig cfg;
  cfg.steps = 1;
  Model model(ModelConfig::defaults(), 1);
  CHECK_THROWS_AS(train(model, corpus, cfg), std::invalid_argument);
}

TEST_CASE("checkpoint round trip is exact") {
  Model model(ModelConfig::tiny(4), 77);
  // Move weights off init so the payload is not structured zeros.
  Rng rng(5);
  for (size_t i = 0; i < model.params.size(); ++i) {
    Param& p = model.params.at(i);
    if (p.trainable)
      for (double& v : p.value.flat()) v += rng.normal();
  }
  TrainConfig cfg;
  cfg.learning_rate = 1.5e-3;
  cfg.seed = 31337;

  std::string path = temp_path("dubkit_test_ckpt.svck");
  save_checkpoint(path, cfg, model.params);

  Checkpoint ckpt = load_checkpoint(path);
  CHECK(ckpt.config.learning_rate == cfg.learning_rate);
  CHECK(ckpt.config.seed == cfg.seed);
  REQUIRE(ckpt.params.size() == model.params.size());
  for (size_t i = 0; i < model.params.size(); ++i) {
    CHECK(ckpt.params.at(i).name == model.params.at(i).name);
    CHECK(ckpt.params.at(i).trainable == model.params.at(i).trainable);
    CHECK(grids_equal(ckpt.params.at(i).value, model.params.at(i).value));
  }

  Model fresh(ModelConfig::tiny(4), 1);
  load_into_model(fresh, ckpt);
  for (size_t i = 0; i < model.params.size(); ++i)
    CHECK(grids_equal(fresh.params.at(i).value, model.params.at(i).value));

  // Identical saves are byte-identical.
  std::string path2 = temp_path("dubkit_test_ckpt2.svck");
  save_checkpoint(path2, cfg, model.params);
  CHECK(file_crc32(path) == file_crc32(path2));

  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("checkpoint refuses damage and mismatches") {
  Model model(ModelConfig::tiny(4), 12);
  TrainConfig cfg;
  std::string path = temp_path("dubkit_test_ckpt_bad.svck");
  save_checkpoint(path, cfg, model.params);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  in.close();

  auto write_bytes = [&](const std::string& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << data;
  };

  std::string flipped = bytes;
  flipped[bytes.size() / 3] ^= 0x01;
  write_bytes(flipped);
  CHECK_THROWS_AS(load_checkpoint(path), CorruptionError);

  write_bytes(bytes.substr(0, bytes.size() - 2));
  CHECK_THROWS_AS(load_checkpoint(path), CorruptionError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'Z';
  write_bytes(bad_magic);
  CHECK_THROWS_AS(load_checkpoint(path), CorruptionError);

  // Valid file, wrong architecture.
  write_bytes(bytes);
  Checkpoint ckpt = load_checkpoint(path);
  Model bigger(ModelConfig::tiny(6), 1);
  CHECK_THROWS_AS(load_into_model(bigger, ckpt), FormatError);

  std::filesystem::remove(path);
}
