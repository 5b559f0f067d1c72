// tests/test_fusion.cc

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

#include "doctest.h"
#include "dubkit/model.h"

using namespace dubkit;

namespace {

struct Fixture {
  Model model{ModelConfig::tiny(4), 404};
  TextSequence text;
  Grid face, lip;

  Fixture() {
    text.tokens = {1, 2, 5};
    Rng rng(88);
    face = Grid::randn({10, kFaceChannels}, rng);
    lip = Grid::randn({10, kLipChannels}, rng);
  }
};

}  // namespace

TEST_CASE("frame token map spreads tokens evenly") {
  auto map = FusionModel::frame_token_map(3, 10);
  std::vector<int64_t> want = {0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
  CHECK(map == want);

  CHECK(FusionModel::frame_token_map(4, 4) ==
        std::vector<int64_t>({0, 1, 2, 3}));
  CHECK_THROWS_AS(FusionModel::frame_token_map(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(FusionModel::frame_token_map(0, 4), std::invalid_argument);
}

TEST_CASE("text encoder validates tokens") {
  Fixture fx;
  Tape tape;
  Binding bind(tape, fx.model.params);
  TextSequence bad;
  bad.tokens = {1, static_cast<uint16_t>(fx.model.cfg.fusion.vocab)};
  CHECK_THROWS_AS(fx.model.fusion.encode_text(tape, bind, bad, 10),
                  std::invalid_argument);
}

TEST_CASE("fused stream equals the text branch at initialization") {
  Fixture fx;
  Tape tape;
  Binding bind(tape, fx.model.params);
  Var z = fx.model.fusion.fused_stream(tape, bind, &fx.text, &fx.face, &fx.lip,
                                       true, true, true, 10);
  Var t = fx.model.fusion.encode_text(tape, bind, fx.text, 10);
  CHECK(grids_equal(tape.value(z), tape.value(t)));
  CHECK(tape.value(z).rows() == 10);
  CHECK(tape.value(z).cols() == fx.model.cfg.fusion.c_text);
}

TEST_CASE("adapters are transparent at initialization") {
  // The up-projection starts at zero, so a fresh adapter reduces to its
  // input projection: out == face * W_in + b_in.
  Fixture fx;
  Tape tape;
  Binding bind(tape, fx.model.params);
  Var out = fx.model.fusion.adapt_face(tape, bind, tape.leaf(fx.face));

  const Grid& w = fx.model.params.get("fusion.face.in.w").value;
  const Grid& b = fx.model.params.get("fusion.face.in.b").value;
  Grid want = matmul(fx.face, w);
  for (int64_t i = 0; i < want.rows(); ++i)
    for (int64_t j = 0; j < want.cols(); ++j) want.at(i, j) += b.at(0, j);
  CHECK(grids_equal(tape.value(out), want));
}

TEST_CASE("dropped branches erase the input's influence") {
  Fixture fx;
  // Give the mixing projection real weights so visual branches matter when
  // enabled; the invariance below must come from the null-row substitution,
  // not from zero mixing weights.
  Rng noise(11);
  for (size_t i = 0; i < fx.model.params.size(); ++i) {
    Param& p = fx.model.params.at(i);
    if (p.trainable)
      for (double& v : p.value.flat()) v += 0.1 * noise.normal();
  }

  auto run = [&](const Grid* face, const Grid* lip, bool use_face,
                 bool use_lip) {
    Tape tape(false);
    Binding bind(tape, fx.model.params);
    Var z = fx.model.fusion.fused_stream(tape, bind, &fx.text, face, lip,
                                         true, use_face, use_lip, 10);
    return tape.value(z);
  };

  Rng rng(301);
  Grid other_face = Grid::randn({10, kFaceChannels}, rng);
  Grid other_lip = Grid::randn({10, kLipChannels}, rng);

  // Enabled branches react to their input.
  CHECK(max_abs_diff(run(&fx.face, &fx.lip, true, true),
                     run(&other_face, &fx.lip, true, true)) > 0.0);
  CHECK(max_abs_diff(run(&fx.face, &fx.lip, true, true),
                     run(&fx.face, &other_lip, true, true)) > 0.0);

  // Disabled branches are bit-invariant to their input.
  CHECK(grids_equal(run(&fx.face, &fx.lip, false, true),
                    run(&other_face, &fx.lip, false, true)));
  CHECK(grids_equal(run(&fx.face, &fx.lip, true, false),
                    run(&fx.face, &other_lip, true, false)));
  // Null pointer and cleared flag take the same path.
  CHECK(grids_equal(run(nullptr, &fx.lip, true, true),
                    run(&fx.face, &fx.lip, false, true)));

  // Dropped text falls back to its null row.
  Tape tape(false);
  Binding bind(tape, fx.model.params);
  Var z_no_text = fx.model.fusion.fused_stream(tape, bind, nullptr, &fx.face,
                                               &fx.lip, false, true, true, 10);
  CHECK(tape.value(z_no_text).all_finite());
}

TEST_CASE("fused stream validates visual shapes") {
  Fixture fx;
  Tape tape;
  Binding bind(tape, fx.model.params);
  Rng rng(4);
  Grid wrong_cols = Grid::randn({10, kFaceChannels + 1}, rng);
  CHECK_THROWS_AS(
      fx.model.fusion.fused_stream(tape, bind, &fx.text, &wrong_cols, &fx.lip,
                                   true, true, true, 10),
      std::invalid_argument);
  Grid wrong_rows = Grid::randn({9, kFaceChannels}, rng);
  CHECK_THROWS_AS(
      fx.model.fusion.fused_stream(tape, bind, &fx.text, &wrong_rows, &fx.lip,
                                   true, true, true, 10),
      std::invalid_argument);
}

TEST_CASE("a null text pointer selects the null branch") {
  Fixture fx;
  Tape tape(false);
  Binding bind(tape, fx.model.params);
  Var with_flag = fx.model.fusion.fused_stream(tape, bind, nullptr, &fx.face,
                                               &fx.lip, true, true, true, 10);
  Var without = fx.model.fusion.fused_stream(tape, bind, &fx.text, &fx.face,
                                             &fx.lip, false, true, true, 10);
  CHECK(grids_equal(tape.value(with_flag), tape.value(without)));
}
