// tests/test_speaker.cc

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

#include "doctest.h"
#include "dubkit/corpus.h"
#include "dubkit/model.h"

using namespace dubkit;

namespace {

MelGrid random_clip(int64_t bins, int64_t frames, uint64_t seed) {
  Rng rng(seed);
  return MelGrid(Grid::randn({bins, frames}, rng));
}

double l2_norm(const Grid& g) {
  double s = 0;
  for (double v : g.flat()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("frozen projection ignores the model seed") {
  Model a(ModelConfig::tiny(4), 1);
  Model b(ModelConfig::tiny(4), 999);
  const Param& pa = a.params.get("speaker.frozen.proj");
  const Param& pb = b.params.get("speaker.frozen.proj");
  CHECK_FALSE(pa.trainable);
  CHECK(grids_equal(pa.value, pb.value));

  // Learnable weights do depend on the seed.
  CHECK_FALSE(grids_equal(a.params.get("speaker.out.w").value,
                          b.params.get("speaker.out.w").value));
}

TEST_CASE("frozen embedding is normalized and seed-invariant") {
  Model a(ModelConfig::tiny(4), 1);
  Model b(ModelConfig::tiny(4), 2);
  MelGrid clip = random_clip(4, 30, 5);
  Grid ea = a.speaker.pretrained_embed(clip, a.params);
  Grid eb = b.speaker.pretrained_embed(clip, b.params);
  CHECK(grids_equal(ea, eb));
  CHECK(l2_norm(ea) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ea.rows() == 1);
  CHECK(ea.cols() == a.cfg.speaker.f_embed);
}

TEST_CASE("frozen embedding survives constant clips") {
  // A constant channel has population std exactly 0; the embedding must
  // stay finite and normalized.
  Model m(ModelConfig::tiny(4), 3);
  MelGrid clip(Grid::full({4, 20}, 1.25));
  Grid e = m.speaker.pretrained_embed(clip, m.params);
  CHECK(e.all_finite());
  CHECK(l2_norm(e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("combined embedding is the sum of its branches") {
  Model m(ModelConfig::tiny(4), 8);
  MelGrid clip = random_clip(4, 24, 9);

  Tape tape;
  Binding bind(tape, m.params);
  Var comb = m.speaker.combined_embed(tape, bind, clip, m.params);
  Var learn = m.speaker.learnable_embed(tape, bind, clip);
  Grid pre = m.speaker.pretrained_embed(clip, m.params);

  Grid want = add(pre, tape.value(learn));
  CHECK(grids_equal(tape.value(comb), want));

  Grid via_helper = combine_embeddings(pre, tape.value(learn));
  CHECK(grids_equal(want, via_helper));
}

TEST_CASE("embeddings separate corpus speakers better than chance") {
  CorpusConfig cfg;
  cfg.speakers = 2;
  cfg.samples_per_speaker = 3;
  Corpus corpus = generate_corpus(cfg, 21);
  Model m(ModelConfig::defaults(), 4);

  auto embed = [&](const MelGrid& clip) {
    return m.speaker.pretrained_embed(clip, m.params);
  };
  auto cosine = [](const Grid& x, const Grid& y) {
    double d = 0;
    for (int64_t j = 0; j < x.cols(); ++j) d += x.at(0, j) * y.at(0, j);
    return d;  // both embeddings are unit length
  };

  double same = cosine(embed(corpus[0].mel), embed(corpus[1].mel));
  double diff = cosine(embed(corpus[0].mel), embed(corpus[4].mel));
  CHECK(same > diff);
}

TEST_CASE("segment extraction length law") {
  Rng rng(15);

  MelGrid long_clip = random_clip(4, 200, 1);
  for (int i = 0; i < 300; ++i) {
    MelGrid seg = extract_segment(long_clip, rng);
    CHECK(seg.frames() >= 25);
    CHECK(seg.frames() <= 190);
    CHECK(seg.bins() == 4);
  }

  MelGrid mid_clip = random_clip(4, 30, 2);
  bool saw_25 = false, saw_30 = false;
  for (int i = 0; i < 300; ++i) {
    MelGrid seg = extract_segment(mid_clip, rng);
    CHECK(seg.frames() >= 25);
    CHECK(seg.frames() <= 30);
    saw_25 = saw_25 || seg.frames() == 25;
    saw_30 = saw_30 || seg.frames() == 30;
  }
  CHECK(saw_25);
  CHECK(saw_30);

  // At or below the lower clamp the whole clip is the segment.
  MelGrid short_clip = random_clip(4, 20, 3);
  MelGrid seg = extract_segment(short_clip, rng);
  CHECK(seg.frames() == 20);
  CHECK(grids_equal(seg.values, short_clip.values));

  MelGrid tiny_clip = random_clip(4, 7, 4);
  CHECK_THROWS_AS(extract_segment(tiny_clip, rng), std::invalid_argument);
}

TEST_CASE("segments are contiguous slices") {
  Rng rng(33);
  MelGrid clip = random_clip(3, 40, 6);
  for (int i = 0; i < 50; ++i) {
    MelGrid seg = extract_segment(clip, rng);
    // Locate the slice by matching the first column.
    bool found = false;
    for (int64_t start = 0; start + seg.frames() <= clip.frames() && !found;
         ++start) {
      bool match = true;
      for (int64_t d = 0; d < clip.bins() && match; ++d)
        for (int64_t t = 0; t < seg.frames() && match; ++t)
          match = seg.values.at(d, t) == clip.values.at(d, start + t);
      found = match;
    }
    CHECK(found);
  }
}
