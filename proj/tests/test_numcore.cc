// tests/test_numcore.cc

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
#include <sstream>

#include "doctest.h"
#include "dubkit/binio.h"
#include "dubkit/crc32.h"
#include "dubkit/gradcheck.h"
#include "dubkit/optim.h"
#include "dubkit/paramset.h"

using namespace dubkit;

TEST_CASE("splitmix64 matches the published reference stream") {
  // First output of the SplitMix64 reference generator from state 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("mt19937_64 stream is the standard one") {
  // C++ standard: the 10000th draw of mt19937_64 seeded with 5489.
  Rng rng(5489);
  uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.raw();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("rng determinism and substreams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());

  Rng c(42);
  Rng d1 = c.derive(7);
  for (int i = 0; i < 10; ++i) (void)c.normal();
  Rng d2 = c.derive(7);
  CHECK(d1.seed() == d2.seed());  // substream unaffected by parent draws
  CHECK(c.derive(7).seed() != c.derive(8).seed());
}

TEST_CASE("rng distribution laws") {
  Rng rng(7);
  double sum = 0, sum2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));

  double ns = 0, ns2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    ns += x;
    ns2 += x * x;
  }
  CHECK(std::abs(ns / n) < 0.02);
  CHECK(ns2 / n == doctest::Approx(1.0).epsilon(0.03));

  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) counts[rng.uniform_int(3)]++;
  for (int k = 0; k < 3; ++k)
    CHECK(counts[k] == doctest::Approx(10000).epsilon(0.05));
  CHECK_THROWS_AS((void)rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("matmul oracles") {
  Grid a = Grid::matrix({{1, 2, 3}, {4, 5, 6}});
  Grid b = Grid::matrix({{7, 8}, {9, 10}, {11, 12}});
  Grid c = matmul(a, b);
  CHECK(c.at(0, 0) == 58);
  CHECK(c.at(0, 1) == 64);
  CHECK(c.at(1, 0) == 139);
  CHECK(c.at(1, 1) == 154);

  // Transposed variants against transpose + plain matmul.
  CHECK(max_abs_diff(matmul_tn(a, c), matmul(transpose(a), c)) == 0.0);
  CHECK(max_abs_diff(matmul_nt(a, transpose(b)), c) == 0.0);

  CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);
}

TEST_CASE("pooled mean and std") {
  Grid x = Grid::matrix({{1, 2, 3, 4}, {5, 5, 5, 5}});
  Grid p = pooled_mean_std(x);
  REQUIRE(p.cols() == 4);
  CHECK(p.at(0, 0) == 2.5);
  CHECK(p.at(0, 1) == 5.0);
  CHECK(p.at(0, 2) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));
  CHECK(p.at(0, 3) == 0.0);  // constant channel: exactly zero
}

TEST_CASE("gelu matches the exact normal CDF") {
  Tape tape;
  Var x = tape.leaf(Grid::row({0.0, 1.0, -1.0, 3.0}));
  const Grid& y = tape.value(tape.gelu(x));
  CHECK(y.at(0, 0) == 0.0);
  CHECK(y.at(0, 1) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
  CHECK(y.at(0, 2) == doctest::Approx(-0.15865525393145707).epsilon(1e-15));
  CHECK(y.at(0, 3) == doctest::Approx(3.0 * 0.9986501019683699).epsilon(1e-15));
}

TEST_CASE("layer norm oracle") {
  Tape tape;
  Var x = tape.leaf(Grid::row({1.0, 2.0, 3.0, 4.0}));
  Var g = tape.leaf(Grid::row({2.0, 2.0, 2.0, 2.0}));
  Var s = tape.leaf(Grid::row({0.5, 0.5, 0.5, 0.5}));
  const Grid& y = tape.value(tape.layer_norm(x, g, s));
  double inv = 1.0 / std::sqrt(1.25 + 1e-5);  // population variance
  for (int j = 0; j < 4; ++j) {
    double want = 2.0 * ((1.0 + j) - 2.5) * inv + 0.5;
    CHECK(y.at(0, j) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("single-head attention oracle") {
  // One head, T=2, C=1: recompute softmax(q k^T / sqrt(1)) v by hand.
  Tape tape;
  Grid qg = Grid::matrix({{1.0}, {2.0}});
  Grid kg = Grid::matrix({{0.5}, {-0.5}});
  Grid vg = Grid::matrix({{3.0}, {7.0}});
  Var out = tape.mhsa(tape.leaf(qg), tape.leaf(kg), tape.leaf(vg), 1);
  const Grid& y = tape.value(out);
  for (int i = 0; i < 2; ++i) {
    double s0 = qg.at(i, 0) * 0.5, s1 = qg.at(i, 0) * -0.5;
    double m = std::max(s0, s1);
    double e0 = std::exp(s0 - m), e1 = std::exp(s1 - m);
    double want = (e0 * 3.0 + e1 * 7.0) / (e0 + e1);
    CHECK(y.at(i, 0) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("attention rows sum to one") {
  Rng rng(3);
  Tape tape;
  Var q = tape.leaf(Grid::randn({6, 8}, rng));
  Var k = tape.leaf(Grid::randn({6, 8}, rng));
  Var v = tape.leaf(Grid::randn({6, 8}, rng));
  std::vector<Grid> attn;
  (void)tape.mhsa(q, k, v, 2, &attn);
  REQUIRE(attn.size() == 2);
  for (const Grid& a : attn)
    for (int64_t i = 0; i < a.rows(); ++i) {
      double row = 0;
      for (int64_t j = 0; j < a.cols(); ++j) {
        CHECK(a.at(i, j) >= 0.0);
        row += a.at(i, j);
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frozen leaves get no gradient") {
  Tape tape;
  Var x = tape.leaf(Grid::row({1.0, 2.0}), true);
  Var w = tape.leaf(Grid::row({3.0, 4.0}), false);
  Var loss = tape.sum(tape.mul(x, w));
  tape.backward(loss);
  Grid gx = tape.grad(x);
  CHECK(gx.at(0, 0) == 3.0);
  CHECK(gx.at(0, 1) == 4.0);
  Grid gw = tape.grad(w);  // reported as zeros, never accumulated
  CHECK(gw.at(0, 0) == 0.0);
  CHECK(gw.at(0, 1) == 0.0);
}

TEST_CASE("backward requires a scalar loss") {
  Tape tape;
  Var x = tape.leaf(Grid::row({1.0, 2.0}), true);
  CHECK_THROWS_AS(tape.backward(x), std::invalid_argument);
}

TEST_CASE("finite differences agree on an analytic gradient") {
  ParamSet ps;
  Rng rng(9);
  ps.add("x", Grid::randn({3, 3}, rng));
  LossFn fn = [](const ParamSet& p) {
    double s = 0;
    for (double v : p.get("x").value.flat()) s += v * v * v;
    return s;
  };
  std::vector<Grid> num = finite_diff_grad(fn, ps);
  const Grid& x = ps.get("x").value;
  for (int64_t i = 0; i < x.numel(); ++i) {
    double want = 3.0 * x.flat()[i] * x.flat()[i];
    CHECK(grad_rel_err(num[0].flat()[i], want) < 1e-7);
  }
}

TEST_CASE("adam first steps match the closed form") {
  ParamSet ps;
  ps.add("w", Grid::row({1.0, -2.0}));
  ps.add("frozen", Grid::row({5.0}), false);
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  AdamOptimizer opt(ps, lr, b1, b2, eps);

  Grid g = Grid::row({0.5, -0.25});
  opt.step({g, Grid()});

  for (int j = 0; j < 2; ++j) {
    double m_hat = g.at(0, j);             // m / (1 - b1)
    double v_hat = g.at(0, j) * g.at(0, j);  // v / (1 - b2)
    double want = (j == 0 ? 1.0 : -2.0) - lr * m_hat / (std::sqrt(v_hat) + eps);
    CHECK(ps.get("w").value.at(0, j) == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(ps.get("frozen").value.at(0, 0) == 5.0);
  CHECK(opt.steps_taken() == 1);

  // Second step with a different gradient, against the recurrence.
  Grid w1 = ps.get("w").value;
  Grid g2 = Grid::row({-0.125, 0.75});
  opt.step({g2, Grid()});
  for (int j = 0; j < 2; ++j) {
    double m = (1 - b1) * g.at(0, j);
    double v = (1 - b2) * g.at(0, j) * g.at(0, j);
    m = b1 * m + (1 - b1) * g2.at(0, j);
    v = b2 * v + (1 - b2) * g2.at(0, j) * g2.at(0, j);
    double m_hat = m / (1 - b1 * b1), v_hat = v / (1 - b2 * b2);
    double want = w1.at(0, j) - lr * m_hat / (std::sqrt(v_hat) + eps);
    CHECK(ps.get("w").value.at(0, j) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("adam minimizes a quadratic through the tape") {
  ParamSet ps;
  ps.add("x", Grid::row({4.0, -3.0}));
  AdamOptimizer opt(ps, 0.05);
  for (int i = 0; i < 400; ++i) {
    Tape tape;
    Binding bind(tape, ps);
    Var d = tape.sub(bind["x"], tape.leaf(Grid::row({1.0, 2.0})));
    std::vector<Grid> grads = backward(tape, tape.sum(tape.mul(d, d)), bind);
    opt.step(grads);
  }
  CHECK(ps.get("x").value.at(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ps.get("x").value.at(0, 1) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("paramset rejects duplicates and unknown names") {
  ParamSet ps;
  ps.add("a", Grid::row({1.0}));
  CHECK_THROWS_AS(ps.add("a", Grid::row({2.0})), std::invalid_argument);
  CHECK_THROWS_AS(ps.get("missing"), std::invalid_argument);
}

TEST_CASE("crc32 check value") {
  // The canonical IEEE CRC-32 check string.
  CHECK(crc32(std::string("123456789")) == 0xCBF43926u);
  // Incremental computation equals one-shot.
  std::string s = "hello world";
  uint32_t whole = crc32(s);
  uint32_t part = crc32(s.substr(6), crc32(s.substr(0, 6)));
  CHECK(whole == part);
}

TEST_CASE("byte reader round trip and truncation") {
  std::string buf;
  put_u8(buf, 0xAB);
  put_u16(buf, 0x1234);
  put_u32(buf, 0xDEADBEEF);
  put_u64(buf, 0x0123456789ABCDEFULL);
  put_f32(buf, 1.5f);
  put_f64(buf, -2.25);

  ByteReader r(buf, "test");
  CHECK(r.get_u8() == 0xAB);
  CHECK(r.get_u16() == 0x1234);
  CHECK(r.get_u32() == 0xDEADBEEFu);
  CHECK(r.get_u64() == 0x0123456789ABCDEFULL);
  CHECK(r.get_f32() == 1.5f);
  CHECK(r.get_f64() == -2.25);
  CHECK(r.at_end());
  CHECK_THROWS_AS((void)r.get_u8(), CorruptionError);
}

TEST_CASE("gradient audit suite passes") {
  std::ostringstream log;
  bool ok = run_grad_check_suite(log);
  INFO(log.str());
  CHECK(ok);
}
