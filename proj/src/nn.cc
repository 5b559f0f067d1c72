// src/nn.cc

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

#include "dubkit/nn.h"

#include <cmath>

namespace dubkit {

void LinearSpec::init(ParamSet& ps, const std::string& prefix, int64_t in_dim,
                      int64_t out_dim, Rng& rng, double weight_scale) {
  in = in_dim;
  out = out_dim;
  w = prefix + ".w";
  b = prefix + ".b";
  double s = weight_scale < 0.0 ? 1.0 / std::sqrt(static_cast<double>(in_dim))
                                : weight_scale;
  Grid wg({in_dim, out_dim});
  if (s != 0.0)
    for (double& v : wg.flat()) v = s * rng.normal();
  ps.add(w, std::move(wg));
  ps.add(b, Grid({1, out_dim}));
}

Var LinearSpec::apply(Tape& tape, Binding& bind, Var x) const {
  return tape.linear(x, bind[w], bind[b]);
}

void LayerNormSpec::init(ParamSet& ps, const std::string& prefix, int64_t width) {
  gain = prefix + ".gain";
  shift = prefix + ".shift";
  ps.add(gain, Grid::full({1, width}, 1.0));
  ps.add(shift, Grid({1, width}));
}

Var LayerNormSpec::apply(Tape& tape, Binding& bind, Var x) const {
  return tape.layer_norm(x, bind[gain], bind[shift]);
}

void AttentionBlockSpec::init(ParamSet& ps, const std::string& prefix,
                              int64_t width, int n_heads, int ff_mult,
                              Rng& rng) {
  heads = n_heads;
  ln1.init(ps, prefix + ".ln1", width);
  q.init(ps, prefix + ".q", width, width, rng);
  k.init(ps, prefix + ".k", width, width, rng);
  v.init(ps, prefix + ".v", width, width, rng);
  o.init(ps, prefix + ".o", width, width, rng);
  ln2.init(ps, prefix + ".ln2", width);
  ff1.init(ps, prefix + ".ff1", width, width * ff_mult, rng);
  ff2.init(ps, prefix + ".ff2", width * ff_mult, width, rng);
}

Var AttentionBlockSpec::apply(Tape& tape, Binding& bind, Var x) const {
  Var a = ln1.apply(tape, bind, x);
  Var attn = tape.mhsa(q.apply(tape, bind, a), k.apply(tape, bind, a),
                       v.apply(tape, bind, a), heads);
  Var h = tape.add(x, o.apply(tape, bind, attn));
  Var f = ln2.apply(tape, bind, h);
  Var y = ff2.apply(tape, bind, tape.gelu(ff1.apply(tape, bind, f)));
  return tape.add(h, y);
}

Grid sinusoidal_position_encoding(int64_t t, int64_t c) {
  Grid pe({t, c});
  for (int64_t pos = 0; pos < t; ++pos) {
    for (int64_t i = 0; i < c; i += 2) {
      double freq = std::pow(10000.0, -static_cast<double>(i) /
                                          static_cast<double>(c));
      double a = static_cast<double>(pos) * freq;
      pe.at(pos, i) = std::sin(a);
      if (i + 1 < c) pe.at(pos, i + 1) = std::cos(a);
    }
  }
  return pe;
}

Grid timestep_features(double value, int64_t c) {
  Grid f({1, c});
  for (int64_t i = 0; i < c; i += 2) {
    double freq =
        std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(c));
    double a = value * 1000.0 * freq;
    f.at(0, i) = std::sin(a);
    if (i + 1 < c) f.at(0, i + 1) = std::cos(a);
  }
  return f;
}

}  // namespace dubkit
