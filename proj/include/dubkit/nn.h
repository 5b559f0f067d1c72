// dubkit/nn.h

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

#ifndef DUBKIT_NN_H_
#define DUBKIT_NN_H_

#include <string>
#include <vector>

#include "dubkit/paramset.h"
#include "dubkit/rng.h"

namespace dubkit {

// Named affine layer. init registers "<prefix>.w" [in x out] and
// "<prefix>.b" [1 x out]; weight entries are N(0, scale^2) with
// scale = 1/sqrt(in) unless overridden, bias starts at zero.
struct LinearSpec {
  std::string w, b;
  int64_t in = 0, out = 0;

  void init(ParamSet& ps, const std::string& prefix, int64_t in_dim,
            int64_t out_dim, Rng& rng, double weight_scale = -1.0);
  Var apply(Tape& tape, Binding& bind, Var x) const;
};

struct LayerNormSpec {
  std::string gain, shift;

  void init(ParamSet& ps, const std::string& prefix, int64_t width);
  Var apply(Tape& tape, Binding& bind, Var x) const;
};

// Pre-norm transformer block:
//   h = x + Wo * mhsa(ln1(x))
//   y = h + W2 * gelu(W1 * ln2(h))
// with a feed-forward width of ff_mult * width.
struct AttentionBlockSpec {
  LayerNormSpec ln1, ln2;
  LinearSpec q, k, v, o, ff1, ff2;
  int heads = 0;

  void init(ParamSet& ps, const std::string& prefix, int64_t width, int heads,
            int ff_mult, Rng& rng);
  Var apply(Tape& tape, Binding& bind, Var x) const;
};

// Standard sin/cos position table, [T x C] with interleaved frequency bands.
Grid sinusoidal_position_encoding(int64_t t, int64_t c);
// Sin/cos features of a scalar (used for flow time), [1 x C].
Grid timestep_features(double value, int64_t c);

}  // namespace dubkit

#endif  // DUBKIT_NN_H_
