// dubkit/tape.h

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

#ifndef DUBKIT_TAPE_H_
#define DUBKIT_TAPE_H_

#include <functional>
#include <vector>

#include "dubkit/grid.h"

namespace dubkit {

using Var = int32_t;

// Define-by-run reverse-mode differentiation tape. Each op records its
// forward value and a closure that routes the output adjoint to its inputs.
// Nodes whose inputs all have needs_grad == false record no closure, so
// frozen or constant branches cost nothing on the backward pass.
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  bool grad_enabled() const { return grad_enabled_; }
  int64_t size() const { return static_cast<int64_t>(nodes_.size()); }

  Var leaf(Grid value, bool needs_grad = false);

  const Grid& value(Var v) const { return nodes_[v].value; }
  bool needs_grad(Var v) const { return nodes_[v].needs_grad; }
  // Adjoint of a node; zero grid if backward never reached it.
  Grid grad(Var v) const;

  // y = x * w + b with x [R x In], w [In x Out], b [1 x Out].
  Var linear(Var x, Var w, Var b);
  // Exact-CDF GELU, applied elementwise.
  Var gelu(Var x);
  // Row-wise layer norm over the last dimension; gain/shift [1 x C].
  Var layer_norm(Var x, Var gain, Var shift, double eps = 1e-5);
  // 1-D convolution: x [Cin x T], kernels [Cout x Cin x K], K odd,
  // zero-padded so the output is [Cout x T]. No bias.
  Var conv1d(Var x, Var kernels);
  // Multi-head self-attention: q, k, v [T x C], C divisible by heads.
  // If attn_out is non-null the per-head row-softmax matrices are copied there.
  Var mhsa(Var q, Var k, Var v, int heads, std::vector<Grid>* attn_out = nullptr);
  // x [C x T] -> [1 x 2C]: per-channel mean then population std.
  Var mean_std_pool(Var x);
  // L2 normalization of a [1 x C] row vector.
  Var l2_normalize(Var x);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var x, double s);
  // Sum of all elements -> [1 x 1].
  Var sum(Var x);
  // x [T x C] + v [1 x C] broadcast over rows.
  Var add_rowvec(Var x, Var v);
  // x [C x T] + b [1 x C] broadcast over columns (per-channel bias).
  Var add_channel_bias(Var x, Var b);
  // Horizontal concatenation of rank-2 grids with equal row counts.
  Var concat_cols(const std::vector<Var>& xs);
  // out[i] = x[idx[i]]; backward scatter-adds, so repeated indices sum.
  Var gather_rows(Var x, std::vector<int64_t> idx);
  // v [1 x C] -> [T x C].
  Var repeat_row(Var v, int64_t t);
  Var transpose(Var x);

  // Seeds the scalar loss with adjoint 1 and sweeps the tape in reverse.
  void backward(Var loss);

 private:
  struct Node {
    Grid value;
    Grid grad;  // empty until first accumulation
    std::function<void(Tape&)> backprop;
    bool needs_grad = false;
  };

  Var push(Grid value, bool needs_grad);
  void set_backprop(Var v, std::function<void(Tape&)> fn);
  bool want_grad(std::initializer_list<Var> inputs) const;
  Grid& grad_ref(Var v);
  bool has_grad(Var v) const { return !nodes_[v].grad.empty(); }
  void accum(Var v, const Grid& g);
  void accum_scaled(Var v, const Grid& g, double s);

  std::vector<Node> nodes_;
  bool grad_enabled_;
};

}  // namespace dubkit

#endif  // DUBKIT_TAPE_H_
