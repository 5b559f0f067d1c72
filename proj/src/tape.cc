// src/tape.cc

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

#include "dubkit/tape.h"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace dubkit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double gelu_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
double gelu_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Row-wise softmax with max subtraction.
Grid softmax_rows(const Grid& s) {
  Grid a = s;
  int64_t r = s.rows(), c = s.cols();
  for (int64_t i = 0; i < r; ++i) {
    double m = a.at(i, 0);
    for (int64_t j = 1; j < c; ++j) m = std::max(m, a.at(i, j));
    double z = 0.0;
    for (int64_t j = 0; j < c; ++j) {
      double e = std::exp(a.at(i, j) - m);
      a.at(i, j) = e;
      z += e;
    }
    for (int64_t j = 0; j < c; ++j) a.at(i, j) /= z;
  }
  return a;
}

Grid slice_cols(const Grid& x, int64_t lo, int64_t n) {
  Grid out({x.rows(), n});
  for (int64_t i = 0; i < x.rows(); ++i)
    for (int64_t j = 0; j < n; ++j) out.at(i, j) = x.at(i, lo + j);
  return out;
}

}  // namespace

Var Tape::push(Grid value, bool needs_grad) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  nodes_.push_back(std::move(node));
  return static_cast<Var>(nodes_.size() - 1);
}

void Tape::set_backprop(Var v, std::function<void(Tape&)> fn) {
  nodes_[v].backprop = std::move(fn);
}

bool Tape::want_grad(std::initializer_list<Var> inputs) const {
  if (!grad_enabled_) return false;
  for (Var v : inputs)
    if (nodes_[v].needs_grad) return true;
  return false;
}

Grid& Tape::grad_ref(Var v) {
  Node& n = nodes_[v];
  if (n.grad.empty()) n.grad = Grid(n.value.shape());
  return n.grad;
}

Grid Tape::grad(Var v) const {
  const Node& n = nodes_[v];
  if (n.grad.empty()) return Grid(n.value.shape());
  return n.grad;
}

void Tape::accum(Var v, const Grid& g) {
  if (!nodes_[v].needs_grad) return;
  grad_ref(v).add(g);
}

void Tape::accum_scaled(Var v, const Grid& g, double s) {
  if (!nodes_[v].needs_grad) return;
  grad_ref(v).add_scaled(g, s);
}

Var Tape::leaf(Grid value, bool needs_grad) {
  return push(std::move(value), grad_enabled_ && needs_grad);
}

void Tape::backward(Var loss) {
  if (loss < 0 || loss >= size())
    throw std::invalid_argument("Tape::backward: unknown variable");
  if (value(loss).numel() != 1)
    throw std::invalid_argument("Tape::backward: loss must be a scalar, got " +
                                shape_str(value(loss)));
  grad_ref(loss).flat()[0] += 1.0;
  for (Var v = loss; v >= 0; --v) {
    Node& n = nodes_[v];
    if (n.backprop && !n.grad.empty()) n.backprop(*this);
  }
}

Var Tape::linear(Var x, Var w, Var b) {
  const Grid& xv = value(x);
  const Grid& wv = value(w);
  const Grid& bv = value(b);
  if (xv.rank() != 2 || wv.rank() != 2 || xv.cols() != wv.rows())
    throw_shape_error("linear", xv, wv);
  if (bv.rank() != 2 || bv.rows() != 1 || bv.cols() != wv.cols())
    throw_shape_error("linear bias", bv, wv);
  Grid y = matmul(xv, wv);
  for (int64_t i = 0; i < y.rows(); ++i)
    for (int64_t j = 0; j < y.cols(); ++j) y.at(i, j) += bv.at(0, j);
  Var out = push(std::move(y), want_grad({x, w, b}));
  if (needs_grad(out)) {
    set_backprop(out, [x, w, b, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      if (t.needs_grad(x)) t.accum(x, matmul_nt(gy, t.value(w)));
      if (t.needs_grad(w)) t.accum(w, matmul_tn(t.value(x), gy));
      if (t.needs_grad(b)) t.accum(b, colsum(gy));
    });
  }
  return out;
}

Var Tape::gelu(Var x) {
  const Grid& xv = value(x);
  Grid y = xv;
  for (double& v : y.flat()) v = v * gelu_cdf(v);
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& xv = t.value(x);
      Grid gx = xv;
      for (int64_t i = 0; i < gx.numel(); ++i) {
        double v = xv.flat()[i];
        gx.flat()[i] = gy.flat()[i] * (gelu_cdf(v) + v * gelu_pdf(v));
      }
      t.accum(x, gx);
    });
  }
  return out;
}

Var Tape::layer_norm(Var x, Var gain, Var shift, double eps) {
  const Grid& xv = value(x);
  const Grid& gv = value(gain);
  const Grid& bv = value(shift);
  if (xv.rank() != 2) throw_shape_error("layer_norm", xv);
  int64_t rows = xv.rows(), c = xv.cols();
  if (gv.rank() != 2 || gv.rows() != 1 || gv.cols() != c)
    throw_shape_error("layer_norm gain", gv, xv);
  if (bv.rank() != 2 || bv.rows() != 1 || bv.cols() != c)
    throw_shape_error("layer_norm shift", bv, xv);
  Grid y({rows, c});
  for (int64_t i = 0; i < rows; ++i) {
    double mean = 0.0;
    for (int64_t j = 0; j < c; ++j) mean += xv.at(i, j);
    mean /= static_cast<double>(c);
    double var = 0.0;
    for (int64_t j = 0; j < c; ++j) {
      double d = xv.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(c);
    double inv = 1.0 / std::sqrt(var + eps);
    for (int64_t j = 0; j < c; ++j)
      y.at(i, j) = (xv.at(i, j) - mean) * inv * gv.at(0, j) + bv.at(0, j);
  }
  Var out = push(std::move(y), want_grad({x, gain, shift}));
  if (needs_grad(out)) {
    set_backprop(out, [x, gain, shift, eps, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& xv = t.value(x);
      const Grid& gv = t.value(gain);
      int64_t rows = xv.rows(), c = xv.cols();
      Grid gx({rows, c});
      Grid gg({1, c});
      Grid gb({1, c});
      for (int64_t i = 0; i < rows; ++i) {
        double mean = 0.0;
        for (int64_t j = 0; j < c; ++j) mean += xv.at(i, j);
        mean /= static_cast<double>(c);
        double var = 0.0;
        for (int64_t j = 0; j < c; ++j) {
          double d = xv.at(i, j) - mean;
          var += d * d;
        }
        var /= static_cast<double>(c);
        double inv = 1.0 / std::sqrt(var + eps);
        double sum_dxh = 0.0, sum_dxh_xh = 0.0;
        for (int64_t j = 0; j < c; ++j) {
          double xh = (xv.at(i, j) - mean) * inv;
          double dxh = gy.at(i, j) * gv.at(0, j);
          sum_dxh += dxh;
          sum_dxh_xh += dxh * xh;
          gg.at(0, j) += gy.at(i, j) * xh;
          gb.at(0, j) += gy.at(i, j);
        }
        double nc = static_cast<double>(c);
        for (int64_t j = 0; j < c; ++j) {
          double xh = (xv.at(i, j) - mean) * inv;
          double dxh = gy.at(i, j) * gv.at(0, j);
          gx.at(i, j) = inv * (dxh - sum_dxh / nc - xh * sum_dxh_xh / nc);
        }
      }
      t.accum(x, gx);
      t.accum(gain, gg);
      t.accum(shift, gb);
    });
  }
  return out;
}

Var Tape::conv1d(Var x, Var kernels) {
  const Grid& xv = value(x);
  const Grid& kv = value(kernels);
  if (xv.rank() != 2) throw_shape_error("conv1d input", xv);
  if (kv.rank() != 3) throw_shape_error("conv1d kernels", kv);
  int64_t cin = xv.rows(), tlen = xv.cols();
  int64_t cout = kv.shape()[0], kcin = kv.shape()[1], kw = kv.shape()[2];
  if (kcin != cin) throw_shape_error("conv1d", xv, kv);
  if (kw % 2 == 0)
    throw std::invalid_argument("conv1d: kernel width must be odd, got " +
                                std::to_string(kw));
  int64_t pad = (kw - 1) / 2;
  Grid y({cout, tlen});
  for (int64_t o = 0; o < cout; ++o) {
    for (int64_t t = 0; t < tlen; ++t) {
      double s = 0.0;
      for (int64_t c = 0; c < cin; ++c) {
        for (int64_t dk = 0; dk < kw; ++dk) {
          int64_t src = t + dk - pad;
          if (src < 0 || src >= tlen) continue;
          s += xv.at(c, src) * kv.at(o, c, dk);
        }
      }
      y.at(o, t) = s;
    }
  }
  Var out = push(std::move(y), want_grad({x, kernels}));
  if (needs_grad(out)) {
    set_backprop(out, [x, kernels, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& xv = t.value(x);
      const Grid& kv = t.value(kernels);
      int64_t cin = xv.rows(), tlen = xv.cols();
      int64_t cout = kv.shape()[0], kw = kv.shape()[2];
      int64_t pad = (kw - 1) / 2;
      if (t.needs_grad(x)) {
        Grid gx({cin, tlen});
        for (int64_t o = 0; o < cout; ++o)
          for (int64_t tt = 0; tt < tlen; ++tt) {
            double g = gy.at(o, tt);
            if (g == 0.0) continue;
            for (int64_t c = 0; c < cin; ++c)
              for (int64_t dk = 0; dk < kw; ++dk) {
                int64_t src = tt + dk - pad;
                if (src < 0 || src >= tlen) continue;
                gx.at(c, src) += g * kv.at(o, c, dk);
              }
          }
        t.accum(x, gx);
      }
      if (t.needs_grad(kernels)) {
        Grid gk(kv.shape());
        for (int64_t o = 0; o < cout; ++o)
          for (int64_t tt = 0; tt < tlen; ++tt) {
            double g = gy.at(o, tt);
            if (g == 0.0) continue;
            for (int64_t c = 0; c < cin; ++c)
              for (int64_t dk = 0; dk < kw; ++dk) {
                int64_t src = tt + dk - pad;
                if (src < 0 || src >= tlen) continue;
                gk.at(o, c, dk) += g * xv.at(c, src);
              }
          }
        t.accum(kernels, gk);
      }
    });
  }
  return out;
}

Var Tape::mhsa(Var q, Var k, Var v, int heads, std::vector<Grid>* attn_out) {
  const Grid& qv = value(q);
  const Grid& kv = value(k);
  const Grid& vv = value(v);
  if (qv.rank() != 2 || !qv.same_shape(kv) || !qv.same_shape(vv))
    throw_shape_error("mhsa", qv, kv);
  int64_t tlen = qv.rows(), c = qv.cols();
  if (heads <= 0 || c % heads != 0)
    throw std::invalid_argument("mhsa: width " + std::to_string(c) +
                                " not divisible by head count " +
                                std::to_string(heads));
  int64_t d = c / heads;
  double att_scale = 1.0 / std::sqrt(static_cast<double>(d));
  auto attn = std::make_shared<std::vector<Grid>>();
  attn->reserve(heads);
  Grid y({tlen, c});
  for (int h = 0; h < heads; ++h) {
    Grid qh = slice_cols(qv, h * d, d);
    Grid kh = slice_cols(kv, h * d, d);
    Grid vh = slice_cols(vv, h * d, d);
    Grid s = matmul_nt(qh, kh);
    s.scale_inplace(att_scale);
    Grid a = softmax_rows(s);
    Grid oh = matmul(a, vh);
    for (int64_t i = 0; i < tlen; ++i)
      for (int64_t j = 0; j < d; ++j) y.at(i, h * d + j) = oh.at(i, j);
    attn->push_back(std::move(a));
  }
  if (attn_out) *attn_out = *attn;
  Var out = push(std::move(y), want_grad({q, k, v}));
  if (needs_grad(out)) {
    set_backprop(out, [q, k, v, heads, d, att_scale, attn, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& qv = t.value(q);
      const Grid& kv = t.value(k);
      const Grid& vv = t.value(v);
      int64_t tlen = qv.rows(), c = qv.cols();
      Grid gq({tlen, c}), gk({tlen, c}), gv({tlen, c});
      for (int h = 0; h < heads; ++h) {
        Grid qh = slice_cols(qv, h * d, d);
        Grid kh = slice_cols(kv, h * d, d);
        Grid vh = slice_cols(vv, h * d, d);
        Grid go = slice_cols(gy, h * d, d);
        const Grid& a = (*attn)[h];
        Grid da = matmul_nt(go, vh);
        Grid dvh = matmul_tn(a, go);
        // dS = A o (dA - rowsum(A o dA))
        Grid ds({tlen, tlen});
        for (int64_t i = 0; i < tlen; ++i) {
          double dot = 0.0;
          for (int64_t j = 0; j < tlen; ++j) dot += a.at(i, j) * da.at(i, j);
          for (int64_t j = 0; j < tlen; ++j)
            ds.at(i, j) = a.at(i, j) * (da.at(i, j) - dot);
        }
        Grid dqh = matmul(ds, kh);
        dqh.scale_inplace(att_scale);
        Grid dkh = matmul_tn(ds, qh);
        dkh.scale_inplace(att_scale);
        for (int64_t i = 0; i < tlen; ++i)
          for (int64_t j = 0; j < d; ++j) {
            gq.at(i, h * d + j) += dqh.at(i, j);
            gk.at(i, h * d + j) += dkh.at(i, j);
            gv.at(i, h * d + j) += dvh.at(i, j);
          }
      }
      t.accum(q, gq);
      t.accum(k, gk);
      t.accum(v, gv);
    });
  }
  return out;
}

Var Tape::mean_std_pool(Var x) {
  const Grid& xv = value(x);
  if (xv.rank() != 2) throw_shape_error("mean_std_pool", xv);
  Grid y = pooled_mean_std(xv);
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& yv = t.value(out);
      const Grid& xv = t.value(x);
      int64_t c = xv.rows(), tlen = xv.cols();
      double nt = static_cast<double>(tlen);
      Grid gx({c, tlen});
      for (int64_t i = 0; i < c; ++i) {
        double mean = yv.at(0, i);
        double sd = std::max(yv.at(0, c + i), 1e-8);
        double dm = gy.at(0, i);
        double dsd = gy.at(0, c + i);
        for (int64_t tt = 0; tt < tlen; ++tt)
          gx.at(i, tt) = dm / nt + dsd * (xv.at(i, tt) - mean) / (nt * sd);
      }
      t.accum(x, gx);
    });
  }
  return out;
}

Var Tape::l2_normalize(Var x) {
  const Grid& xv = value(x);
  if (xv.rank() != 2 || xv.rows() != 1) throw_shape_error("l2_normalize", xv);
  double n2 = 0.0;
  for (double v : xv.flat()) n2 += v * v;
  double n = std::max(std::sqrt(n2), 1e-12);
  Grid y = xv;
  y.scale_inplace(1.0 / n);
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, n, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& yv = t.value(out);
      double dot = 0.0;
      for (int64_t i = 0; i < yv.numel(); ++i)
        dot += gy.flat()[i] * yv.flat()[i];
      Grid gx = gy;
      gx.add_scaled(yv, -dot);
      gx.scale_inplace(1.0 / n);
      t.accum(x, gx);
    });
  }
  return out;
}

Var Tape::add(Var a, Var b) {
  const Grid& av = value(a);
  const Grid& bv = value(b);
  if (!av.same_shape(bv)) throw_shape_error("tape add", av, bv);
  Grid y = av;
  y.add(bv);
  Var out = push(std::move(y), want_grad({a, b}));
  if (needs_grad(out)) {
    set_backprop(out, [a, b, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      t.accum(a, gy);
      t.accum(b, gy);
    });
  }
  return out;
}

Var Tape::sub(Var a, Var b) {
  const Grid& av = value(a);
  const Grid& bv = value(b);
  if (!av.same_shape(bv)) throw_shape_error("tape sub", av, bv);
  Grid y = av;
  y.add_scaled(bv, -1.0);
  Var out = push(std::move(y), want_grad({a, b}));
  if (needs_grad(out)) {
    set_backprop(out, [a, b, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      t.accum(a, gy);
      t.accum_scaled(b, gy, -1.0);
    });
  }
  return out;
}

Var Tape::mul(Var a, Var b) {
  const Grid& av = value(a);
  const Grid& bv = value(b);
  if (!av.same_shape(bv)) throw_shape_error("tape mul", av, bv);
  Grid y = av;
  for (int64_t i = 0; i < y.numel(); ++i) y.flat()[i] *= bv.flat()[i];
  Var out = push(std::move(y), want_grad({a, b}));
  if (needs_grad(out)) {
    set_backprop(out, [a, b, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      if (t.needs_grad(a)) t.accum(a, dubkit::mul(gy, t.value(b)));
      if (t.needs_grad(b)) t.accum(b, dubkit::mul(gy, t.value(a)));
    });
  }
  return out;
}

Var Tape::scale(Var x, double s) {
  Grid y = value(x);
  y.scale_inplace(s);
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, s, out](Tape& t) {
      t.accum_scaled(x, t.nodes_[out].grad, s);
    });
  }
  return out;
}

Var Tape::sum(Var x) {
  const Grid& xv = value(x);
  double s = 0.0;
  for (double v : xv.flat()) s += v;
  Grid y({1, 1});
  y.flat()[0] = s;
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, out](Tape& t) {
      double g = t.nodes_[out].grad.flat()[0];
      if (!t.needs_grad(x)) return;
      Grid gx(t.value(x).shape());
      gx.fill(g);
      t.accum(x, gx);
    });
  }
  return out;
}

Var Tape::add_rowvec(Var x, Var v) {
  const Grid& xv = value(x);
  const Grid& vv = value(v);
  if (xv.rank() != 2 || vv.rank() != 2 || vv.rows() != 1 ||
      vv.cols() != xv.cols())
    throw_shape_error("add_rowvec", xv, vv);
  Grid y = xv;
  for (int64_t i = 0; i < y.rows(); ++i)
    for (int64_t j = 0; j < y.cols(); ++j) y.at(i, j) += vv.at(0, j);
  Var out = push(std::move(y), want_grad({x, v}));
  if (needs_grad(out)) {
    set_backprop(out, [x, v, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      t.accum(x, gy);
      if (t.needs_grad(v)) t.accum(v, colsum(gy));
    });
  }
  return out;
}

Var Tape::add_channel_bias(Var x, Var b) {
  const Grid& xv = value(x);
  const Grid& bv = value(b);
  if (xv.rank() != 2 || bv.rank() != 2 || bv.rows() != 1 ||
      bv.cols() != xv.rows())
    throw_shape_error("add_channel_bias", xv, bv);
  Grid y = xv;
  for (int64_t i = 0; i < y.rows(); ++i)
    for (int64_t j = 0; j < y.cols(); ++j) y.at(i, j) += bv.at(0, i);
  Var out = push(std::move(y), want_grad({x, b}));
  if (needs_grad(out)) {
    set_backprop(out, [x, b, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      t.accum(x, gy);
      if (t.needs_grad(b)) {
        Grid gb({1, gy.rows()});
        for (int64_t i = 0; i < gy.rows(); ++i)
          for (int64_t j = 0; j < gy.cols(); ++j) gb.at(0, i) += gy.at(i, j);
        t.accum(b, gb);
      }
    });
  }
  return out;
}

Var Tape::concat_cols(const std::vector<Var>& xs) {
  if (xs.empty())
    throw std::invalid_argument("concat_cols: needs at least one input");
  int64_t rows = value(xs[0]).rows();
  int64_t total = 0;
  for (Var x : xs) {
    const Grid& g = value(x);
    if (g.rank() != 2 || g.rows() != rows)
      throw_shape_error("concat_cols", value(xs[0]), g);
    total += g.cols();
  }
  Grid y({rows, total});
  int64_t off = 0;
  for (Var x : xs) {
    const Grid& g = value(x);
    for (int64_t i = 0; i < rows; ++i)
      for (int64_t j = 0; j < g.cols(); ++j) y.at(i, off + j) = g.at(i, j);
    off += g.cols();
  }
  bool wg = false;
  for (Var x : xs) wg = wg || needs_grad(x);
  Var out = push(std::move(y), grad_enabled_ && wg);
  if (needs_grad(out)) {
    std::vector<Var> inputs = xs;
    set_backprop(out, [inputs, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      int64_t off = 0;
      for (Var x : inputs) {
        const Grid& g = t.value(x);
        if (t.needs_grad(x)) {
          Grid gx({g.rows(), g.cols()});
          for (int64_t i = 0; i < g.rows(); ++i)
            for (int64_t j = 0; j < g.cols(); ++j)
              gx.at(i, j) = gy.at(i, off + j);
          t.accum(x, gx);
        }
        off += g.cols();
      }
    });
  }
  return out;
}

Var Tape::gather_rows(Var x, std::vector<int64_t> idx) {
  const Grid& xv = value(x);
  if (xv.rank() != 2) throw_shape_error("gather_rows", xv);
  if (idx.empty()) throw std::invalid_argument("gather_rows: empty index list");
  for (int64_t i : idx)
    if (i < 0 || i >= xv.rows())
      throw std::invalid_argument("gather_rows: index " + std::to_string(i) +
                                  " out of range for " + shape_str(xv));
  Grid y({static_cast<int64_t>(idx.size()), xv.cols()});
  for (size_t r = 0; r < idx.size(); ++r)
    for (int64_t j = 0; j < xv.cols(); ++j)
      y.at(static_cast<int64_t>(r), j) = xv.at(idx[r], j);
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    auto shared = std::make_shared<std::vector<int64_t>>(std::move(idx));
    set_backprop(out, [x, shared, out](Tape& t) {
      const Grid& gy = t.nodes_[out].grad;
      const Grid& xv = t.value(x);
      Grid gx({xv.rows(), xv.cols()});
      for (size_t r = 0; r < shared->size(); ++r)
        for (int64_t j = 0; j < xv.cols(); ++j)
          gx.at((*shared)[r], j) += gy.at(static_cast<int64_t>(r), j);
      t.accum(x, gx);
    });
  }
  return out;
}

Var Tape::repeat_row(Var v, int64_t t) {
  const Grid& vv = value(v);
  if (vv.rank() != 2 || vv.rows() != 1) throw_shape_error("repeat_row", vv);
  if (t <= 0) throw std::invalid_argument("repeat_row: row count must be positive");
  Grid y({t, vv.cols()});
  for (int64_t i = 0; i < t; ++i)
    for (int64_t j = 0; j < vv.cols(); ++j) y.at(i, j) = vv.at(0, j);
  Var out = push(std::move(y), want_grad({v}));
  if (needs_grad(out)) {
    set_backprop(out, [v, out](Tape& tp) {
      tp.accum(v, colsum(tp.nodes_[out].grad));
    });
  }
  return out;
}

Var Tape::transpose(Var x) {
  Grid y = dubkit::transpose(value(x));
  Var out = push(std::move(y), want_grad({x}));
  if (needs_grad(out)) {
    set_backprop(out, [x, out](Tape& t) {
      t.accum(x, dubkit::transpose(t.nodes_[out].grad));
    });
  }
  return out;
}

}  // namespace dubkit
