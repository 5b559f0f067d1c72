// src/optim.cc

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

#include "dubkit/optim.h"

#include <cmath>
#include <stdexcept>

namespace dubkit {

AdamOptimizer::AdamOptimizer(ParamSet& params, double lr, double beta1,
                             double beta2, double eps)
    : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    const Param& p = params.at(i);
    if (p.trainable) {
      m_.push_back(Grid(p.value.shape()));
      v_.push_back(Grid(p.value.shape()));
    } else {
      m_.push_back(Grid());
      v_.push_back(Grid());
    }
  }
}

void AdamOptimizer::step(const std::vector<Grid>& grads) {
  if (grads.size() != params_.size())
    throw std::invalid_argument("AdamOptimizer::step: gradient count mismatch");
  ++t_;
  double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param& p = params_.at(i);
    if (!p.trainable) continue;
    const Grid& g = grads[i];
    if (!p.value.same_shape(g))
      throw std::invalid_argument("AdamOptimizer::step: shape mismatch for '" +
                                  p.name + "'");
    Grid& m = m_[i];
    Grid& v = v_[i];
    for (int64_t j = 0; j < p.value.numel(); ++j) {
      double gj = g.flat()[j];
      m.flat()[j] = beta1_ * m.flat()[j] + (1.0 - beta1_) * gj;
      v.flat()[j] = beta2_ * v.flat()[j] + (1.0 - beta2_) * gj * gj;
      double mhat = m.flat()[j] / bc1;
      double vhat = v.flat()[j] / bc2;
      p.value.flat()[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace dubkit
