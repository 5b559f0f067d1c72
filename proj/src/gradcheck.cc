// src/gradcheck.cc

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

#include "dubkit/gradcheck.h"

#include <cmath>
#include <stdexcept>

namespace dubkit {

std::vector<Grid> finite_diff_grad(const LossFn& fn, ParamSet& params,
                                   double step) {
  if (step <= 0.0)
    throw std::invalid_argument("finite_diff_grad: step must be positive");
  std::vector<Grid> grads;
  grads.reserve(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    Param& p = params.at(i);
    Grid g(p.value.shape());
    if (p.trainable) {
      for (int64_t j = 0; j < p.value.numel(); ++j) {
        double saved = p.value.flat()[j];
        p.value.flat()[j] = saved + step;
        double up = fn(params);
        p.value.flat()[j] = saved - step;
        double down = fn(params);
        p.value.flat()[j] = saved;
        g.flat()[j] = (up - down) / (2.0 * step);
      }
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

double grad_rel_err(double a, double b) {
  double denom = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) / denom;
}

GradCheckResult compare_gradients(const std::vector<Grid>& analytic,
                                  const std::vector<Grid>& numeric,
                                  const ParamSet& params) {
  if (analytic.size() != params.size() || numeric.size() != params.size())
    throw std::invalid_argument("compare_gradients: list length mismatch");
  GradCheckResult result;
  for (size_t i = 0; i < params.size(); ++i) {
    const Param& p = params.at(i);
    if (!p.trainable) continue;
    if (!analytic[i].same_shape(numeric[i]))
      throw_shape_error("compare_gradients '" + p.name + "'", analytic[i],
                        numeric[i]);
    for (int64_t j = 0; j < analytic[i].numel(); ++j) {
      double e = grad_rel_err(analytic[i].flat()[j], numeric[i].flat()[j]);
      if (e > result.max_rel_err) {
        result.max_rel_err = e;
        result.worst_param = p.name;
        result.worst_index = j;
      }
    }
  }
  return result;
}

}  // namespace dubkit
