// dubkit/gradcheck.h

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

#ifndef DUBKIT_GRADCHECK_H_
#define DUBKIT_GRADCHECK_H_

#include <functional>
#include <iosfwd>
#include <string>

#include "dubkit/paramset.h"

namespace dubkit {

// Scalar loss as a pure function of the parameter values.
using LossFn = std::function<double(const ParamSet&)>;

// Central finite differences over every trainable element; frozen parameters
// get zero grids. The ParamSet is perturbed in place and restored.
std::vector<Grid> finite_diff_grad(const LossFn& fn, ParamSet& params,
                                   double step = 1e-4);

// Symmetric relative error with an absolute floor of 1.
double grad_rel_err(double a, double b);

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  int64_t worst_index = -1;
};

// Elementwise comparison of two gradient lists over trainable parameters.
GradCheckResult compare_gradients(const std::vector<Grid>& analytic,
                                  const std::vector<Grid>& numeric,
                                  const ParamSet& params);

// End-to-end differentiation audit: every tape op against finite differences,
// then a composed small model. Prints one line per check to `log`; returns
// true when every check is below the 1e-4 relative-error gate.
bool run_grad_check_suite(std::ostream& log);

}  // namespace dubkit

#endif  // DUBKIT_GRADCHECK_H_
