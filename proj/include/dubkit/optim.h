// dubkit/optim.h

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

#ifndef DUBKIT_OPTIM_H_
#define DUBKIT_OPTIM_H_

#include "dubkit/paramset.h"

namespace dubkit {

// Adam with bias correction. Frozen parameters are skipped entirely: no
// moment state is kept or updated for them, and their values never change.
class AdamOptimizer {
 public:
  AdamOptimizer(ParamSet& params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  // grads must be in ParamSet order (as produced by Binding::gradients).
  void step(const std::vector<Grid>& grads);

  int64_t steps_taken() const { return t_; }

 private:
  ParamSet& params_;
  double lr_, beta1_, beta2_, eps_;
  std::vector<Grid> m_, v_;
  int64_t t_ = 0;
};

}  // namespace dubkit

#endif  // DUBKIT_OPTIM_H_
