// dubkit/paramset.h

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

#ifndef DUBKIT_PARAMSET_H_
#define DUBKIT_PARAMSET_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "dubkit/tape.h"

namespace dubkit {

struct Param {
  std::string name;
  Grid value;
  bool trainable = true;
};

// Ordered, named parameter store. Registration order is the canonical
// manifest order used by the optimizer, gradients and checkpoints.
class ParamSet {
 public:
  explicit ParamSet(uint64_t init_seed = 0) : init_seed_(init_seed) {}

  uint64_t init_seed() const { return init_seed_; }

  Param& add(const std::string& name, Grid value, bool trainable = true);
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  Param& get(const std::string& name);
  const Param& get(const std::string& name) const;
  size_t size() const { return params_.size(); }
  Param& at(size_t i) { return params_[i]; }
  const Param& at(size_t i) const { return params_[i]; }
  size_t index_of(const std::string& name) const;

  int64_t total_elements(bool trainable_only = false) const;

 private:
  std::vector<Param> params_;
  std::unordered_map<std::string, size_t> index_;
  uint64_t init_seed_;
};

// Per-forward-pass connection between a ParamSet and a Tape. Each parameter
// becomes a tape leaf the first time it is referenced; trainable parameters
// get needs_grad set, frozen ones do not.
class Binding {
 public:
  Binding(Tape& tape, const ParamSet& params) : tape_(tape), params_(params) {}

  // Leaf var for the named parameter (created on first use).
  Var operator[](const std::string& name);

  const ParamSet& params() const { return params_; }

  // Gradients in ParamSet order after Tape::backward. Parameters that are
  // frozen or never touched by the loss get zero grids.
  std::vector<Grid> gradients() const;

 private:
  Tape& tape_;
  const ParamSet& params_;
  std::unordered_map<std::string, Var> vars_;
};

// Runs the backward sweep from `loss` and returns gradients in ParamSet order.
std::vector<Grid> backward(Tape& tape, Var loss, const Binding& binding);

}  // namespace dubkit

#endif  // DUBKIT_PARAMSET_H_
