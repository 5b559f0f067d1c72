// src/paramset.cc

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

#include "dubkit/paramset.h"

#include <stdexcept>

namespace dubkit {

Param& ParamSet::add(const std::string& name, Grid value, bool trainable) {
  if (name.empty()) throw std::invalid_argument("ParamSet::add: empty name");
  if (has(name))
    throw std::invalid_argument("ParamSet::add: duplicate parameter name '" +
                                name + "'");
  if (value.numel() == 0)
    throw std::invalid_argument("ParamSet::add: empty value for '" + name + "'");
  index_[name] = params_.size();
  params_.push_back(Param{name, std::move(value), trainable});
  return params_.back();
}

Param& ParamSet::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("ParamSet::get: unknown parameter '" + name + "'");
  return params_[it->second];
}

const Param& ParamSet::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("ParamSet::get: unknown parameter '" + name + "'");
  return params_[it->second];
}

size_t ParamSet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("ParamSet::index_of: unknown parameter '" +
                                name + "'");
  return it->second;
}

int64_t ParamSet::total_elements(bool trainable_only) const {
  int64_t n = 0;
  for (const Param& p : params_)
    if (!trainable_only || p.trainable) n += p.value.numel();
  return n;
}

Var Binding::operator[](const std::string& name) {
  auto it = vars_.find(name);
  if (it != vars_.end()) return it->second;
  const Param& p = params_.get(name);
  Var v = tape_.leaf(p.value, p.trainable);
  vars_[name] = v;
  return v;
}

std::vector<Grid> Binding::gradients() const {
  std::vector<Grid> out;
  out.reserve(params_.size());
  for (size_t i = 0; i < params_.size(); ++i) {
    const Param& p = params_.at(i);
    auto it = vars_.find(p.name);
    if (it == vars_.end() || !p.trainable) {
      out.push_back(Grid(p.value.shape()));
    } else {
      out.push_back(tape_.grad(it->second));
    }
  }
  return out;
}

std::vector<Grid> backward(Tape& tape, Var loss, const Binding& binding) {
  tape.backward(loss);
  return binding.gradients();
}

}  // namespace dubkit
