// dubkit/model.h

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

#ifndef DUBKIT_MODEL_H_
#define DUBKIT_MODEL_H_

#include "dubkit/estimator.h"
#include "dubkit/fusion.h"
#include "dubkit/speaker.h"

namespace dubkit {

struct ModelConfig {
  FusionConfig fusion;
  SpeakerConfig speaker;
  EstimatorConfig estimator;

  // Production-scale configuration.
  static ModelConfig defaults();
  // Reduced widths and depths for differentiation audits and fast tests.
  static ModelConfig tiny(int mel_bins = 4);

  void validate() const;
};

// The three submodels over one shared parameter store. Parameter
// registration order (fusion, speaker, estimator) is the manifest order.
struct Model {
  ModelConfig cfg;
  FusionModel fusion;
  SpeakerModel speaker;
  EstimatorModel estimator;
  ParamSet params;

  Model(const ModelConfig& config, uint64_t seed);
};

}  // namespace dubkit

#endif  // DUBKIT_MODEL_H_
