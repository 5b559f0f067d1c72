// src/model.cc

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

#include "dubkit/model.h"

#include <stdexcept>

namespace dubkit {

ModelConfig ModelConfig::defaults() { return ModelConfig{}; }

ModelConfig ModelConfig::tiny(int mel_bins) {
  ModelConfig cfg;
  cfg.fusion.vocab = 8;
  cfg.fusion.c_text = 8;
  cfg.fusion.c_bottleneck = 4;
  cfg.fusion.heads = 2;
  cfg.fusion.text_blocks = 2;
  cfg.speaker.mel_bins = mel_bins;
  cfg.speaker.c_spk = 8;
  cfg.speaker.f_embed = 8;
  cfg.speaker.blocks = 2;
  cfg.speaker.heads = 2;
  cfg.estimator.mel_bins = mel_bins;
  cfg.estimator.c_text = 8;
  cfg.estimator.c_est = 16;
  cfg.estimator.blocks = 2;
  cfg.estimator.heads = 2;
  cfg.estimator.f_embed = 8;
  return cfg;
}

void ModelConfig::validate() const {
  if (fusion.c_text != estimator.c_text)
    throw std::invalid_argument("ModelConfig: fusion and estimator disagree on c_text");
  if (speaker.f_embed != estimator.f_embed)
    throw std::invalid_argument("ModelConfig: speaker and estimator disagree on f_embed");
  if (speaker.mel_bins != estimator.mel_bins)
    throw std::invalid_argument("ModelConfig: speaker and estimator disagree on mel_bins");
  if (fusion.c_text % fusion.heads != 0 || speaker.c_spk % speaker.heads != 0 ||
      estimator.c_est % estimator.heads != 0)
    throw std::invalid_argument("ModelConfig: widths must divide head counts");
}

Model::Model(const ModelConfig& config, uint64_t seed)
    : cfg(config),
      fusion(config.fusion),
      speaker(config.speaker),
      estimator(config.estimator),
      params(seed) {
  cfg.validate();
  Rng rng(derive_seed(seed, 0x10DE1));
  fusion.init_params(params, rng);
  speaker.init_params(params, rng);
  estimator.init_params(params, rng);
}

}  // namespace dubkit
