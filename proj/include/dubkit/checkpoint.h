// dubkit/checkpoint.h

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

#ifndef DUBKIT_CHECKPOINT_H_
#define DUBKIT_CHECKPOINT_H_

#include <string>

#include "dubkit/model.h"
#include "dubkit/trainer.h"

namespace dubkit {

// Container layout (all integers little-endian):
//   "SVCK" | u32 version | u32 config length | config text
//   | u32 param count
//   | per param: u32 name length | name | u8 trainable | u32 rank | u32 dims
//   | per param: f64 payload in manifest order
//   | u32 crc32 of everything before it
inline constexpr char kCheckpointMagic[5] = "SVCK";
inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const TrainConfig& config,
                     const ParamSet& params);

struct Checkpoint {
  TrainConfig config;
  ParamSet params;
};

Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint values into the model's parameters. Every model
// parameter must be present with the same shape and trainable flag, and the
// checkpoint must not carry extras.
void load_into_model(Model& model, const Checkpoint& ckpt);

uint32_t file_crc32(const std::string& path);

}  // namespace dubkit

#endif  // DUBKIT_CHECKPOINT_H_
