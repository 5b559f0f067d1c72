// dubkit/mask.h

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

#ifndef DUBKIT_MASK_H_
#define DUBKIT_MASK_H_

#include <cstdint>
#include <vector>

#include "dubkit/grid.h"

namespace dubkit {

// Per-frame generation mask. A flag of 1 marks a frame the model must
// generate; 0 marks context kept from the reference.
struct BinaryMask {
  std::vector<uint8_t> frame_flags;

  int64_t frames() const { return static_cast<int64_t>(frame_flags.size()); }
  int64_t masked_frames() const;
  bool is_masked(int64_t t) const { return frame_flags[t] != 0; }
  // Expanded to bins x frames with each column constant.
  Grid to_grid(int64_t bins) const;
};

// Contiguous masked span covering a uniform fraction in [0.7, 1] of the
// frames, placed uniformly at random; the whole column is masked or kept.
BinaryMask sample_mask(int64_t frames, Rng& rng);

// Mask with the first `context_frames` kept and the rest masked.
BinaryMask suffix_mask(int64_t frames, int64_t context_frames);

}  // namespace dubkit

#endif  // DUBKIT_MASK_H_
