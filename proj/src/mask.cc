// src/mask.cc

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

#include "dubkit/mask.h"

#include <cmath>
#include <stdexcept>

namespace dubkit {

int64_t BinaryMask::masked_frames() const {
  int64_t n = 0;
  for (uint8_t f : frame_flags) n += (f != 0);
  return n;
}

Grid BinaryMask::to_grid(int64_t bins) const {
  if (bins <= 0) throw std::invalid_argument("BinaryMask::to_grid: bins must be positive");
  if (frame_flags.empty())
    throw std::invalid_argument("BinaryMask::to_grid: empty mask");
  Grid g({bins, frames()});
  for (int64_t t = 0; t < frames(); ++t) {
    double v = frame_flags[t] ? 1.0 : 0.0;
    for (int64_t d = 0; d < bins; ++d) g.at(d, t) = v;
  }
  return g;
}

BinaryMask sample_mask(int64_t frames, Rng& rng) {
  if (frames <= 0)
    throw std::invalid_argument("sample_mask: frame count must be positive");
  double fraction = rng.uniform(0.7, 1.0);
  int64_t span = static_cast<int64_t>(
      std::llround(fraction * static_cast<double>(frames)));
  if (span < 1) span = 1;
  if (span > frames) span = frames;
  int64_t start =
      static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(frames - span + 1)));
  BinaryMask mask;
  mask.frame_flags.assign(static_cast<size_t>(frames), 0);
  for (int64_t t = start; t < start + span; ++t) mask.frame_flags[t] = 1;
  return mask;
}

BinaryMask suffix_mask(int64_t frames, int64_t context_frames) {
  if (frames <= 0)
    throw std::invalid_argument("suffix_mask: frame count must be positive");
  if (context_frames < 0 || context_frames > frames)
    throw std::invalid_argument("suffix_mask: context length out of range");
  BinaryMask mask;
  mask.frame_flags.assign(static_cast<size_t>(frames), 1);
  for (int64_t t = 0; t < context_frames; ++t) mask.frame_flags[t] = 0;
  return mask;
}

}  // namespace dubkit
