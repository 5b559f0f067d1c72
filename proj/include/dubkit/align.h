// dubkit/align.h

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

#ifndef DUBKIT_ALIGN_H_
#define DUBKIT_ALIGN_H_

#include <span>

#include "dubkit/data_types.h"

namespace dubkit {

// Endpoint-preserving linear resampling of a 1-D series to n_out points.
// n_out == 1 returns the first input point.
std::vector<double> resample_linear(std::span<const double> in, int64_t n_out);

// Visual streams upsampled from video rate to the mel frame rate by linear
// interpolation per channel.
struct AlignedVisual {
  Grid face;  // kFaceChannels x T_mel
  Grid lip;   // kLipChannels x T_mel
};

AlignedVisual align_visual(const VisualTrack& visual, int64_t t_mel);

}  // namespace dubkit

#endif  // DUBKIT_ALIGN_H_
