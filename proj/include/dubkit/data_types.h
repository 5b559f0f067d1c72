// dubkit/data_types.h

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

#ifndef DUBKIT_DATA_TYPES_H_
#define DUBKIT_DATA_TYPES_H_

#include <cstdint>
#include <vector>

#include "dubkit/grid.h"

namespace dubkit {

inline constexpr int kMelBins = 100;
inline constexpr int kSampleRate = 24000;
inline constexpr int kHopSamples = 256;
// 24000 / 256 mel frames per second.
inline constexpr double kMelFps = 93.75;
inline constexpr int kVideoFps = 25;
inline constexpr double kMelFramesPerVideoFrame = kMelFps / kVideoFps;  // 3.75
inline constexpr int kVocabSize = 32;
inline constexpr int kFaceChannels = 8;
inline constexpr int kLipChannels = 8;

// Log-mel style spectrogram, bins x frames.
struct MelGrid {
  Grid values;

  MelGrid() = default;
  explicit MelGrid(Grid v) : values(std::move(v)) {}

  int64_t bins() const { return values.rows(); }
  int64_t frames() const { return values.cols(); }
};

int64_t mel_frames_for_duration(double seconds);
int64_t mel_frames_for_video_frames(int64_t video_frames);

// Face and lip feature streams at video rate; both share one frame count.
struct VisualTrack {
  Grid face;  // kFaceChannels x T_v
  Grid lip;   // kLipChannels x T_v

  int64_t video_frames() const;
};

struct TextSequence {
  std::vector<uint16_t> tokens;

  int64_t length() const { return static_cast<int64_t>(tokens.size()); }
};

struct Sample {
  uint64_t id = 0;
  uint32_t speaker_id = 0;
  MelGrid mel;
  VisualTrack visual;
  TextSequence text;
  // Ground-truth prosody contour per mel frame; evaluation only, the model
  // never sees it.
  std::vector<double> latent_prosody;
};

using Corpus = std::vector<Sample>;

}  // namespace dubkit

#endif  // DUBKIT_DATA_TYPES_H_
