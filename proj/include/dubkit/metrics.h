// dubkit/metrics.h

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

#ifndef DUBKIT_METRICS_H_
#define DUBKIT_METRICS_H_

#include <span>

#include "dubkit/data_types.h"
#include "dubkit/speaker.h"

namespace dubkit {

// Per-frame mean over mel bins.
std::vector<double> mel_envelope(const MelGrid& mel);

// Pearson correlation; a zero-variance series makes the value 0 and sets
// *degenerate instead of dividing by zero.
double pearson(std::span<const double> a, std::span<const double> b,
               bool* degenerate = nullptr);

double cosine_similarity(const Grid& a, const Grid& b);

// Correlation between the spectrogram's energy envelope (resampled to video
// rate) and lip channel 0. The two streams must agree in duration to within
// one video frame.
double sync_correlation(const MelGrid& mel, const VisualTrack& visual,
                        bool* degenerate = nullptr);

// Cosine similarity of the frozen-branch speaker embeddings of two clips.
double speaker_similarity(const MelGrid& a, const MelGrid& b,
                          const SpeakerModel& speaker, const ParamSet& params);

// Correlation between the energy envelope and a stored prosody contour of
// the same frame count.
double prosody_correlation(const MelGrid& mel, std::span<const double> contour,
                           bool* degenerate = nullptr);

// Mean squared difference between two equal-shape spectrograms.
double mel_mse(const MelGrid& a, const MelGrid& b);

}  // namespace dubkit

#endif  // DUBKIT_METRICS_H_
