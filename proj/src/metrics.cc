// src/metrics.cc

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

#include "dubkit/metrics.h"

#include <cmath>
#include <stdexcept>

#include "dubkit/align.h"

namespace dubkit {

std::vector<double> mel_envelope(const MelGrid& mel) {
  if (mel.values.rank() != 2 || mel.frames() == 0)
    throw std::invalid_argument("mel_envelope: empty spectrogram");
  std::vector<double> env(static_cast<size_t>(mel.frames()));
  for (int64_t t = 0; t < mel.frames(); ++t) {
    double s = 0.0;
    for (int64_t d = 0; d < mel.bins(); ++d) s += mel.values.at(d, t);
    env[t] = s / static_cast<double>(mel.bins());
  }
  return env;
}

double pearson(std::span<const double> a, std::span<const double> b,
               bool* degenerate) {
  if (a.size() != b.size())
    throw std::invalid_argument("pearson: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  if (a.size() < 2)
    throw std::invalid_argument("pearson: needs at least two points");
  if (degenerate) *degenerate = false;
  double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double va = 0.0, vb = 0.0, cov = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    va += da * da;
    vb += db * db;
    cov += da * db;
  }
  if (va <= 0.0 || vb <= 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return cov / std::sqrt(va * vb);
}

double cosine_similarity(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw_shape_error("cosine_similarity", a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) {
    dot += a.flat()[i] * b.flat()[i];
    na += a.flat()[i] * a.flat()[i];
    nb += b.flat()[i] * b.flat()[i];
  }
  double denom = std::max(std::sqrt(na) * std::sqrt(nb), 1e-12);
  return dot / denom;
}

double sync_correlation(const MelGrid& mel, const VisualTrack& visual,
                        bool* degenerate) {
  int64_t t_v = visual.video_frames();
  if (t_v < 2)
    throw std::invalid_argument("sync_correlation: visual track too short");
  double mel_sec = static_cast<double>(mel.frames()) / kMelFps;
  double vid_sec = static_cast<double>(t_v) / kVideoFps;
  if (std::fabs(mel_sec - vid_sec) > 1.0 / kVideoFps + 1e-9)
    throw std::invalid_argument(
        "sync_correlation: audio and video durations disagree by more than "
        "one video frame");
  std::vector<double> env = resample_linear(mel_envelope(mel), t_v);
  std::vector<double> lip0(static_cast<size_t>(t_v));
  for (int64_t t = 0; t < t_v; ++t) lip0[t] = visual.lip.at(0, t);
  return pearson(env, lip0, degenerate);
}

double speaker_similarity(const MelGrid& a, const MelGrid& b,
                          const SpeakerModel& speaker, const ParamSet& params) {
  Grid ea = speaker.pretrained_embed(a, params);
  Grid eb = speaker.pretrained_embed(b, params);
  return cosine_similarity(ea, eb);
}

double prosody_correlation(const MelGrid& mel, std::span<const double> contour,
                           bool* degenerate) {
  if (static_cast<int64_t>(contour.size()) != mel.frames())
    throw std::invalid_argument("prosody_correlation: contour has " +
                                std::to_string(contour.size()) +
                                " frames, spectrogram has " +
                                std::to_string(mel.frames()));
  std::vector<double> env = mel_envelope(mel);
  return pearson(env, contour, degenerate);
}

double mel_mse(const MelGrid& a, const MelGrid& b) {
  if (!a.values.same_shape(b.values))
    throw_shape_error("mel_mse", a.values, b.values);
  double s = 0.0;
  for (int64_t i = 0; i < a.values.numel(); ++i) {
    double d = a.values.flat()[i] - b.values.flat()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.values.numel());
}

}  // namespace dubkit
