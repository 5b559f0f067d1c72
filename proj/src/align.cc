// src/align.cc

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

#include "dubkit/align.h"

#include <cmath>
#include <stdexcept>

namespace dubkit {

std::vector<double> resample_linear(std::span<const double> in, int64_t n_out) {
  if (in.empty()) throw std::invalid_argument("resample_linear: empty input");
  if (n_out <= 0)
    throw std::invalid_argument("resample_linear: output length must be positive");
  std::vector<double> out(static_cast<size_t>(n_out));
  int64_t n_in = static_cast<int64_t>(in.size());
  if (n_out == 1 || n_in == 1) {
    for (auto& v : out) v = in[0];
    if (n_out >= 1) out[0] = in[0];
    return out;
  }
  double step = static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1);
  for (int64_t j = 0; j < n_out; ++j) {
    double x = static_cast<double>(j) * step;
    int64_t i0 = static_cast<int64_t>(std::floor(x));
    if (i0 >= n_in - 1) {
      out[j] = in[n_in - 1];
      continue;
    }
    double frac = x - static_cast<double>(i0);
    out[j] = in[i0] * (1.0 - frac) + in[i0 + 1] * frac;
  }
  return out;
}

namespace {

Grid resample_channels(const Grid& in, int64_t t_out) {
  Grid out({in.rows(), t_out});
  std::vector<double> row(static_cast<size_t>(in.cols()));
  for (int64_t c = 0; c < in.rows(); ++c) {
    for (int64_t t = 0; t < in.cols(); ++t) row[t] = in.at(c, t);
    std::vector<double> res = resample_linear(row, t_out);
    for (int64_t t = 0; t < t_out; ++t) out.at(c, t) = res[t];
  }
  return out;
}

}  // namespace

int64_t mel_frames_for_duration(double seconds) {
  if (seconds <= 0.0)
    throw std::invalid_argument("mel_frames_for_duration: duration must be positive");
  return static_cast<int64_t>(std::floor(seconds * kMelFps));
}

int64_t mel_frames_for_video_frames(int64_t video_frames) {
  if (video_frames <= 0)
    throw std::invalid_argument(
        "mel_frames_for_video_frames: frame count must be positive");
  return static_cast<int64_t>(
      std::floor(static_cast<double>(video_frames) * kMelFramesPerVideoFrame));
}

int64_t VisualTrack::video_frames() const {
  if (face.rank() != 2 || lip.rank() != 2 || face.cols() != lip.cols())
    throw std::invalid_argument(
        "VisualTrack: face and lip streams must share one frame count");
  return face.cols();
}

AlignedVisual align_visual(const VisualTrack& visual, int64_t t_mel) {
  if (t_mel <= 0)
    throw std::invalid_argument("align_visual: mel frame count must be positive");
  visual.video_frames();
  AlignedVisual out;
  out.face = resample_channels(visual.face, t_mel);
  out.lip = resample_channels(visual.lip, t_mel);
  return out;
}

}  // namespace dubkit
