// dubkit/sampler.h

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

#ifndef DUBKIT_SAMPLER_H_
#define DUBKIT_SAMPLER_H_

#include "dubkit/model.h"

namespace dubkit {

struct GuidanceScales {
  double face = 0.5;
  double lip = 0.5;
  double text = 1.0;
};

// Which conditions the sampler exposes to the model. The five named
// presets:
//   M1  context only            M2  speaker embedding only
//   M3  lip + face + context    M4  lip + face + embedding
//   M5  face + embedding
// Target text is always conditioned on.
struct InferenceMode {
  std::string name;
  bool lip = false;
  bool face = false;
  bool context = false;
  bool spkemb = false;
};

InferenceMode inference_mode(const std::string& name);

// Guided field from the five condition variants:
//   full + s_face * (face_text - text) + s_lip * (lip_text - text)
//        + s_text * (text - uncond)
// Terms whose scale is exactly zero are skipped, leaving the remaining
// arithmetic untouched.
Grid cfg_combine(const Grid& full, const Grid& face_text, const Grid& lip_text,
                 const Grid& text_only, const Grid& uncond,
                 const GuidanceScales& scales);

// One model evaluation under a chosen condition pattern. speaker_on == false
// is the unconditional variant (speaker identity dropped along with the
// rest); text_on/face_on/lip_on select branches of the fused stream.
using VariantFn =
    std::function<Grid(bool face_on, bool lip_on, bool text_on, bool speaker_on)>;

// Evaluates only the variants the scales call for (variants are shared
// between terms) and combines them. Scales for unavailable streams are
// forced to zero first.
Grid guided_estimate(const VariantFn& variant, bool face_available,
                     bool lip_available, const GuidanceScales& scales);

using FieldFn = std::function<Grid(const Grid& x, double t)>;

// Explicit Euler from Gaussian noise: steps equal intervals on [0, 1),
// x <- x + field(x, k/steps) / steps. Aborts if the field goes non-finite.
Grid euler_integrate(const std::vector<int64_t>& shape, const FieldFn& field,
                     int64_t steps, uint64_t seed);

inline constexpr int64_t kDefaultSamplingSteps = 16;
// Longest reference prefix kept when conditioning on context, in mel frames.
inline constexpr int64_t kMaxContextFrames = 94;

struct DubRequest {
  TextSequence text;
  const VisualTrack* visual = nullptr;   // required by face/lip modes
  const MelGrid* reference = nullptr;    // required by context/embedding modes
  int64_t t_mel = 0;                     // 0: derived from the visual track
  int64_t steps = kDefaultSamplingSteps;
  uint64_t seed = 0;
  GuidanceScales scales;
};

// Generates a dubbed spectrogram under the given mode. Context modes
// prepend the reference prefix as fixed context and return only the
// generated region; embedding modes embed the whole reference clip.
MelGrid dub(const Model& model, const DubRequest& request,
            const InferenceMode& mode);

}  // namespace dubkit

#endif  // DUBKIT_SAMPLER_H_
