// dubkit/corpus.h

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

#ifndef DUBKIT_CORPUS_H_
#define DUBKIT_CORPUS_H_

#include "dubkit/data_types.h"
#include "dubkit/rng.h"

namespace dubkit {

struct CorpusConfig {
  int speakers = 8;
  int samples_per_speaker = 12;
  double min_duration_s = 0.8;
  double max_duration_s = 2.0;
  double tokens_per_second = 4.0;
  double noise_std = 0.02;

  void validate() const;
};

// Synthetic audiovisual utterances with known structure:
//  - each token owns a fixed spectral template; frames take their token's
//    template scaled by a smooth prosody envelope
//  - each speaker adds a fixed spectral tilt and a low-band resonance bump
//  - lip channel 0 is the normalized mel energy envelope at video rate, so
//    audio-visual sync is measurable analytically
//  - face channel 0 tracks the prosody contour
// All stored payloads are quantized to f32 at creation, so a save/load
// round trip reproduces the corpus exactly.
Corpus generate_corpus(const CorpusConfig& config, uint64_t seed);

enum class Split { kTrain, kEval, kAll };

// Deterministic split computable from the records alone: per speaker, ordered
// by id, the last floor(n/3) samples are held out for evaluation.
std::vector<const Sample*> corpus_split(const Corpus& corpus, Split split);

// Reference clip for dubbing a sample: the next sample by id from the same
// speaker, wrapping around; never the sample itself unless it is alone.
const Sample& reference_for(const Corpus& corpus, const Sample& sample);

const Sample& find_sample(const Corpus& corpus, uint64_t id);

}  // namespace dubkit

#endif  // DUBKIT_CORPUS_H_
