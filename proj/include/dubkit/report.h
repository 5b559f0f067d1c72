// dubkit/report.h

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

#ifndef DUBKIT_REPORT_H_
#define DUBKIT_REPORT_H_

#include "dubkit/corpus.h"
#include "dubkit/metrics.h"
#include "dubkit/sampler.h"

namespace dubkit {

struct SampleMetrics {
  uint64_t id = 0;
  uint32_t speaker_id = 0;
  double sync_corr = 0.0;
  double spk_sim = 0.0;
  double recon_mse = 0.0;
  double prosody_corr = 0.0;
};

struct EvalReport {
  std::string checkpoint;       // path, empty when evaluated in memory
  uint32_t checkpoint_crc = 0;  // 0 when evaluated in memory
  std::string mode;
  GuidanceScales scales;
  int64_t steps = 0;
  uint64_t seed = 0;
  std::string split;
  std::vector<SampleMetrics> per_sample;
  double mean_sync_corr = 0.0;
  double mean_spk_sim = 0.0;
  double mean_recon_mse = 0.0;
  double mean_prosody_corr = 0.0;

  void compute_aggregates();
  // Canonical fixed-order text rendering; identical runs give identical bytes.
  std::string to_text() const;
};

// Dubs every sample of the split (its own text and visual timing, the
// reference clip of its speaker) and scores the result against ground truth.
// An empty split is an error, not an empty table.
EvalReport evaluate_split(const Model& model, const Corpus& corpus, Split split,
                          const InferenceMode& mode,
                          const GuidanceScales& scales, int64_t steps,
                          uint64_t seed);

struct AblationRow {
  GuidanceScales scales;
  EvalReport report;
};

// One evaluation per scale triple. Each row's seed is derived from the root
// seed and the triple's values, so duplicate triples give identical rows and
// row order does not matter.
std::vector<AblationRow> ablate_guidance(const Model& model,
                                         const Corpus& corpus, Split split,
                                         const InferenceMode& mode,
                                         const std::vector<GuidanceScales>& grid,
                                         int64_t steps, uint64_t root_seed);

uint64_t ablation_row_seed(uint64_t root_seed, const GuidanceScales& scales);

// CSV with header, rows in grid order.
std::string ablation_csv(const std::vector<AblationRow>& rows);
// Text table ranked by mean sync correlation, best first.
std::string ablation_report(const std::vector<AblationRow>& rows);

}  // namespace dubkit

#endif  // DUBKIT_REPORT_H_
