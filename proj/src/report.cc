// src/report.cc

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

#include "dubkit/report.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dubkit {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void EvalReport::compute_aggregates() {
  if (per_sample.empty())
    throw std::invalid_argument("EvalReport: no samples to aggregate");
  double n = static_cast<double>(per_sample.size());
  mean_sync_corr = mean_spk_sim = mean_recon_mse = mean_prosody_corr = 0.0;
  for (const SampleMetrics& m : per_sample) {
    mean_sync_corr += m.sync_corr;
    mean_spk_sim += m.spk_sim;
    mean_recon_mse += m.recon_mse;
    mean_prosody_corr += m.prosody_corr;
  }
  mean_sync_corr /= n;
  mean_spk_sim /= n;
  mean_recon_mse /= n;
  mean_prosody_corr /= n;
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << "report_version: 1\n";
  os << "checkpoint: " << (checkpoint.empty() ? "(memory)" : checkpoint) << "\n";
  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", checkpoint_crc);
  os << "checkpoint_crc32: " << crc << "\n";
  os << "mode: " << mode << "\n";
  os << "scale_face: " << fmt(scales.face) << "\n";
  os << "scale_lip: " << fmt(scales.lip) << "\n";
  os << "scale_text: " << fmt(scales.text) << "\n";
  os << "steps: " << steps << "\n";
  os << "seed: " << seed << "\n";
  os << "split: " << split << "\n";
  os << "samples: " << per_sample.size() << "\n";
  os << "mean_sync_corr: " << fmt(mean_sync_corr) << "\n";
  os << "mean_spk_sim: " << fmt(mean_spk_sim) << "\n";
  os << "mean_recon_mse: " << fmt(mean_recon_mse) << "\n";
  os << "mean_prosody_corr: " << fmt(mean_prosody_corr) << "\n";
  os << "per_sample: id speaker sync_corr spk_sim recon_mse prosody_corr\n";
  for (const SampleMetrics& m : per_sample)
    os << m.id << " " << m.speaker_id << " " << fmt(m.sync_corr) << " "
       << fmt(m.spk_sim) << " " << fmt(m.recon_mse) << " "
       << fmt(m.prosody_corr) << "\n";
  return os.str();
}

EvalReport evaluate_split(const Model& model, const Corpus& corpus, Split split,
                          const InferenceMode& mode,
                          const GuidanceScales& scales, int64_t steps,
                          uint64_t seed) {
  std::vector<const Sample*> samples = corpus_split(corpus, split);
  if (samples.empty())
    throw std::invalid_argument("evaluate_split: split is empty");
  EvalReport report;
  report.mode = mode.name;
  report.scales = scales;
  report.steps = steps;
  report.seed = seed;
  report.split = split == Split::kEval    ? "eval"
                 : split == Split::kTrain ? "train"
                                          : "all";
  for (const Sample* s : samples) {
    const Sample& ref = reference_for(corpus, *s);
    DubRequest req;
    req.text = s->text;
    req.visual = &s->visual;
    req.reference = &ref.mel;
    req.t_mel = s->mel.frames();
    req.steps = steps;
    req.seed = derive_seed(seed, s->id);
    req.scales = scales;
    MelGrid gen = dub(model, req, mode);
    SampleMetrics m;
    m.id = s->id;
    m.speaker_id = s->speaker_id;
    m.sync_corr = sync_correlation(gen, s->visual);
    m.spk_sim = speaker_similarity(gen, ref.mel, model.speaker, model.params);
    m.recon_mse = mel_mse(gen, s->mel);
    m.prosody_corr = prosody_correlation(gen, s->latent_prosody);
    report.per_sample.push_back(m);
  }
  report.compute_aggregates();
  return report;
}

uint64_t ablation_row_seed(uint64_t root_seed, const GuidanceScales& scales) {
  uint64_t s = root_seed;
  s = derive_seed(s, std::bit_cast<uint64_t>(scales.face));
  s = derive_seed(s, std::bit_cast<uint64_t>(scales.lip));
  s = derive_seed(s, std::bit_cast<uint64_t>(scales.text));
  return s;
}

std::vector<AblationRow> ablate_guidance(const Model& model,
                                         const Corpus& corpus, Split split,
                                         const InferenceMode& mode,
                                         const std::vector<GuidanceScales>& grid,
                                         int64_t steps, uint64_t root_seed) {
  if (grid.empty())
    throw std::invalid_argument("ablate_guidance: empty scale grid");
  std::vector<AblationRow> rows;
  rows.reserve(grid.size());
  for (const GuidanceScales& scales : grid) {
    AblationRow row;
    row.scales = scales;
    row.report = evaluate_split(model, corpus, split, mode, scales, steps,
                                ablation_row_seed(root_seed, scales));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "scale_face,scale_lip,scale_text,mean_sync_corr,mean_spk_sim,"
        "mean_recon_mse,mean_prosody_corr\n";
  for (const AblationRow& r : rows)
    os << fmt(r.scales.face) << "," << fmt(r.scales.lip) << ","
       << fmt(r.scales.text) << "," << fmt(r.report.mean_sync_corr) << ","
       << fmt(r.report.mean_spk_sim) << "," << fmt(r.report.mean_recon_mse)
       << "," << fmt(r.report.mean_prosody_corr) << "\n";
  return os.str();
}

std::string ablation_report(const std::vector<AblationRow>& rows) {
  std::vector<const AblationRow*> ranked;
  for (const AblationRow& r : rows) ranked.push_back(&r);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const AblationRow* a, const AblationRow* b) {
                     return a->report.mean_sync_corr > b->report.mean_sync_corr;
                   });
  std::ostringstream os;
  os << "guidance ablation, ranked by mean sync correlation\n";
  os << "rank scale_face scale_lip scale_text mean_sync_corr mean_spk_sim "
        "mean_recon_mse mean_prosody_corr\n";
  int rank = 1;
  for (const AblationRow* r : ranked)
    os << rank++ << " " << fmt(r->scales.face) << " " << fmt(r->scales.lip)
       << " " << fmt(r->scales.text) << " " << fmt(r->report.mean_sync_corr)
       << " " << fmt(r->report.mean_spk_sim) << " "
       << fmt(r->report.mean_recon_mse) << " "
       << fmt(r->report.mean_prosody_corr) << "\n";
  return os.str();
}

}  // namespace dubkit
