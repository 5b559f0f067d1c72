// src/corpus.cc

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

#include "dubkit/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dubkit/align.h"

namespace dubkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double quantize_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

void quantize_grid(Grid& g) {
  for (double& v : g.flat()) v = quantize_f32(v);
}

std::vector<double> zscore(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  double sd = std::max(std::sqrt(var), 1e-8);
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
  return out;
}

std::vector<double> diff1(const std::vector<double>& x) {
  std::vector<double> out(x.size(), 0.0);
  for (size_t i = 1; i < x.size(); ++i) out[i] = x[i] - x[i - 1];
  return out;
}

std::vector<double> diff2(const std::vector<double>& x) {
  std::vector<double> out(x.size(), 0.0);
  for (size_t i = 2; i < x.size(); ++i) out[i] = x[i] - 2.0 * x[i - 1] + x[i - 2];
  return out;
}

std::vector<double> lag(const std::vector<double>& x, size_t k) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i >= k ? i - k : 0];
  return out;
}

std::vector<double> movavg3(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    size_t lo = i > 0 ? i - 1 : 0;
    size_t hi = i + 1 < x.size() ? i + 1 : x.size() - 1;
    out[i] = (x[lo] + x[i] + x[hi]) / 3.0;
  }
  return out;
}

std::vector<double> squared(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i];
  return out;
}

// Eight derived channels of a base series; channel 0 is its z-score.
Grid derived_channels(const std::vector<double>& base) {
  int64_t t = static_cast<int64_t>(base.size());
  Grid out({8, t});
  std::vector<double> zb = zscore(base);
  std::vector<std::vector<double>> ch;
  ch.push_back(zb);
  ch.push_back(zscore(diff1(base)));
  ch.push_back(zscore(squared(base)));
  ch.push_back(lag(zb, 1));
  ch.push_back(lag(zb, 2));
  ch.push_back(zscore(movavg3(base)));
  std::vector<double> neg(zb.size());
  for (size_t i = 0; i < zb.size(); ++i) neg[i] = -zb[i];
  ch.push_back(neg);
  ch.push_back(zscore(diff2(base)));
  for (int64_t c = 0; c < 8; ++c)
    for (int64_t i = 0; i < t; ++i) out.at(c, i) = ch[c][i];
  return out;
}

struct TokenTemplate {
  std::vector<double> profile;  // kMelBins, mean 1
};

std::vector<TokenTemplate> make_templates(Rng rng) {
  std::vector<TokenTemplate> templates(kVocabSize);
  for (auto& tmpl : templates) {
    tmpl.profile.assign(kMelBins, 0.05);
    for (int bump = 0; bump < 3; ++bump) {
      double center = rng.uniform(0.0, static_cast<double>(kMelBins));
      double width = rng.uniform(4.0, 9.0);
      double amp = rng.uniform(0.5, 1.0);
      for (int d = 0; d < kMelBins; ++d) {
        double z = (static_cast<double>(d) - center) / width;
        tmpl.profile[d] += amp * std::exp(-0.5 * z * z);
      }
    }
    double mean = 0.0;
    for (double v : tmpl.profile) mean += v;
    mean /= kMelBins;
    for (double& v : tmpl.profile) v /= mean;
  }
  return templates;
}

struct SpeakerProfile {
  std::vector<double> offset;  // kMelBins
};

std::vector<SpeakerProfile> make_speakers(int n, Rng rng) {
  // Stratified tilt and bump positions keep speakers apart; a random
  // permutation decorrelates the two axes.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<SpeakerProfile> speakers(n);
  for (int s = 0; s < n; ++s) {
    double tilt = -0.8 + 1.6 * (static_cast<double>(s) + 0.5) / n +
                  rng.uniform(-0.05, 0.05);
    double center = 4.0 + 40.0 * (static_cast<double>(perm[s]) + 0.5) / n +
                    rng.uniform(-1.0, 1.0);
    double amp = rng.uniform(1.0, 1.6);
    auto& prof = speakers[s].offset;
    prof.assign(kMelBins, 0.0);
    for (int d = 0; d < kMelBins; ++d) {
      double rel = (static_cast<double>(d) - kMelBins / 2.0) / kMelBins;
      double z = (static_cast<double>(d) - center) / 3.0;
      prof[d] = tilt * rel + amp * std::exp(-0.5 * z * z);
    }
  }
  return speakers;
}

// Smooth prosody contour: a few low-frequency sinusoids, peak-normalized.
std::vector<double> make_contour(int64_t t_mel, Rng& rng) {
  int n_sin = 2 + static_cast<int>(rng.uniform_int(2));
  std::vector<double> amp(n_sin), freq(n_sin), phase(n_sin);
  for (int i = 0; i < n_sin; ++i) {
    amp[i] = rng.uniform(0.5, 1.0);
    freq[i] = rng.uniform(0.4, 2.2);
    phase[i] = rng.uniform(0.0, kTwoPi);
  }
  std::vector<double> c(static_cast<size_t>(t_mel));
  double peak = 0.0;
  for (int64_t t = 0; t < t_mel; ++t) {
    double seconds = static_cast<double>(t) / kMelFps;
    double v = 0.0;
    for (int i = 0; i < n_sin; ++i)
      v += amp[i] * std::sin(kTwoPi * freq[i] * seconds + phase[i]);
    c[t] = v;
    peak = std::max(peak, std::fabs(v));
  }
  peak = std::max(peak, 1e-8);
  for (double& v : c) v /= peak;
  return c;
}

std::vector<int64_t> token_of_frame(int64_t t_mel, int64_t n_tokens) {
  std::vector<int64_t> map(static_cast<size_t>(t_mel));
  int64_t base = t_mel / n_tokens;
  for (int64_t t = 0; t < t_mel; ++t)
    map[t] = std::min(t / std::max<int64_t>(base, 1), n_tokens - 1);
  return map;
}

}  // namespace

void CorpusConfig::validate() const {
  if (speakers <= 0 || samples_per_speaker <= 0)
    throw std::invalid_argument("CorpusConfig: counts must be positive");
  if (min_duration_s < 0.5 || max_duration_s < min_duration_s ||
      max_duration_s > 2.2)
    throw std::invalid_argument(
        "CorpusConfig: durations must satisfy 0.5 <= min <= max <= 2.2");
  if (tokens_per_second <= 0.0 || noise_std < 0.0)
    throw std::invalid_argument("CorpusConfig: bad rate or noise level");
}

Corpus generate_corpus(const CorpusConfig& config, uint64_t seed) {
  config.validate();
  Rng root(seed);
  std::vector<TokenTemplate> templates = make_templates(root.derive(1));
  std::vector<SpeakerProfile> speakers =
      make_speakers(config.speakers, root.derive(2));
  Rng sample_root = root.derive(3);

  Corpus corpus;
  corpus.reserve(static_cast<size_t>(config.speakers) * config.samples_per_speaker);
  uint64_t id = 0;
  for (int s = 0; s < config.speakers; ++s) {
    for (int k = 0; k < config.samples_per_speaker; ++k, ++id) {
      Rng rng = sample_root.derive(id);
      Sample sample;
      sample.id = id;
      sample.speaker_id = static_cast<uint32_t>(s);

      double dur = rng.uniform(config.min_duration_s, config.max_duration_s);
      int64_t t_mel = mel_frames_for_duration(dur);
      int64_t t_v = std::max<int64_t>(
          2, static_cast<int64_t>(std::floor(dur * kVideoFps)));
      int64_t n_tokens = std::max<int64_t>(
          1, static_cast<int64_t>(std::llround(dur * config.tokens_per_second)));

      sample.text.tokens.resize(static_cast<size_t>(n_tokens));
      for (auto& tok : sample.text.tokens)
        tok = static_cast<uint16_t>(rng.uniform_int(kVocabSize));

      std::vector<double> contour = make_contour(t_mel, rng);
      std::vector<int64_t> tok_of = token_of_frame(t_mel, n_tokens);

      Grid mel({kMelBins, t_mel});
      const auto& profile = speakers[s].offset;
      for (int64_t t = 0; t < t_mel; ++t) {
        double env = 1.0 + 0.7 * contour[t];
        const auto& tmpl = templates[sample.text.tokens[tok_of[t]]].profile;
        for (int d = 0; d < kMelBins; ++d)
          mel.at(d, t) =
              env * tmpl[d] + profile[d] + config.noise_std * rng.normal();
      }
      quantize_grid(mel);
      sample.mel = MelGrid(std::move(mel));

      // Lip features come from the stored (quantized) mel's energy envelope,
      // so the sync between the two streams is exact by construction.
      std::vector<double> envelope(static_cast<size_t>(t_mel));
      for (int64_t t = 0; t < t_mel; ++t) {
        double m = 0.0;
        for (int d = 0; d < kMelBins; ++d) m += sample.mel.values.at(d, t);
        envelope[t] = m / kMelBins;
      }
      sample.visual.lip = derived_channels(resample_linear(envelope, t_v));
      sample.visual.face = derived_channels(resample_linear(contour, t_v));
      quantize_grid(sample.visual.lip);
      quantize_grid(sample.visual.face);

      sample.latent_prosody.resize(static_cast<size_t>(t_mel));
      for (int64_t t = 0; t < t_mel; ++t)
        sample.latent_prosody[t] = quantize_f32(contour[t]);

      corpus.push_back(std::move(sample));
    }
  }
  return corpus;
}

std::vector<const Sample*> corpus_split(const Corpus& corpus, Split split) {
  std::map<uint32_t, std::vector<const Sample*>> by_speaker;
  for (const Sample& s : corpus) by_speaker[s.speaker_id].push_back(&s);
  for (auto& [spk, list] : by_speaker)
    std::sort(list.begin(), list.end(),
              [](const Sample* a, const Sample* b) { return a->id < b->id; });
  std::vector<const Sample*> out;
  for (auto& [spk, list] : by_speaker) {
    size_t eval_count = list.size() / 3;
    size_t cut = list.size() - eval_count;
    for (size_t i = 0; i < list.size(); ++i) {
      bool is_eval = i >= cut;
      if (split == Split::kAll || (split == Split::kEval && is_eval) ||
          (split == Split::kTrain && !is_eval))
        out.push_back(list[i]);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Sample* a, const Sample* b) { return a->id < b->id; });
  return out;
}

const Sample& reference_for(const Corpus& corpus, const Sample& sample) {
  std::vector<const Sample*> same;
  for (const Sample& s : corpus)
    if (s.speaker_id == sample.speaker_id) same.push_back(&s);
  std::sort(same.begin(), same.end(),
            [](const Sample* a, const Sample* b) { return a->id < b->id; });
  if (same.empty())
    throw std::invalid_argument("reference_for: sample's speaker not in corpus");
  for (size_t i = 0; i < same.size(); ++i)
    if (same[i]->id == sample.id) return *same[(i + 1) % same.size()];
  throw std::invalid_argument("reference_for: sample not in corpus");
}

const Sample& find_sample(const Corpus& corpus, uint64_t id) {
  for (const Sample& s : corpus)
    if (s.id == id) return s;
  throw std::invalid_argument("find_sample: no sample with id " +
                              std::to_string(id));
}

}  // namespace dubkit
