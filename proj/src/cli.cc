// src/cli.cc

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

#include "dubkit/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dubkit/checkpoint.h"
#include "dubkit/corpus_io.h"
#include "dubkit/gradcheck.h"
#include "dubkit/report.h"

namespace dubkit {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "eval") return Split::kEval;
  if (name == "all") return Split::kAll;
  throw UsageError("unknown split \"" + name + "\" (train, eval, all)");
}

InferenceMode parse_mode(const std::string& name) {
  try {
    return inference_mode(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// "f,l,t[;f,l,t...]" -> scale triples.
std::vector<GuidanceScales> parse_scale_list(const std::string& text) {
  std::vector<GuidanceScales> out;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    if (row.empty()) continue;
    std::stringstream cells(row);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(cells, cell, ',')) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("bad scale value \"" + cell + "\" in \"" + text + "\"");
      }
    }
    if (vals.size() != 3)
      throw UsageError("scale triple \"" + row + "\" needs face,lip,text");
    out.push_back(GuidanceScales{vals[0], vals[1], vals[2]});
  }
  if (out.empty()) throw UsageError("empty scale grid \"" + text + "\"");
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string mel_csv(const MelGrid& mel) {
  std::string out;
  char buf[64];
  for (int64_t d = 0; d < mel.bins(); ++d) {
    for (int64_t t = 0; t < mel.frames(); ++t) {
      std::snprintf(buf, sizeof buf, "%.9g", mel.values.at(d, t));
      if (t) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Model load_model(const std::string& ckpt_path) {
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  Model model(ModelConfig::defaults(), 0);
  load_into_model(model, ckpt);
  return model;
}

struct GenArgs {
  std::string out;
  CorpusConfig cfg;
  uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
  a.cfg.validate();
  Corpus corpus = generate_corpus(a.cfg, a.seed);
  save_corpus(corpus, a.out);
  std::cout << "wrote " << corpus.size() << " samples (" << a.cfg.speakers
            << " speakers) to " << a.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string out_dir;
  TrainConfig cfg;
  uint64_t model_seed = 7;
};

int run_train(const TrainArgs& a) {
  a.cfg.validate();
  Corpus corpus = load_corpus(a.data);
  std::filesystem::create_directories(a.out_dir);
  Model model(ModelConfig::defaults(), a.model_seed);
  std::cout << "training " << model.params.total_elements(true)
            << " parameters for " << a.cfg.steps << " steps\n";

  TrainHooks hooks;
  hooks.on_checkpoint = [&](int64_t step, const Model& m,
                            const std::vector<double>& trace) {
    char name[64];
    std::snprintf(name, sizeof name, "ckpt_%06lld.svck",
                  static_cast<long long>(step));
    std::string path = a.out_dir + "/" + name;
    save_checkpoint(path, a.cfg, m.params);
    std::cout << "step " << step << " loss " << trace.back() << " -> " << path
              << "\n";
  };

  TrainResult result = train(model, corpus, a.cfg, hooks);

  std::string final_path = a.out_dir + "/model.svck";
  save_checkpoint(final_path, a.cfg, model.params);

  std::string csv = "step,loss\n";
  char buf[64];
  for (size_t i = 0; i < result.loss_trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, result.loss_trace[i]);
    csv += buf;
  }
  write_text_file(a.out_dir + "/loss.csv", csv);

  std::cout << "final loss " << result.loss_trace.back() << " -> " << final_path
            << "\n";
  return 0;
}

struct SampleArgs {
  std::string ckpt;
  std::string data;
  uint64_t id = 0;
  std::string mode = "M3";
  int64_t steps = kDefaultSamplingSteps;
  uint64_t seed = 0;
  GuidanceScales scales;
  std::string out_csv;
};

int run_sample(const SampleArgs& a) {
  InferenceMode mode = parse_mode(a.mode);
  Model model = load_model(a.ckpt);
  Corpus corpus = load_corpus(a.data);
  const Sample& s = find_sample(corpus, a.id);
  const Sample& ref = reference_for(corpus, s);

  DubRequest req;
  req.text = s.text;
  req.visual = &s.visual;
  req.reference = &ref.mel;
  req.t_mel = s.mel.frames();
  req.steps = a.steps;
  req.seed = a.seed;
  req.scales = a.scales;
  MelGrid out = dub(model, req, mode);

  std::cout << "sample " << s.id << " speaker " << s.speaker_id << " mode "
            << mode.name << ": " << out.bins() << " x " << out.frames()
            << "\n";
  std::cout << "sync_corr " << sync_correlation(out, s.visual) << "\n";
  std::cout << "spk_sim "
            << speaker_similarity(out, ref.mel, model.speaker, model.params)
            << "\n";
  std::cout << "recon_mse " << mel_mse(out, s.mel) << "\n";
  std::cout << "prosody_corr " << prosody_correlation(out, s.latent_prosody)
            << "\n";
  if (!a.out_csv.empty()) {
    write_text_file(a.out_csv, mel_csv(out));
    std::cout << "wrote " << a.out_csv << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string split = "eval";
  std::string mode = "M3";
  int64_t steps = 8;
  uint64_t seed = 0;
  GuidanceScales scales;
  std::string out;
};

int run_eval(const EvalArgs& a) {
  InferenceMode mode = parse_mode(a.mode);
  Split split = parse_split(a.split);
  Model model = load_model(a.ckpt);
  Corpus corpus = load_corpus(a.data);
  EvalReport report =
      evaluate_split(model, corpus, split, mode, a.scales, a.steps, a.seed);
  report.checkpoint = a.ckpt;
  report.checkpoint_crc = file_crc32(a.ckpt);
  std::string text = report.to_text();
  std::cout << text;
  if (!a.out.empty()) write_text_file(a.out, text);
  return 0;
}

struct AblateArgs {
  std::string ckpt;
  std::string data;
  std::string split = "eval";
  std::string mode = "M3";
  int64_t steps = 8;
  uint64_t seed = 0;
  std::string scales = "0,0,0.8;0.5,0.5,0.8;1,1,0.8";
  std::string out;
  std::string csv;
};

int run_ablate(const AblateArgs& a) {
  InferenceMode mode = parse_mode(a.mode);
  Split split = parse_split(a.split);
  std::vector<GuidanceScales> grid = parse_scale_list(a.scales);
  Model model = load_model(a.ckpt);
  Corpus corpus = load_corpus(a.data);
  std::vector<AblationRow> rows =
      ablate_guidance(model, corpus, split, mode, grid, a.steps, a.seed);
  std::string text = ablation_report(rows);
  std::cout << text;
  if (!a.out.empty()) write_text_file(a.out, text);
  if (!a.csv.empty()) write_text_file(a.csv, ablation_csv(rows));
  return 0;
}

void add_scale_options(CLI::App* cmd, GuidanceScales* scales) {
  cmd->add_option("--s-face", scales->face, "Face guidance scale");
  cmd->add_option("--s-lip", scales->lip, "Lip guidance scale");
  cmd->add_option("--s-text", scales->text, "Text guidance scale");
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Masked flow-matching dubbing toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen-data", "Generate a synthetic corpus");
  cmd_gen->add_option("--out", gen.out, "Output corpus file")->required();
  cmd_gen->add_option("--speakers", gen.cfg.speakers, "Speaker count");
  cmd_gen->add_option("--per-speaker", gen.cfg.samples_per_speaker,
                      "Samples per speaker");
  cmd_gen->add_option("--min-dur", gen.cfg.min_duration_s, "Shortest clip, seconds");
  cmd_gen->add_option("--max-dur", gen.cfg.max_duration_s, "Longest clip, seconds");
  cmd_gen->add_option("--tokens-per-second", gen.cfg.tokens_per_second,
                      "Text rate");
  cmd_gen->add_option("--noise", gen.cfg.noise_std, "Observation noise std");
  cmd_gen->add_option("--seed", gen.seed, "Corpus seed");

  TrainArgs tr;
  CLI::App* cmd_train = app.add_subcommand("train", "Train a model");
  cmd_train->add_option("--data", tr.data, "Corpus file")->required();
  cmd_train->add_option("--out", tr.out_dir, "Output directory")->required();
  cmd_train->add_option("--steps", tr.cfg.steps, "Optimizer steps");
  cmd_train->add_option("--batch", tr.cfg.batch_size, "Items per step");
  cmd_train->add_option("--lr", tr.cfg.learning_rate, "Learning rate");
  cmd_train->add_option("--seed", tr.cfg.seed, "Training stream seed");
  cmd_train->add_option("--model-seed", tr.model_seed, "Weight init seed");
  cmd_train->add_option("--checkpoint-every", tr.cfg.checkpoint_every,
                        "Checkpoint interval, steps");
  cmd_train->add_option("--p-speaker-embed", tr.cfg.p_speaker_embed,
                        "Probability the speaker enters as an embedding");
  cmd_train->add_option("--p-drop-text", tr.cfg.p_drop_text,
                        "Text drop probability");
  cmd_train->add_option("--p-drop-face", tr.cfg.p_drop_face,
                        "Face drop probability");
  cmd_train->add_option("--p-drop-lip", tr.cfg.p_drop_lip,
                        "Lip drop probability");

  SampleArgs sa;
  CLI::App* cmd_sample = app.add_subcommand("sample", "Dub one corpus sample");
  cmd_sample->add_option("--ckpt", sa.ckpt, "Checkpoint file")->required();
  cmd_sample->add_option("--data", sa.data, "Corpus file")->required();
  cmd_sample->add_option("--id", sa.id, "Sample id")->required();
  cmd_sample->add_option("--mode", sa.mode, "Inference mode M1..M5");
  cmd_sample->add_option("--steps", sa.steps, "Integration steps");
  cmd_sample->add_option("--seed", sa.seed, "Sampling seed");
  add_scale_options(cmd_sample, &sa.scales);
  cmd_sample->add_option("--out", sa.out_csv, "Write the mel as CSV");

  EvalArgs ev;
  CLI::App* cmd_eval = app.add_subcommand("eval", "Score a split");
  cmd_eval->add_option("--ckpt", ev.ckpt, "Checkpoint file")->required();
  cmd_eval->add_option("--data", ev.data, "Corpus file")->required();
  cmd_eval->add_option("--split", ev.split, "train, eval or all");
  cmd_eval->add_option("--mode", ev.mode, "Inference mode M1..M5");
  cmd_eval->add_option("--steps", ev.steps, "Integration steps");
  cmd_eval->add_option("--seed", ev.seed, "Evaluation seed");
  add_scale_options(cmd_eval, &ev.scales);
  cmd_eval->add_option("--out", ev.out, "Write the report here too");

  AblateArgs ab;
  CLI::App* cmd_ablate = app.add_subcommand("ablate", "Sweep guidance scales");
  cmd_ablate->add_option("--ckpt", ab.ckpt, "Checkpoint file")->required();
  cmd_ablate->add_option("--data", ab.data, "Corpus file")->required();
  cmd_ablate->add_option("--split", ab.split, "train, eval or all");
  cmd_ablate->add_option("--mode", ab.mode, "Inference mode M1..M5");
  cmd_ablate->add_option("--steps", ab.steps, "Integration steps");
  cmd_ablate->add_option("--seed", ab.seed, "Root seed");
  cmd_ablate->add_option("--scales", ab.scales,
                         "Scale grid, face,lip,text triples joined by ;");
  cmd_ablate->add_option("--out", ab.out, "Write the ranked report here too");
  cmd_ablate->add_option("--csv", ab.csv, "Write per-row metrics as CSV");

  CLI::App* cmd_grad =
      app.add_subcommand("grad-check", "Audit gradients against finite differences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_train->parsed()) return run_train(tr);
    if (cmd_sample->parsed()) return run_sample(sa);
    if (cmd_eval->parsed()) return run_eval(ev);
    if (cmd_ablate->parsed()) return run_ablate(ab);
    if (cmd_grad->parsed()) return run_grad_check_suite(std::cout) ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dubkit
