// tests/test_evalcli.cc

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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dubkit/corpus.h"
#include "dubkit/model.h"
#include "dubkit/report.h"

namespace fs = std::filesystem;
using namespace dubkit;

TEST_CASE("pearson correlation oracle") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  std::vector<double> doubled = {2.0, 4.0, 6.0};
  std::vector<double> reversed = {3.0, 2.0, 1.0};
  std::vector<double> flat = {5.0, 5.0, 5.0};
  std::vector<double> noisy = {4.0, 5.0, 7.0};
  CHECK(pearson(a, doubled) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(a, reversed) == doctest::Approx(-1.0).epsilon(1e-12));

  bool degenerate = false;
  CHECK(pearson(a, flat, &degenerate) == 0.0);
  CHECK(degenerate);
  degenerate = false;
  CHECK(pearson(a, noisy, &degenerate) > 0.0);
  CHECK_FALSE(degenerate);

  std::vector<double> shorter = {1.0, 2.0};
  std::vector<double> one = {1.0};
  CHECK_THROWS_AS(pearson(a, shorter), std::invalid_argument);
  CHECK_THROWS_AS(pearson(one, one), std::invalid_argument);
}

TEST_CASE("envelope, mse and cosine oracles") {
  MelGrid mel(Grid::matrix({{1.0, 2.0, 3.0}, {3.0, 4.0, 5.0}}));
  std::vector<double> env = mel_envelope(mel);
  REQUIRE(env.size() == 3);
  CHECK(env[0] == 2.0);
  CHECK(env[1] == 3.0);
  CHECK(env[2] == 4.0);
  CHECK_THROWS_AS(mel_envelope(MelGrid{}), std::invalid_argument);

  MelGrid other(Grid::matrix({{2.0, 2.0, 3.0}, {3.0, 4.0, 8.0}}));
  // Differences 1 and 3 over six cells.
  CHECK(mel_mse(mel, other) == doctest::Approx(10.0 / 6.0).epsilon(1e-15));
  CHECK(mel_mse(mel, mel) == 0.0);
  MelGrid wide(Grid::zeros({2, 4}));
  CHECK_THROWS_AS(mel_mse(mel, wide), std::invalid_argument);

  Grid x = Grid::row({1.0, 2.0, 2.0});
  CHECK(cosine_similarity(x, scale(x, 3.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(x, scale(x, -1.0)) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cosine_similarity(Grid::row({1.0, 0.0}), Grid::row({0.0, 1.0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(cosine_similarity(x, Grid::row({1.0})),
                  std::invalid_argument);
}

TEST_CASE("sync correlation against a constructed pair") {
  // 8 video frames is 0.32 s, exactly 30 mel frames.
  const int64_t t_v = 8;
  const int64_t t_mel = 30;
  MelGrid mel(Grid::zeros({kMelBins, t_mel}));
  for (int64_t d = 0; d < kMelBins; ++d)
    for (int64_t t = 0; t < t_mel; ++t)
      mel.values.at(d, t) = static_cast<double>(t);

  VisualTrack visual;
  visual.face = Grid::zeros({kFaceChannels, t_v});
  visual.lip = Grid::zeros({kLipChannels, t_v});
  for (int64_t t = 0; t < t_v; ++t)
    visual.lip.at(0, t) = static_cast<double>(t);

  // A linear envelope resamples to a linear series, so the correlation
  // against the linear lip channel is exactly 1.
  CHECK(sync_correlation(mel, visual) == doctest::Approx(1.0).epsilon(1e-12));

  for (int64_t t = 0; t < t_v; ++t) visual.lip.at(0, t) = 2.5;
  bool degenerate = false;
  CHECK(sync_correlation(mel, visual, &degenerate) == 0.0);
  CHECK(degenerate);

  MelGrid long_mel(Grid::zeros({kMelBins, 2 * t_mel}));
  CHECK_THROWS_AS(sync_correlation(long_mel, visual), std::invalid_argument);
}

TEST_CASE("prosody correlation oracle") {
  MelGrid mel(Grid::matrix({{0.0, 1.0, 4.0, 2.0}, {2.0, 3.0, 0.0, 6.0}}));
  std::vector<double> contour = mel_envelope(mel);
  CHECK(prosody_correlation(mel, contour) ==
        doctest::Approx(1.0).epsilon(1e-12));
  contour.pop_back();
  CHECK_THROWS_AS(prosody_correlation(mel, contour), std::invalid_argument);
}

TEST_CASE("speaker similarity is reflexive") {
  Model model(ModelConfig::defaults(), 3);
  Rng rng(8);
  MelGrid a(Grid::randn({kMelBins, 40}, rng));
  MelGrid b(Grid::randn({kMelBins, 55}, rng));

  CHECK(speaker_similarity(a, a, model.speaker, model.params) ==
        doctest::Approx(1.0).epsilon(1e-12));
  double cross = speaker_similarity(a, b, model.speaker, model.params);
  CHECK(cross == speaker_similarity(b, a, model.speaker, model.params));
  CHECK(cross < 1.0);
  CHECK(cross >= -1.0);
}

TEST_CASE("report aggregation and canonical text") {
  EvalReport r;
  r.mode = "M3";
  r.split = "eval";
  r.steps = 8;
  r.seed = 5;
  r.checkpoint = "run/model.svck";
  r.checkpoint_crc = 0xDEADBEEF;
  r.per_sample.push_back({8, 0, 0.5, 0.9, 1.5, 0.25});
  r.per_sample.push_back({9, 1, 0.7, 0.7, 0.5, 0.75});
  r.compute_aggregates();
  CHECK(r.mean_sync_corr == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(r.mean_spk_sim == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r.mean_recon_mse == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.mean_prosody_corr == doctest::Approx(0.5).epsilon(1e-15));

  std::string text = r.to_text();
  CHECK(text == r.to_text());
  CHECK(text.find("mode: M3") != std::string::npos);
  CHECK(text.find("deadbeef") != std::string::npos);

  EvalReport empty;
  CHECK_THROWS_AS(empty.compute_aggregates(), std::invalid_argument);
}

TEST_CASE("ablation row seeds and CSV layout") {
  GuidanceScales zero{0.0, 0.0, 0.8};
  GuidanceScales half{0.5, 0.5, 0.8};
  GuidanceScales one{1.0, 1.0, 0.8};

  uint64_t s0 = ablation_row_seed(9, zero);
  CHECK(s0 == ablation_row_seed(9, zero));
  CHECK(s0 != ablation_row_seed(9, half));
  CHECK(s0 != ablation_row_seed(9, one));
  CHECK(ablation_row_seed(9, half) != ablation_row_seed(9, one));
  CHECK(s0 != ablation_row_seed(10, zero));

  std::vector<AblationRow> rows(2);
  rows[0].scales = half;
  rows[0].report.per_sample.push_back({0, 0, 0.5, 0.5, 0.5, 0.5});
  rows[0].report.compute_aggregates();
  rows[1].scales = one;
  rows[1].report.per_sample.push_back({0, 0, 0.25, 0.5, 0.5, 0.5});
  rows[1].report.compute_aggregates();

  std::string csv = ablation_csv(rows);
  std::istringstream is(csv);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line ==
        "scale_face,scale_lip,scale_text,mean_sync_corr,mean_spk_sim,"
        "mean_recon_mse,mean_prosody_corr");
  int data_lines = 0;
  while (std::getline(is, line)) ++data_lines;
  CHECK(data_lines == 2);

  // The ranked table puts the better sync row first regardless of order.
  std::string table = ablation_report(rows);
  CHECK(table.find("0.5") < table.find("0.25"));
}

namespace {

std::string cli_bin() {
  const char* bin = std::getenv("DUBKIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "DUBKIT_BIN must point at the CLI binary");
  return bin;
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = cli_bin() + " " + args + " > " + log.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing file " + p.string()));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path dir;
  explicit TempDir(const std::string& name)
      : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  fs::path operator/(const std::string& leaf) const { return dir / leaf; }
};

}  // namespace

TEST_CASE("command line pipeline") {
  TempDir d("dubkit_cli_pipeline");
  fs::path log = d / "log.txt";
  std::string corpus = (d / "corpus.svlb").string();

  std::string gen_args =
      " --speakers 1 --per-speaker 12 --min-dur 0.8 --max-dur 1.0 --seed 5";
  CHECK(run_cli("gen-data --out " + corpus + gen_args, log) == 0);
  std::string corpus2 = (d / "corpus2.svlb").string();
  CHECK(run_cli("gen-data --out " + corpus2 + gen_args, log) == 0);
  CHECK(read_file(corpus) == read_file(corpus2));

  std::string run_dir = (d / "run").string();
  CHECK(run_cli("train --data " + corpus + " --out " + run_dir +
                    " --steps 2 --batch 1 --seed 3 --checkpoint-every 2",
                log) == 0);
  std::string model = run_dir + "/model.svck";
  CHECK(fs::exists(model));
  CHECK(fs::exists(run_dir + "/ckpt_000002.svck"));
  std::string loss = read_file(run_dir + "/loss.csv");
  CHECK(loss.rfind("step,loss\n", 0) == 0);
  CHECK(std::count(loss.begin(), loss.end(), '\n') == 3);

  std::string eval_args = "eval --ckpt " + model + " --data " + corpus +
                          " --mode M1 --steps 2 --seed 7 --out ";
  std::string r1 = (d / "report1.txt").string();
  std::string r2 = (d / "report2.txt").string();
  CHECK(run_cli(eval_args + r1, log) == 0);
  CHECK(run_cli(eval_args + r2, log) == 0);
  std::string report = read_file(r1);
  CHECK(report == read_file(r2));
  CHECK(report.find("mode: M1") != std::string::npos);
  CHECK(report.find("split: eval") != std::string::npos);
  CHECK(report.find(model) != std::string::npos);

  std::string mel_csv = (d / "mel.csv").string();
  CHECK(run_cli("sample --ckpt " + model + " --data " + corpus +
                    " --id 8 --mode M1 --steps 2 --out " + mel_csv,
                log) == 0);
  std::string mel = read_file(mel_csv);
  CHECK(std::count(mel.begin(), mel.end(), '\n') == kMelBins);
  CHECK(read_file(log).find("sync_corr") != std::string::npos);

  std::string ab_report = (d / "ablate.txt").string();
  std::string ab_csv = (d / "ablate.csv").string();
  CHECK(run_cli("ablate --ckpt " + model + " --data " + corpus +
                    " --mode M1 --steps 1 --scales '0,0,1;0,0,0.5' --out " +
                    ab_report + " --csv " + ab_csv,
                log) == 0);
  CHECK(read_file(ab_report).find("rank") != std::string::npos);
  std::string csv = read_file(ab_csv);
  CHECK(csv.rfind("scale_face,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("command line error paths") {
  TempDir d("dubkit_cli_errors");
  fs::path log = d / "log.txt";
  std::string corpus = (d / "corpus.svlb").string();
  CHECK(run_cli("gen-data --out " + corpus +
                    " --speakers 1 --per-speaker 2 --max-dur 1.0 --seed 1",
                log) == 0);
  std::string garbage = (d / "garbage.svck").string();
  { std::ofstream(garbage) << "not a checkpoint"; }

  SUBCASE("usage errors exit with 2") {
    CHECK(run_cli("train", log) == 2);
    CHECK(run_cli("no-such-command", log) == 2);
    CHECK(run_cli("eval --ckpt " + garbage + " --data " + corpus +
                      " --split bogus",
                  log) == 2);
    CHECK(run_cli("ablate --ckpt " + garbage + " --data " + corpus +
                      " --scales 'x,y'",
                  log) == 2);
    CHECK(run_cli("sample --ckpt " + garbage + " --data " + corpus +
                      " --id 0 --mode M9",
                  log) == 2);
    CHECK(run_cli("", log) == 2);
  }

  SUBCASE("runtime errors exit with 1") {
    CHECK(run_cli("train --data " + (d / "absent.svlb").string() + " --out " +
                      (d / "r").string() + " --steps 1",
                  log) == 1);
    CHECK(run_cli("sample --ckpt " + garbage + " --data " + corpus +
                      " --id 0",
                  log) == 1);
    std::string err = read_file(log);
    CHECK(err.find("error") != std::string::npos);
  }

  SUBCASE("help exits cleanly") {
    CHECK(run_cli("--help", log) == 0);
    CHECK(read_file(log).find("gen-data") != std::string::npos);
  }
}

TEST_CASE("gradient audit subcommand") {
  TempDir d("dubkit_cli_grad");
  fs::path log = d / "log.txt";
  CHECK(run_cli("grad-check", log) == 0);
  CHECK(read_file(log).find("gradient audit passed") != std::string::npos);
}
