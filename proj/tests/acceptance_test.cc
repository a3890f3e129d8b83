// Copyright (c) 2026 The hprm Authors
//
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

// Runs the release gates end to end and prints one PASS/FAIL line per gate.
// The exit status is 0 only when every gate passes.

#include <glog/logging.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "gradient_check.h"
#include "hprm/corpus.h"
#include "hprm/evaluation.h"
#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/metrics.h"
#include "hprm/retriever.h"
#include "hprm/scorer.h"
#include "hprm/scorer_model.h"
#include "hprm/similarity.h"
#include "hprm/text_normalizer.h"
#include "hprm/trainer.h"

namespace hprm {
namespace {

struct Gate {
  int id;
  std::string name;
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

void Report(const Gate& g) {
  std::printf("%s [%d] %s: %s\n", g.pass ? "PASS" : "FAIL", g.id, g.name.c_str(),
              g.detail.c_str());
  std::fflush(stdout);
}

const Lexicon& Demo() {
  static const Lexicon lex = Lexicon::Load(HPRM_DATA_DIR "/demo_lexicon.tsv");
  return lex;
}

const PhonemeVocab& Vocab() {
  static const PhonemeVocab v = BuildVocab(Demo());
  return v;
}

Gate GradientGate() {
  Gate g{1, "analytic gradients match finite differences"};
  double worst = 0;
  int checked = 0, failures = 0, significant = 0, silent = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    testing::GradientCheckResult r = testing::CheckGradients(seed);
    checked += r.checked;
    failures += r.failures;
    significant += r.significant;
    silent += static_cast<int>(r.silent_tensors.size());
    worst = std::max(worst, r.worst_error);
  }
  g.pass = failures == 0 && checked > 0 && silent == 0;
  g.detail = "20 instances, " + std::to_string(checked) + " coordinates (" +
             std::to_string(significant) + " above the floor), " +
             std::to_string(failures) + " failures, " + std::to_string(silent) +
             " untested tensors, worst " + Fmt("%.2e", worst);
  return g;
}

Gate MerGate() {
  Gate g{2, "MER matches the brute-force oracle"};
  std::ifstream in(HPRM_TEST_DIR "/data/mer_oracle.tsv");
  int rows = 0, bad = 0;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, '\t');) f.push_back(x);
    if (f.size() != 4) continue;
    ++rows;
    const double want = std::stod(f[2]) / std::max(1, std::stoi(f[3]));
    if (Mer(f[0], f[1]) != want) ++bad;
  }
  const bool examples = Mer("我爱北京", "我爱南京") == 0.25 &&
                        Mer("我用whisper识别", "我用wispel识别") == 0.2;
  g.pass = rows >= 100 && bad == 0 && examples;
  g.detail = std::to_string(rows) + " oracle pairs, " + std::to_string(bad) +
             " mismatches, worked examples " + (examples ? "exact" : "wrong");
  return g;
}

Gate DeterminismGate() {
  Gate g{3, "deterministic training and retrieval"};
  SyntheticCorpusOptions o;
  o.num_records = 50;
  o.num_hotwords = 20;
  o.bank_size = 40;
  o.seed = 5;
  SyntheticCorpus c = GenerateSyntheticCorpus(Demo(), o);
  HotwordBank bank = BuildBank(c.bank, Demo(), Vocab());
  TrainConfig tc;
  tc.epochs = 6;
  tc.seed = 5;
  tc.threads = 1;
  TrainResult a = Train(c.records, bank, Vocab(), Demo(), tc);
  tc.threads = 8;
  TrainResult b = Train(c.records, bank, Vocab(), Demo(), tc);
  const bool same_model = SaveModel(a.model) == SaveModel(b.model);
  Retriever r1(a.model, Vocab(), bank, Demo(), 1);
  Retriever r8(a.model, Vocab(), bank, Demo(), 8);
  bool same_rank = true;
  for (const CorpusRecord& rec : c.records) {
    RetrievalResult x = r1.TopN(*rec.hypothesis, 40), y = r8.TopN(*rec.hypothesis, 40);
    if (x.ranked.size() != y.ranked.size()) same_rank = false;
    for (size_t i = 0; same_rank && i < x.ranked.size(); ++i) {
      same_rank = x.ranked[i].hotword_id == y.ranked[i].hotword_id &&
                  x.ranked[i].score == y.ranked[i].score;
    }
  }
  g.pass = same_model && same_rank;
  g.detail = std::string("model files ") + (same_model ? "identical" : "differ") +
             ", retrieval 1 vs 8 threads " + (same_rank ? "identical" : "differs");
  return g;
}

Gate PromptGate() {
  Gate g{9, "prompt templates byte-exact"};
  std::vector<std::string> e = {"实体1", "实体2", "实体3"};
  const std::string whisper = "今天演讲的主题是这个呃，实体1、实体2、实体3。好，那我就继续讲。";
  const std::string instruct =
      "Audio1 <|BOS|><|AUDIO|><|EOS|>请对上述音频进行中文语音识别，"
      "重点关注热词列表[实体1, 实体2, 实体3]，没有发现热词请直接输出完整的"
      "音频语音识别结果。请严格按照以下格式输出：{“音频内容”: 语音识别结果}";
  const bool w = FormatPrompt(e, PromptStyle::kWhisper) == whisper;
  const bool i = FormatPrompt(e, PromptStyle::kInstruct) == instruct;
  g.pass = w && i;
  g.detail = std::string("whisper ") + (w ? "exact" : "differs") + ", instruct " +
             (i ? "exact" : "differs");
  return g;
}

// Per-seed outcome of the full-size run.
struct SeedRun {
  uint64_t seed = 0;
  double auc = 0;
  double prrr10 = 0;
  double cnn_r1 = 0;
  double base_r1 = 0;
  std::vector<ScalingPoint> scaling;
  double contrast = 0;
  int contrast_pairs = 0;
  bool exact_diagonal = true;
  int nesting_checks = 0;
  int nesting_violations = 0;
  double minutes = 0;
};

void CheckNested(const std::vector<double>& values, SeedRun* run) {
  ++run->nesting_checks;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) {
      ++run->nesting_violations;
      return;
    }
  }
}

std::vector<double> Column(const SweepResult& s) {
  std::vector<double> out;
  for (const MetricsReport& r : s.rows) out.push_back(r.prrr.value());
  return out;
}

SeedRun RunSeed(uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  SeedRun run;
  run.seed = seed;
  SyntheticCorpusOptions o;
  o.extra_distractors = 3800;
  o.seed = seed;
  SyntheticCorpus corpus = GenerateSyntheticCorpus(Demo(), o);
  HotwordBank bank = BuildBank(corpus.bank, Demo(), Vocab());

  TrainConfig tc;
  tc.seed = seed;
  tc.threads = 0;
  TrainResult tr = Train(corpus.records, bank, Vocab(), Demo(), tc);
  const RoundReport& last = tr.report.rounds.back();
  run.auc = last.heldout_auc;
  run.prrr10 = last.prrr.at(10);
  for (const RoundReport& r : tr.report.rounds) {
    std::vector<double> col;
    for (const auto& [n, v] : r.prrr) col.push_back(v);  // map: ascending n
    CheckNested(col, &run);
  }

  const std::vector<EvalRecord> held = ToEvalRecords(tr.heldout);
  SweepOptions so;
  so.threads = 0;
  SweepResult cnn = EvaluateSweep(tr.model, Vocab(), bank, Demo(), held, so);
  SweepResult base = EvaluateBaselineSweep(bank, held, so);
  CheckNested(Column(cnn), &run);
  CheckNested(Column(base), &run);
  run.cnn_r1 = cnn.rows[0].prrr.value();
  run.base_r1 = base.rows[0].prrr.value();

  // Scaling: a 150-entry core holding every hotword of the chosen records.
  std::vector<EvalRecord> subset;
  std::vector<std::string> core;
  std::set<std::string> core_set;
  for (const EvalRecord& r : held) {
    std::set<std::string> add;
    for (const std::string& h : r.hotwords) {
      if (!core_set.count(h)) add.insert(h);
    }
    if (core_set.size() + add.size() > 150) continue;
    subset.push_back(r);
    for (const std::string& h : add) {
      core_set.insert(h);
      core.push_back(h);
    }
  }
  std::unordered_set<std::string> truth(corpus.ground_truth.begin(),
                                        corpus.ground_truth.end());
  for (const std::string& b : corpus.bank) {
    if (core.size() >= 150) break;
    if (!truth.count(b)) core.push_back(b);
  }
  const std::vector<int> sizes = {150, 500, 1000, 2000, 3800};
  run.scaling = ScalingCurve(tr.model, Vocab(), Demo(), core, corpus.extra_distractors,
                             sizes, subset, 50, seed, 0);

  // Heatmaps for the first 50 held-out positives.
  double sum = 0;
  for (const CorpusRecord& r : tr.heldout) {
    if (run.contrast_pairs == 50) break;
    const int id = bank.FindId(r.hotwords[0]);
    std::vector<int> text;
    for (const Phoneme& p : ToPhonemes(*r.hypothesis, Demo()).phonemes) {
      text.push_back(Vocab().Id(p.symbol));
    }
    const std::vector<int>& hw = bank.ById(id).phoneme_ids;
    SimilarityCanvas c = PairCanvas(tr.model, hw, text);
    sum += MeasureDiagonalContrast(c).contrast();
    ++run.contrast_pairs;
    SimilarityCanvas self = PairCanvas(tr.model, hw, hw);
    for (int i = 0; i < self.valid_rows; ++i) {
      if (self.at(i, i) != 1.0f) run.exact_diagonal = false;
    }
  }
  run.contrast = run.contrast_pairs ? sum / run.contrast_pairs : 0;
  run.minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60;
  return run;
}

}  // namespace
}  // namespace hprm

int main(int argc, char** argv) {
  using namespace hprm;
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;
  FLAGS_minloglevel = 1;
  (void)argc;

  std::vector<Gate> gates;
  auto run = [&](Gate g) {
    Report(g);
    gates.push_back(std::move(g));
  };
  run(GradientGate());
  run(MerGate());
  run(DeterminismGate());

  std::vector<SeedRun> seeds;
  for (uint64_t s : {1, 2, 3}) {
    seeds.push_back(RunSeed(s));
    const SeedRun& r = seeds.back();
    std::printf("  seed %llu: %.1f min, AUC %.4f, PrRR@10 %.1f%%, R@1 %.1f%% vs baseline "
                "%.1f%%, contrast %.3f, PrRR@50 %.1f%% -> %.1f%%\n",
                static_cast<unsigned long long>(r.seed), r.minutes, r.auc,
                100 * r.prrr10, 100 * r.cnn_r1, 100 * r.base_r1, r.contrast,
                100 * r.scaling.front().prrr.value(), 100 * r.scaling.back().prrr.value());
    std::fflush(stdout);
  }

  Gate nest{4, "PrRR nested in N on every evaluation"};
  int checks = 0, violations = 0;
  for (const SeedRun& r : seeds) {
    checks += r.nesting_checks;
    violations += r.nesting_violations;
  }
  nest.pass = checks > 0 && violations == 0;
  nest.detail = std::to_string(checks) + " sweeps, " + std::to_string(violations) +
                " violations";
  run(nest);

  Gate quality{5, "training quality on the standard corpus"};
  for (const SeedRun& r : seeds) {
    quality.pass = quality.pass && r.auc >= 0.95 && r.prrr10 >= 0.90;
    quality.detail += "seed " + std::to_string(r.seed) + " AUC " + Fmt("%.4f", r.auc) +
                      " PrRR@10 " + Fmt("%.1f%%", 100 * r.prrr10) + "; ";
  }
  run(quality);

  Gate scaling{6, "PrRR@50 robust to bank growth 150 -> 3800"};
  double drop = 0;
  bool monotone = true;
  for (const SeedRun& r : seeds) {
    drop += 100 * (r.scaling.front().prrr.value() - r.scaling.back().prrr.value());
    for (size_t i = 1; i < r.scaling.size(); ++i) {
      if (100 * (r.scaling[i].prrr.value() - r.scaling[i - 1].prrr.value()) > 1.0) {
        monotone = false;
      }
    }
  }
  drop /= seeds.size();
  scaling.pass = drop <= 5.0 && monotone;
  scaling.detail = "mean drop " + Fmt("%.2f", drop) + " points, curve " +
                   (monotone ? "non-increasing" : "rises by more than 1 point");
  run(scaling);

  Gate baseline{7, "CNN R@1 beats the edit-distance baseline by 10 points"};
  for (const SeedRun& r : seeds) {
    const double gap = 100 * (r.cnn_r1 - r.base_r1);
    baseline.pass = baseline.pass && gap >= 10.0;
    baseline.detail += "seed " + std::to_string(r.seed) + " gap " + Fmt("%.1f", gap) + "; ";
  }
  run(baseline);

  Gate heat{8, "heatmap diagonal contrast"};
  for (const SeedRun& r : seeds) {
    heat.pass = heat.pass && r.contrast_pairs == 50 && r.contrast >= 0.3 && r.exact_diagonal;
    heat.detail += "seed " + std::to_string(r.seed) + " " + Fmt("%.3f", r.contrast) + "; ";
  }
  bool exact = true;
  for (const SeedRun& r : seeds) exact = exact && r.exact_diagonal;
  heat.detail += std::string("exact-match diagonal ") + (exact ? "1.0" : "not 1.0");
  run(heat);

  run(PromptGate());

  int failed = 0;
  for (const Gate& g : gates) failed += !g.pass;
  std::printf("%d/%zu passed\n", static_cast<int>(gates.size()) - failed, gates.size());
  return failed == 0 ? 0 : 1;
}
