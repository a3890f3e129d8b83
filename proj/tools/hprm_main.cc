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

#include <glog/logging.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hprm/binary_io.h"
#include "hprm/corpus.h"
#include "hprm/error.h"
#include "hprm/evaluation.h"
#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/retriever.h"
#include "hprm/scorer.h"
#include "hprm/scorer_model.h"
#include "hprm/similarity.h"
#include "hprm/trainer.h"

namespace {

using hprm::ErrorCode;
using hprm::HprmError;

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string lexicon;
  int threads = 0;
  bool deterministic = false;
  bool quiet = false;
};

void AddCommon(CLI::App* cmd, Common* c) {
  cmd->add_option("--lexicon", c->lexicon,
                  "Pronunciation lexicon TSV (default: $HPRM_LEXICON)")
      ->envname("HPRM_LEXICON")
      ->check(CLI::ExistingFile);
  cmd->add_option("--threads", c->threads, "Worker threads, 0 for all cores")
      ->capture_default_str();
  cmd->add_flag("--deterministic", c->deterministic,
                "Ordered reduction everywhere (always on; accepted for scripts)");
  cmd->add_flag("-q,--quiet", c->quiet, "Only log warnings and errors");
}

hprm::Lexicon LoadLexicon(const Common& c) {
  if (c.lexicon.empty()) {
    throw HprmError(ErrorCode::kBadInput, "no lexicon: pass --lexicon or set HPRM_LEXICON");
  }
  return hprm::Lexicon::Load(c.lexicon);
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    hprm::WriteFileAtomic(path, text);
  }
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// bank ---------------------------------------------------------------------

struct BankArgs {
  Common common;
  std::string hotwords;
  std::string out;
  int max_phonemes = hprm::kDefaultMaxHotwordPhonemes;
};

int RunBank(const BankArgs& a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::PhonemeVocab vocab = hprm::BuildVocab(lexicon);
  std::vector<std::string> list = hprm::ReadHotwordList(a.hotwords);
  hprm::HotwordBank bank = hprm::BuildBank(list, lexicon, vocab, a.max_phonemes);
  hprm::SaveBankFile(bank, a.out);
  LOG(INFO) << "bank of " << bank.size() << " entries written to " << a.out;
  return kExitOk;
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
  Common common;
  bool synthetic = false;
  std::string corpus;
  std::string out;
  std::string bank_list;
  std::string ground_truth_list;
  std::string distractor_list;
  hprm::SyntheticCorpusOptions gen;
  double focus_prob = -1.0;
  double homophone_prob = hprm::SimulatorOptions{}.homophone_prob;
};

int RunSimulate(SimulateArgs a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::SimulatorOptions sim = a.gen.simulator;
  sim.homophone_prob = a.homophone_prob;
  if (a.synthetic) {
    if (a.focus_prob >= 0) sim.focus_prob = a.focus_prob;
    a.gen.simulator = sim;
    hprm::SyntheticCorpus corpus = hprm::GenerateSyntheticCorpus(lexicon, a.gen);
    hprm::WriteCorpus(a.out, corpus.records);
    if (!a.bank_list.empty()) WriteText(a.bank_list, JoinLines(corpus.bank));
    if (!a.ground_truth_list.empty()) {
      WriteText(a.ground_truth_list, JoinLines(corpus.ground_truth));
    }
    if (!a.distractor_list.empty()) {
      WriteText(a.distractor_list, JoinLines(corpus.extra_distractors));
    }
    LOG(INFO) << corpus.records.size() << " records, " << corpus.bank.size()
              << " bank hotwords, " << corpus.extra_distractors.size()
              << " extra distractors";
    return kExitOk;
  }
  if (a.corpus.empty()) {
    throw HprmError(ErrorCode::kBadInput, "simulate needs --corpus or --synthetic");
  }
  sim.focus_prob = a.focus_prob >= 0 ? a.focus_prob : 0.0;
  std::vector<hprm::CorpusRecord> records = hprm::ReadCorpus(a.corpus);
  hprm::SimulateCorpus(&records, lexicon, a.gen.mer_lo, a.gen.mer_hi, a.gen.seed, sim);
  hprm::WriteCorpus(a.out, records);
  return kExitOk;
}

// train --------------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string corpus;
  std::string bank;
  std::string out;
  std::string report;
  std::string heldout;
  hprm::TrainConfig config;
};

int RunTrain(TrainArgs a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::PhonemeVocab vocab = hprm::BuildVocab(lexicon);
  hprm::HotwordBank bank = hprm::LoadBankFile(a.bank, vocab);
  std::vector<hprm::CorpusRecord> corpus = hprm::ReadCorpus(a.corpus);
  a.config.threads = a.common.threads;
  a.config.deterministic = true;
  hprm::TrainResult result = hprm::Train(corpus, bank, vocab, lexicon, a.config);
  hprm::SaveModelFile(result.model, a.out);
  if (!a.report.empty()) WriteText(a.report, result.report.ToJson());
  if (!a.heldout.empty()) {
    hprm::WriteEvalSet(a.heldout, hprm::ToEvalRecords(result.heldout));
  }
  LOG(INFO) << "model written to " << a.out;
  return kExitOk;
}

// retrieve -----------------------------------------------------------------

struct RetrieveArgs {
  Common common;
  std::string model;
  std::string bank;
  std::string text;
  int n = 10;
  std::string emit_prompt;
  bool baseline = false;
};

int RunRetrieve(const RetrieveArgs& a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::PhonemeVocab vocab = hprm::BuildVocab(lexicon);
  hprm::HotwordBank bank = hprm::LoadBankFile(a.bank, vocab);
  hprm::RetrievalResult result;
  if (a.baseline) {
    result = hprm::RetrieveBaselineEdit(bank, a.text, a.n);
  } else {
    if (a.model.empty()) throw HprmError(ErrorCode::kBadInput, "--model is required");
    hprm::ScorerModel model = hprm::LoadModelFile(a.model, vocab.hash());
    result = hprm::RetrieveTopN(model, vocab, bank, lexicon, a.text, a.n,
                                a.common.threads);
  }
  if (result.empty_query) LOG(WARNING) << "transcript has no phonemes";
  std::string out;
  if (!a.emit_prompt.empty()) {
    hprm::PromptStyle style = a.emit_prompt == "whisper" ? hprm::PromptStyle::kWhisper
                                                         : hprm::PromptStyle::kInstruct;
    out = hprm::FormatPrompt(result, bank, style) + "\n";
  } else {
    for (size_t i = 0; i < result.ranked.size(); ++i) {
      const hprm::ScoredPair& sp = result.ranked[i];
      out += std::to_string(i + 1) + "\t" + Fixed(sp.score, 6) + "\t" +
             bank.ById(sp.hotword_id).surface + "\n";
    }
  }
  WriteText("", out);
  return kExitOk;
}

// evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  Common common;
  std::string model;
  std::string bank;
  std::string eval_set;
  std::vector<int> n_list = {1, 3, 10, 50};
  std::vector<int> scaling;
  std::string distractors;
  int scaling_n = 50;
  uint64_t seed = 1;
  std::string rescore = "none";
  bool baseline = false;
  std::string out;
  std::string scaling_out;
  std::string json;
  std::optional<double> require_prrr50;
};

int RunEvaluate(const EvaluateArgs& a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::PhonemeVocab vocab = hprm::BuildVocab(lexicon);
  hprm::HotwordBank bank = hprm::LoadBankFile(a.bank, vocab);
  std::vector<hprm::EvalRecord> records = hprm::ReadEvalSet(a.eval_set);
  if (records.empty()) throw HprmError(ErrorCode::kBadInput, "empty eval set");

  hprm::SweepOptions options;
  options.n_list = a.n_list;
  options.threads = a.common.threads;
  if (a.rescore == "phonetic") options.rescore = hprm::PhoneticRescorer(bank, lexicon);

  std::optional<hprm::ScorerModel> model;
  if (!a.baseline || !a.scaling.empty()) {
    if (a.model.empty()) throw HprmError(ErrorCode::kBadInput, "--model is required");
    model = hprm::LoadModelFile(a.model, vocab.hash());
  }
  hprm::SweepResult sweep =
      a.baseline ? hprm::EvaluateBaselineSweep(bank, records, options)
                 : hprm::EvaluateSweep(*model, vocab, bank, lexicon, records, options);
  WriteText(a.out, hprm::SweepTsv(sweep));
  if (!a.json.empty()) WriteText(a.json, hprm::SweepJson(sweep));

  if (!a.scaling.empty()) {
    if (a.distractors.empty()) {
      throw HprmError(ErrorCode::kBadInput, "--scaling needs --distractors");
    }
    std::vector<std::string> core;
    for (const hprm::HotwordEntry& e : bank.entries()) core.push_back(e.surface);
    std::vector<std::string> pool = hprm::ReadHotwordList(a.distractors);
    std::vector<hprm::ScalingPoint> curve =
        hprm::ScalingCurve(*model, vocab, lexicon, core, pool, a.scaling, records,
                           a.scaling_n, a.seed, a.common.threads);
    WriteText(a.scaling_out, hprm::ScalingTsv(curve, a.scaling_n));
  }

  if (a.require_prrr50) {
    const hprm::MetricsReport* row50 = nullptr;
    for (const hprm::MetricsReport& r : sweep.rows) {
      if (r.n == 50) row50 = &r;
    }
    if (row50 == nullptr) {
      throw HprmError(ErrorCode::kBadInput, "--require-prrr50 needs 50 in --n-list");
    }
    if (row50->prrr.value() < *a.require_prrr50) {
      std::cerr << "FAIL: PrRR@50 " << Fixed(row50->prrr.value(), 4) << " < "
                << Fixed(*a.require_prrr50, 4) << "\n";
      return kExitAcceptance;
    }
  }
  return kExitOk;
}

// heatmap ------------------------------------------------------------------

struct HeatmapArgs {
  Common common;
  std::string model;
  std::string hotword;
  std::string text;
  std::string out;
};

int RunHeatmap(const HeatmapArgs& a) {
  hprm::Lexicon lexicon = LoadLexicon(a.common);
  hprm::PhonemeVocab vocab = hprm::BuildVocab(lexicon);
  hprm::ScorerModel model = hprm::LoadModelFile(a.model, vocab.hash());
  std::vector<int> hw = vocab.Encode(hprm::ToPhonemes(a.hotword, lexicon));
  if (static_cast<int>(hw.size()) > model.config.canvas_rows) {
    hw.resize(model.config.canvas_rows);
  }
  std::vector<int> tx = vocab.Encode(hprm::ToPhonemes(a.text, lexicon));
  hprm::SimilarityCanvas canvas = hprm::PairCanvas(model, hw, tx);
  WriteText(a.out, hprm::HeatmapCsv(canvas));
  hprm::DiagonalContrast dc = hprm::MeasureDiagonalContrast(canvas);
  LOG(INFO) << "best offset " << dc.best_offset << ", band mean "
            << Fixed(dc.band_mean, 6) << ", off-band mean "
            << Fixed(dc.off_band_mean, 6) << ", contrast " << Fixed(dc.contrast(), 6);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  FLAGS_logtostderr = true;
  google::InitGoogleLogging(argv[0]);

  CLI::App app{"Hotword pre-retrieval: rank a hotword bank against ASR transcripts",
               "hprm"};
  app.require_subcommand(1);

  BankArgs bank;
  CLI::App* bank_cmd = app.add_subcommand("bank", "Build a hotword bank file");
  AddCommon(bank_cmd, &bank.common);
  bank_cmd->add_option("--hotwords", bank.hotwords, "Hotword list, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  bank_cmd->add_option("-o,--out", bank.out, "Output bank file")->required();
  bank_cmd->add_option("--max-phonemes", bank.max_phonemes,
                       "Truncate longer hotwords to this many phonemes")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Generate a synthetic corpus or simulate ASR errors on one");
  AddCommon(sim_cmd, &sim.common);
  sim_cmd->add_flag("--synthetic", sim.synthetic, "Generate a templated corpus");
  sim_cmd->add_option("--corpus", sim.corpus, "Input corpus JSONL to corrupt")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--out", sim.out, "Output corpus JSONL")->required();
  sim_cmd->add_option("--bank-list", sim.bank_list,
                      "Write the generated bank hotwords here");
  sim_cmd->add_option("--ground-truth-list", sim.ground_truth_list,
                      "Write the hotwords used by records here");
  sim_cmd->add_option("--distractor-list", sim.distractor_list,
                      "Write the extra distractors here");
  sim_cmd->add_option("--records", sim.gen.num_records, "Generated records")
      ->capture_default_str();
  sim_cmd->add_option("--hotword-count", sim.gen.num_hotwords,
                      "Ground-truth hotwords used by the records")
      ->capture_default_str();
  sim_cmd->add_option("--bank-size", sim.gen.bank_size,
                      "Bank size including distractors")
      ->capture_default_str();
  sim_cmd->add_option("--extra-distractors", sim.gen.extra_distractors,
                      "Further distractors outside the bank")
      ->capture_default_str();
  sim_cmd->add_option("--english-fraction", sim.gen.english_fraction,
                      "Share of English hotwords")
      ->capture_default_str();
  sim_cmd->add_option("--two-hotword-fraction", sim.gen.two_hotword_fraction,
                      "Share of records carrying two hotwords")
      ->capture_default_str();
  sim_cmd->add_option("--mer-lo", sim.gen.mer_lo, "Lower bound of the MER band")
      ->capture_default_str();
  sim_cmd->add_option("--mer-hi", sim.gen.mer_hi, "Upper bound of the MER band")
      ->capture_default_str();
  sim_cmd->add_option("--homophone-prob", sim.homophone_prob,
                      "Probability a substitution picks a homophone")
      ->capture_default_str();
  sim_cmd->add_option("--focus-prob", sim.focus_prob,
                      "Probability of corrupting hotword spans first "
                      "(default 0.7 with --synthetic, 0 otherwise)");
  sim_cmd->add_option("--seed", sim.gen.seed, "Random seed")->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the scorer with hard-sample mining");
  AddCommon(train_cmd, &train.common);
  train_cmd->add_option("--corpus", train.corpus, "Training corpus JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--bank", train.bank, "Bank file")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out", train.out, "Output model file")->required();
  train_cmd->add_option("--report", train.report, "Training report JSON");
  train_cmd->add_option("--heldout-out", train.heldout,
                        "Write the held-out split as an eval set");
  hprm::TrainConfig& tc = train.config;
  train_cmd->add_option("--epochs", tc.epochs, "Total epochs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", tc.lr, "AdamW learning rate")->capture_default_str();
  train_cmd->add_option("--batch-size", tc.batch_size, "Pairs per step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--mining-rounds", tc.mining_rounds,
                        "Training rounds; 1 disables mining and augmentation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--negatives", tc.negatives_per_positive,
                        "Random negatives per initial positive")
      ->capture_default_str();
  train_cmd->add_option("--augment", tc.augment_per_hotword,
                        "Augmented positives per hotword in the last round")
      ->capture_default_str();
  train_cmd->add_option("--train-fraction", tc.train_fraction,
                        "Share of records used for training")
      ->capture_default_str();
  train_cmd->add_option("--mer-lo", tc.mer_lo, "Lowest MER of initial positives")
      ->capture_default_str();
  train_cmd->add_option("--mer-hi", tc.mer_hi, "Highest MER of initial positives")
      ->capture_default_str();
  train_cmd->add_option("--weight-decay", tc.weight_decay, "AdamW weight decay")
      ->capture_default_str();
  train_cmd->add_option("--seed", tc.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--canvas-rows", tc.model.canvas_rows,
                        "Similarity canvas rows (hotword phonemes)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--canvas-cols", tc.model.canvas_cols,
                        "Similarity canvas columns (transcript phonemes)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--embed-dim", tc.model.embed_dim, "Phoneme embedding width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_flag("!--no-round-eval", tc.evaluate_rounds,
                      "Skip held-out evaluation after each round");

  RetrieveArgs ret;
  CLI::App* ret_cmd = app.add_subcommand("retrieve", "Rank the bank against one transcript");
  AddCommon(ret_cmd, &ret.common);
  ret_cmd->add_option("--model", ret.model, "Model file")->check(CLI::ExistingFile);
  ret_cmd->add_option("--bank", ret.bank, "Bank file")
      ->required()
      ->check(CLI::ExistingFile);
  ret_cmd->add_option("--text", ret.text, "ASR transcript")->required();
  ret_cmd->add_option("-n,--top", ret.n, "Candidates to return")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ret_cmd->add_option("--emit-prompt", ret.emit_prompt,
                      "Print a prompt instead of the table")
      ->check(CLI::IsMember({"whisper", "instruct"}));
  ret_cmd->add_flag("--baseline", ret.baseline, "Rank by text edit distance instead");

  EvaluateArgs ev;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "Top-N sweep and bank scaling curve");
  AddCommon(ev_cmd, &ev.common);
  ev_cmd->add_option("--model", ev.model, "Model file")->check(CLI::ExistingFile);
  ev_cmd->add_option("--bank", ev.bank, "Bank file")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--eval-set", ev.eval_set, "Eval set JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--n-list", ev.n_list, "Comma-separated top-N values")
      ->delimiter(',')
      ->capture_default_str();
  ev_cmd->add_option("--scaling", ev.scaling,
                     "Comma-separated bank sizes for the scaling curve")
      ->delimiter(',');
  ev_cmd->add_option("--distractors", ev.distractors,
                     "Distractor hotword list for --scaling")
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--scaling-n", ev.scaling_n, "Top-N used by the scaling curve")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ev_cmd->add_option("--seed", ev.seed, "Distractor sampling seed")
      ->capture_default_str();
  ev_cmd->add_option("--rescore", ev.rescore,
                     "Second pass for PRR/PF1/MER columns")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "phonetic"}));
  ev_cmd->add_flag("--baseline", ev.baseline, "Sweep the text edit-distance baseline");
  ev_cmd->add_option("-o,--out", ev.out, "Sweep TSV (default: stdout)");
  ev_cmd->add_option("--scaling-out", ev.scaling_out, "Scaling TSV (default: stdout)");
  ev_cmd->add_option("--json", ev.json, "Sweep summary JSON");
  ev_cmd->add_option("--require-prrr50", ev.require_prrr50,
                     "Exit 1 when PrRR@50 falls below this fraction");

  HeatmapArgs hm;
  CLI::App* hm_cmd = app.add_subcommand("heatmap", "Export a pair's similarity canvas as CSV");
  AddCommon(hm_cmd, &hm.common);
  hm_cmd->add_option("--model", hm.model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  hm_cmd->add_option("--hotword", hm.hotword, "Hotword")->required();
  hm_cmd->add_option("--text", hm.text, "Transcript")->required();
  hm_cmd->add_option("-o,--out", hm.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (const Common* c : {&bank.common, &sim.common, &train.common, &ret.common,
                          &ev.common, &hm.common}) {
    if (c->quiet) FLAGS_minloglevel = google::GLOG_WARNING;
  }

  try {
    if (*bank_cmd) return RunBank(bank);
    if (*sim_cmd) return RunSimulate(sim);
    if (*train_cmd) return RunTrain(train);
    if (*ret_cmd) return RunRetrieve(ret);
    if (*ev_cmd) return RunEvaluate(ev);
    if (*hm_cmd) return RunHeatmap(hm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
