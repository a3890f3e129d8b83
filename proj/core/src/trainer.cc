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

#include "hprm/trainer.h"

#include <glog/logging.h>

#include <algorithm>
#include <json.hpp>
#include <memory>
#include <numeric>
#include <unordered_map>

#include "hprm/error.h"
#include "hprm/evaluation.h"
#include "hprm/metrics.h"
#include "hprm/parallel.h"
#include "hprm/rng.h"
#include "hprm/scorer.h"
#include "hprm/scorer_network.h"

namespace hprm {

namespace {

// Samples per gradient sub-batch. Sub-batch gradients are summed in order.
constexpr int kShard = 8;

struct EncodedPair {
  std::vector<int> hotword;
  const std::vector<int>* text;
  int label;
};

class PairEncoder {
 public:
  PairEncoder(const HotwordBank& bank, const PhonemeVocab& vocab,
              const Lexicon& lexicon, int max_rows)
      : bank_(bank), vocab_(vocab), lexicon_(lexicon), max_rows_(max_rows) {}

  // False when either side has no phonemes.
  bool Encode(const TrainingPair& p, EncodedPair* out) {
    const std::vector<int>* text = Text(p.text);
    if (text->empty()) return false;
    if (p.hotword_id >= 0) {
      out->hotword = bank_.ById(p.hotword_id).phoneme_ids;
    } else {
      try {
        out->hotword = vocab_.Encode(ToPhonemes(p.hotword, lexicon_));
      } catch (const HprmError& e) {
        if (e.code() != ErrorCode::kEmptyPhonemeSequence) throw;
        return false;
      }
    }
    if (static_cast<int>(out->hotword.size()) > max_rows_) {
      out->hotword.resize(max_rows_);
    }
    out->text = text;
    out->label = p.label;
    return true;
  }

 private:
  const std::vector<int>* Text(const std::string& text) {
    auto it = texts_.find(text);
    if (it != texts_.end()) return it->second.get();
    auto ids = std::make_unique<std::vector<int>>();
    try {
      *ids = vocab_.Encode(ToPhonemes(text, lexicon_));
    } catch (const HprmError& e) {
      if (e.code() != ErrorCode::kEmptyPhonemeSequence) throw;
    }
    const std::vector<int>* raw = ids.get();
    texts_.emplace(text, std::move(ids));
    return raw;
  }

  const HotwordBank& bank_;
  const PhonemeVocab& vocab_;
  const Lexicon& lexicon_;
  int max_rows_;
  std::unordered_map<std::string, std::unique_ptr<std::vector<int>>> texts_;
};

std::vector<EncodedPair> EncodeAll(std::span<const TrainingPair> pairs,
                                   PairEncoder* encoder) {
  std::vector<EncodedPair> out;
  out.reserve(pairs.size());
  size_t dropped = 0;
  for (const TrainingPair& p : pairs) {
    EncodedPair e;
    if (encoder->Encode(p, &e)) {
      out.push_back(std::move(e));
    } else {
      ++dropped;
    }
  }
  if (dropped) LOG(WARNING) << dropped << " pairs without phonemes dropped";
  return out;
}

void CountStages(std::span<const TrainingPair> pairs,
                 std::map<std::string, int>* counts) {
  for (PairStage s : {PairStage::kInitial, PairStage::kMinedNegative,
                      PairStage::kAugmentedPositive}) {
    (*counts)[PairStageName(s)] = 0;
  }
  for (const TrainingPair& p : pairs) ++(*counts)[PairStageName(p.stage)];
}

}  // namespace

std::vector<int> EpochSchedule(int epochs, int rounds) {
  if (epochs < 0 || rounds < 1) {
    throw HprmError(ErrorCode::kBadInput, "epochs >= 0 and rounds >= 1 required");
  }
  if (rounds == 1) return {epochs};
  std::vector<int> out(rounds, 0);
  out[0] = std::min(epochs, (epochs * 2 + 4) / 5);
  const int rest = epochs - out[0];
  for (int r = 1; r < rounds; ++r) {
    out[r] = rest / (rounds - 1) + (r - 1 < rest % (rounds - 1) ? 1 : 0);
  }
  return out;
}

PairEvaluation EvaluatePairs(const ScorerModel& model, const PhonemeVocab& vocab,
                             const HotwordBank& bank, const Lexicon& lexicon,
                             std::span<const TrainingPair> pairs, int threads) {
  PairEncoder encoder(bank, vocab, lexicon, model.config.canvas_rows);
  std::vector<EncodedPair> encoded = EncodeAll(pairs, &encoder);
  std::vector<std::vector<int>> hs, ts;
  std::vector<int> labels;
  for (const EncodedPair& e : encoded) {
    hs.push_back(e.hotword);
    ts.push_back(*e.text);
    labels.push_back(e.label);
  }
  std::vector<double> scores = ScorePairs(model, hs, ts, threads);
  PairEvaluation ev;
  ev.pairs = scores.size();
  if (scores.empty()) return ev;
  size_t correct = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    correct += (scores[i] > 0.5) == (labels[i] == 1);
  }
  ev.accuracy = static_cast<double>(correct) / scores.size();
  const bool both = std::count(labels.begin(), labels.end(), 1) > 0 &&
                    std::count(labels.begin(), labels.end(), 0) > 0;
  ev.auc = both ? Auc(scores, labels) : 0.0;
  return ev;
}

TrainResult Train(std::span<const CorpusRecord> corpus, const HotwordBank& bank,
                  const PhonemeVocab& vocab, const Lexicon& lexicon,
                  const TrainConfig& config) {
  if (config.batch_size < 1) throw HprmError(ErrorCode::kBadInput, "batch size < 1");
  if (bank.vocab_hash() != vocab.hash()) {
    throw HprmError(ErrorCode::kVocabMismatch, "bank built on another vocabulary");
  }
  TrainResult result;
  std::tie(result.train, result.heldout) =
      SplitCorpus(corpus, config.train_fraction, config.seed);
  TrainingReport& report = result.report;
  report.config = config;
  report.train_records = result.train.size();
  report.heldout_records = result.heldout.size();

  ModelConfig mc = config.model;
  mc.vocab_size = vocab.size();
  mc.seed = config.seed;
  result.model = InitModel<float>(mc);
  result.model.vocab_hash = vocab.hash();
  ScorerModel& model = result.model;

  InitialPairOptions init;
  init.negatives_per_positive = config.negatives_per_positive;
  init.mer_lo = config.mer_lo;
  init.mer_hi = config.mer_hi;
  init.seed = config.seed;
  std::vector<TrainingPair> pairs = BuildInitialPairs(result.train, bank, init);
  InitialPairOptions held_init = init;
  held_init.seed = Rng::Mix(config.seed, 0x68656c64ULL);
  const std::vector<TrainingPair> held_pairs =
      BuildInitialPairs(result.heldout, bank, held_init);
  const std::vector<EvalRecord> held_records = ToEvalRecords(result.heldout);

  PairEncoder encoder(bank, vocab, lexicon, mc.canvas_rows);
  std::vector<EncodedPair> encoded = EncodeAll(pairs, &encoder);

  AdamWOptions adam;
  adam.lr = config.lr;
  adam.weight_decay = config.weight_decay;
  OptimizerState<float> opt;
  const int threads = ResolveThreads(config.threads);
  std::vector<std::unique_ptr<ScorerNetwork<float>>> nets(threads);
  const int max_shards = (config.batch_size + kShard - 1) / kShard;
  std::vector<std::vector<float>> shard_grads(max_shards);
  std::vector<float> shard_loss(max_shards);
  std::vector<float> grads(model.layout.total);
  Rng order_rng(Rng::Mix(config.seed, 0x6f72646572ULL));

  const std::vector<int> schedule =
      EpochSchedule(config.epochs, config.mining_rounds);
  for (int round = 1; round <= config.mining_rounds; ++round) {
    RoundReport rr;
    rr.round = round;
    rr.epochs = schedule[round - 1];
    if (round > 1) {
      std::vector<TrainingPair> mined = MineNegatives(
          model, vocab, bank, lexicon, result.train, config.threads);
      rr.mined_negatives = static_cast<int>(mined.size());
      std::vector<EncodedPair> enc = EncodeAll(mined, &encoder);
      encoded.insert(encoded.end(), enc.begin(), enc.end());
      pairs.insert(pairs.end(), mined.begin(), mined.end());
      if (round == config.mining_rounds) {
        std::vector<TrainingPair> aug =
            AugmentPositives(result.train, lexicon, config.augment_per_hotword,
                             Rng::Mix(config.seed, round));
        rr.augmented_positives = static_cast<int>(aug.size());
        enc = EncodeAll(aug, &encoder);
        encoded.insert(encoded.end(), enc.begin(), enc.end());
        pairs.insert(pairs.end(), aug.begin(), aug.end());
      }
    }
    CountStages(pairs, &rr.pair_counts);
    LOG(INFO) << "round " << round << ": " << encoded.size() << " pairs, "
              << rr.epochs << " epochs";

    std::vector<size_t> order(encoded.size());
    for (int epoch = 1; epoch <= rr.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      order_rng.Shuffle(order);
      double loss_sum = 0.0;
      const size_t num_batches =
          (order.size() + config.batch_size - 1) / config.batch_size;
      for (size_t b = 0; b < num_batches; ++b) {
        const size_t begin = b * config.batch_size;
        const size_t end = std::min(order.size(), begin + config.batch_size);
        const int n = static_cast<int>(end - begin);
        const int shards = (n + kShard - 1) / kShard;
        try {
          ParallelFor(shards, threads, [&](int s, int worker) {
            if (!nets[worker]) {
              nets[worker] = std::make_unique<ScorerNetwork<float>>(model);
            }
            std::vector<PairInput> inputs;
            std::vector<int> labels;
            const size_t s0 = begin + static_cast<size_t>(s) * kShard;
            const size_t s1 = std::min(end, s0 + kShard);
            for (size_t k = s0; k < s1; ++k) {
              const EncodedPair& e = encoded[order[k]];
              inputs.push_back({e.hotword, *e.text});
              labels.push_back(e.label);
            }
            shard_loss[s] = nets[worker]->LossAndGrads(inputs, labels,
                                                       &shard_grads[s]);
          });
        } catch (const HprmError& e) {
          if (e.code() != ErrorCode::kNonFiniteLoss) throw;
          throw HprmError(ErrorCode::kNonFiniteLoss,
                          "round " + std::to_string(round) + " epoch " +
                              std::to_string(epoch) + " batch " +
                              std::to_string(b));
        }
        std::fill(grads.begin(), grads.end(), 0.0f);
        double batch_loss = 0.0;
        for (int s = 0; s < shards; ++s) {
          const int size = std::min(kShard, n - s * kShard);
          const float w = static_cast<float>(size) / static_cast<float>(n);
          const std::vector<float>& g = shard_grads[s];
          for (size_t i = 0; i < grads.size(); ++i) grads[i] += w * g[i];
          batch_loss += static_cast<double>(shard_loss[s]) * size;
        }
        AdamWStep<float>(&model, &opt, grads, adam);
        loss_sum += batch_loss;
      }
      const double epoch_loss =
          order.empty() ? 0.0 : loss_sum / static_cast<double>(order.size());
      rr.epoch_loss.push_back(epoch_loss);
      VLOG(1) << "round " << round << " epoch " << epoch << " loss " << epoch_loss;
    }

    if (config.evaluate_rounds && !result.heldout.empty()) {
      PairEvaluation ev =
          EvaluatePairs(model, vocab, bank, lexicon, held_pairs, config.threads);
      rr.heldout_accuracy = ev.accuracy;
      rr.heldout_auc = ev.auc;
      SweepOptions so;
      so.n_list = config.report_n;
      so.threads = config.threads;
      SweepResult sweep = EvaluateSweep(model, vocab, bank, lexicon, held_records, so);
      for (const MetricsReport& row : sweep.rows) rr.prrr[row.n] = row.prrr.value();
      LOG(INFO) << "round " << round << ": held-out AUC " << ev.auc
                << ", accuracy " << ev.accuracy;
    }
    report.rounds.push_back(std::move(rr));
  }
  return result;
}

std::string TrainingReport::ToJson() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json c;
  c["epochs"] = config.epochs;
  c["lr"] = config.lr;
  c["batch_size"] = config.batch_size;
  c["mining_rounds"] = config.mining_rounds;
  c["seed"] = config.seed;
  c["negatives_per_positive"] = config.negatives_per_positive;
  c["augment_per_hotword"] = config.augment_per_hotword;
  c["train_fraction"] = config.train_fraction;
  c["weight_decay"] = config.weight_decay;
  j["config"] = c;
  j["train_records"] = train_records;
  j["heldout_records"] = heldout_records;
  nlohmann::ordered_json rounds_json = nlohmann::ordered_json::array();
  for (const RoundReport& r : rounds) {
    nlohmann::ordered_json rj;
    rj["round"] = r.round;
    rj["epochs"] = r.epochs;
    rj["pair_counts"] = r.pair_counts;
    rj["mined_negatives"] = r.mined_negatives;
    rj["augmented_positives"] = r.augmented_positives;
    rj["epoch_loss"] = r.epoch_loss;
    rj["loss"] = r.epoch_loss.empty() ? 0.0 : r.epoch_loss.back();
    rj["heldout_accuracy"] = r.heldout_accuracy;
    rj["heldout_auc"] = r.heldout_auc;
    nlohmann::ordered_json p;
    for (const auto& [n, v] : r.prrr) p[std::to_string(n)] = v;
    rj["prrr"] = p;
    rounds_json.push_back(rj);
  }
  j["rounds"] = rounds_json;
  return j.dump(2) + "\n";
}

}  // namespace hprm
