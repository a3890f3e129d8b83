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

#include "hprm/corpus.h"

#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "hprm/binary_io.h"
#include "hprm/error.h"
#include "hprm/text_normalizer.h"

namespace hprm {

namespace {

using nlohmann::json;

// Carrier sentences; "{}" marks a hotword slot.
constexpr const char* kOneSlot[] = {
    "今天我们去{}参观了一下",
    "请帮我联系一下{}的负责人",
    "我刚才在新闻里看到了{}",
    "下周的会议由{}来主持",
    "你知道{}在什么地方吗",
    "这次活动的主要嘉宾是{}",
    "他们正在讨论关于{}的问题",
    "我觉得{}这个名字很好听",
    "明天上午我要去见{}",
    "大家对{}的评价都很高",
    "这本书里多次提到了{}",
    "我们公司最近和{}签了合同",
    "请把{}加到通讯录里",
    "老师让我们查一下{}的资料",
    "昨天晚上我梦见了{}",
    "这个项目的名字叫做{}",
    "听说{}最近很受欢迎",
    "我想订一张去{}的车票",
    "他的朋友里有一个叫{}的人",
    "报告的第一部分讲的是{}",
    "你能帮我打开{}的页面吗",
    "我们下午三点在{}门口见",
    "这件事需要向{}汇报",
    "电视上正在播放{}的节目",
    "我对{}一点也不了解",
    "请问{}的电话是多少",
    "这个问题最好去问{}",
    "他们把新产品命名为{}",
    "我每天早上都会听{}",
    "我们的目标是超过{}",
    "会上有人提出了{}的方案",
    "那家店的招牌上写着{}",
    "我记得上次就是在{}买的",
    "{}已经到了楼下",
    "{}的发布会推迟到了下个月",
    "{}这个词我以前没听过",
    "刚才说话的那位就是{}",
    "小王一直很想去看看{}",
    "我们先讨论{}再说别的",
    "关于{}的文件已经发给你了",
};

constexpr const char* kTwoSlot[] = {
    "{}和{}今天一起开会",
    "请把{}的报告转给{}",
    "我们比较了{}和{}的区别",
    "{}昨天去拜访了{}",
    "先找{}然后再联系{}",
    "这次的合作方有{}还有{}",
    "他说{}比{}更好一些",
    "会议名单里有{}和{}",
};

std::string Pronunciation(std::string_view text, const Lexicon& lexicon) {
  PhonemeSequence seq = ToPhonemes(text, lexicon);
  std::string key;
  for (const Phoneme& p : seq.phonemes) {
    key += p.symbol;
    key += ' ';
  }
  return key;
}

std::string FillTemplate(std::string_view tmpl,
                         std::span<const std::string> words) {
  std::string out;
  size_t w = 0;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.substr(i, 2) == "{}") {
      out += words[w++];
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

json RecordToJson(const CorpusRecord& r) {
  json j;
  j["reference"] = r.reference;
  j["hotwords"] = r.hotwords;
  if (r.hypothesis) j["hypothesis"] = *r.hypothesis;
  if (r.mer) j["mer"] = *r.mer;
  return j;
}

template <typename Fn>
void ForEachJsonLine(std::string_view jsonl, Fn fn) {
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= jsonl.size()) {
    size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw HprmError(ErrorCode::kBadInput,
                      "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const HprmError& e) {
      throw HprmError(ErrorCode::kBadInput,
                      "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == jsonl.size()) break;
  }
}

void CheckHotwordsPresent(const std::string& reference,
                          const std::vector<std::string>& hotwords) {
  std::string norm = NormalizeText(reference);
  for (const std::string& h : hotwords) {
    std::string nh = NormalizeText(h);
    if (nh.empty() || norm.find(nh) == std::string::npos) {
      throw HprmError(ErrorCode::kBadInput,
                      "hotword \"" + h + "\" not in reference");
    }
  }
}

}  // namespace

std::vector<CorpusRecord> ParseCorpus(std::string_view jsonl) {
  std::vector<CorpusRecord> out;
  ForEachJsonLine(jsonl, [&](const json& j) {
    CorpusRecord r;
    r.reference = j.at("reference").get<std::string>();
    r.hotwords = j.at("hotwords").get<std::vector<std::string>>();
    if (j.contains("hypothesis")) r.hypothesis = j["hypothesis"].get<std::string>();
    if (j.contains("mer")) {
      r.mer = j["mer"].get<double>();
      if (!(*r.mer >= 0.0)) throw HprmError(ErrorCode::kBadInput, "negative mer");
    }
    CheckHotwordsPresent(r.reference, r.hotwords);
    out.push_back(std::move(r));
  });
  return out;
}

std::string CorpusToJsonl(std::span<const CorpusRecord> records) {
  std::string out;
  for (const CorpusRecord& r : records) {
    out += RecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFileText(path));
}

void WriteCorpus(const std::filesystem::path& path,
                 std::span<const CorpusRecord> records) {
  WriteFileAtomic(path, CorpusToJsonl(records));
}

std::vector<EvalRecord> ParseEvalSet(std::string_view jsonl) {
  std::vector<EvalRecord> out;
  ForEachJsonLine(jsonl, [&](const json& j) {
    EvalRecord r;
    r.reference = j.at("reference").get<std::string>();
    r.hypothesis = j.at("hypothesis").get<std::string>();
    r.hotwords = j.at("hotwords").get<std::vector<std::string>>();
    CheckHotwordsPresent(r.reference, r.hotwords);
    out.push_back(std::move(r));
  });
  return out;
}

std::string EvalSetToJsonl(std::span<const EvalRecord> records) {
  std::string out;
  for (const EvalRecord& r : records) {
    json j;
    j["reference"] = r.reference;
    j["hypothesis"] = r.hypothesis;
    j["hotwords"] = r.hotwords;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<EvalRecord> ReadEvalSet(const std::filesystem::path& path) {
  return ParseEvalSet(ReadFileText(path));
}

void WriteEvalSet(const std::filesystem::path& path,
                  std::span<const EvalRecord> records) {
  WriteFileAtomic(path, EvalSetToJsonl(records));
}

std::vector<EvalRecord> ToEvalRecords(std::span<const CorpusRecord> records) {
  std::vector<EvalRecord> out;
  out.reserve(records.size());
  for (const CorpusRecord& r : records) {
    out.push_back({r.reference, r.hypothesis.value_or(r.reference), r.hotwords});
  }
  return out;
}

std::vector<TokenSpan> LocateHotwords(std::string_view reference,
                                      std::span<const std::string> hotwords) {
  std::vector<Token> ref = NormalizeAndTokenize(reference);
  std::vector<TokenSpan> spans;
  for (const std::string& h : hotwords) {
    std::vector<Token> ht = NormalizeAndTokenize(h);
    if (ht.empty() || ht.size() > ref.size()) continue;
    for (size_t i = 0; i + ht.size() <= ref.size(); ++i) {
      bool match = true;
      for (size_t k = 0; k < ht.size() && match; ++k) {
        match = ref[i + k].surface == ht[k].surface;
      }
      if (match) {
        spans.emplace_back(static_cast<int>(i), static_cast<int>(i + ht.size()));
        break;
      }
    }
  }
  return spans;
}

void SimulateCorpus(std::vector<CorpusRecord>* records, const Lexicon& lexicon,
                    double lo, double hi, uint64_t seed,
                    const SimulatorOptions& options) {
  for (size_t i = 0; i < records->size(); ++i) {
    CorpusRecord& r = (*records)[i];
    std::vector<TokenSpan> spans = LocateHotwords(r.reference, r.hotwords);
    const uint64_t s = Rng::Mix(seed, i);
    try {
      SimulatedHypothesis h =
          SimulateAsrErrors(r.reference, lexicon, lo, hi, s, options, spans);
      r.hypothesis = h.text;
      r.mer = h.mer;
      continue;
    } catch (const HprmError& e) {
      if (e.code() != ErrorCode::kTargetUnreachable) throw;
    }
    // Hotword corruption alone may overshoot a short reference.
    SimulatorOptions plain = options;
    plain.focus_prob = 0.0;
    try {
      SimulatedHypothesis h =
          SimulateAsrErrors(r.reference, lexicon, lo, hi, s, plain, spans);
      r.hypothesis = h.text;
      r.mer = h.mer;
    } catch (const HprmError& e) {
      if (e.code() != ErrorCode::kTargetUnreachable) throw;
      LOG(WARNING) << "record " << i << ": " << e.what();
      r.hypothesis = r.reference;
      r.mer = 0.0;
    }
  }
}

std::vector<std::string> GenerateHotwords(const Lexicon& lexicon, int count,
                                          double english_fraction, Rng& rng,
                                          HotwordRegistry* registry) {
  const auto& chars = lexicon.zh_chars();
  std::vector<std::string> en;
  for (const std::string& w : lexicon.en_words()) {
    if (w.size() >= 4 && w.find('\'') == std::string::npos) en.push_back(w);
  }
  if (chars.empty()) throw HprmError(ErrorCode::kBadInput, "lexicon has no characters");
  std::vector<std::string> out;
  const int max_tries = count * 200 + 1000;
  for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
    if (tries > max_tries) {
      throw HprmError(ErrorCode::kBadInput, "lexicon too small for " +
                                                std::to_string(count) +
                                                " distinct hotwords");
    }
    std::string word;
    if (!en.empty() && rng.Bernoulli(english_fraction)) {
      word = en[rng.Below(en.size())];
    } else {
      int len = rng.Int(2, 4);
      for (int k = 0; k < len; ++k) word += chars[rng.Below(chars.size())];
    }
    if (registry->surfaces.count(word)) continue;
    std::string key = Pronunciation(word, lexicon);
    if (registry->pronunciations.count(key)) continue;
    registry->surfaces.insert(word);
    registry->pronunciations.insert(key);
    out.push_back(std::move(word));
  }
  return out;
}

SyntheticCorpus GenerateSyntheticCorpus(const Lexicon& lexicon,
                                        const SyntheticCorpusOptions& options) {
  if (options.num_hotwords < 1 || options.bank_size < options.num_hotwords ||
      options.num_records < 1) {
    throw HprmError(ErrorCode::kBadInput, "inconsistent corpus sizes");
  }
  Rng rng(Rng::Mix(options.seed, 0x636f72707573ULL));
  SyntheticCorpus c;
  HotwordRegistry registry;
  c.ground_truth = GenerateHotwords(lexicon, options.num_hotwords,
                                    options.english_fraction, rng, &registry);
  c.bank = c.ground_truth;
  std::vector<std::string> distractors =
      GenerateHotwords(lexicon, options.bank_size - options.num_hotwords,
                       options.english_fraction, rng, &registry);
  c.bank.insert(c.bank.end(), distractors.begin(), distractors.end());
  c.extra_distractors = GenerateHotwords(lexicon, options.extra_distractors,
                                         options.english_fraction, rng, &registry);

  // Cycle through a shuffled hotword order so every hotword gets used.
  std::vector<int> order(c.ground_truth.size());
  std::iota(order.begin(), order.end(), 0);
  size_t next = order.size();
  auto draw = [&]() {
    if (next == order.size()) {
      rng.Shuffle(order);
      next = 0;
    }
    return c.ground_truth[order[next++]];
  };
  constexpr size_t kOne = std::size(kOneSlot);
  constexpr size_t kTwo = std::size(kTwoSlot);
  c.records.reserve(options.num_records);
  for (int i = 0; i < options.num_records; ++i) {
    CorpusRecord r;
    if (c.ground_truth.size() > 1 && rng.Bernoulli(options.two_hotword_fraction)) {
      std::string a = draw(), b = draw();
      while (b == a) b = draw();
      std::vector<std::string> words = {a, b};
      r.reference = FillTemplate(kTwoSlot[rng.Below(kTwo)], words);
      r.hotwords = words;
    } else {
      std::vector<std::string> words = {draw()};
      r.reference = FillTemplate(kOneSlot[rng.Below(kOne)], words);
      r.hotwords = words;
    }
    c.records.push_back(std::move(r));
  }
  SimulateCorpus(&c.records, lexicon, options.mer_lo, options.mer_hi,
                 Rng::Mix(options.seed, 0x73696d), options.simulator);
  return c;
}

std::pair<std::vector<CorpusRecord>, std::vector<CorpusRecord>> SplitCorpus(
    std::span<const CorpusRecord> records, double train_fraction, uint64_t seed) {
  std::vector<size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(Rng::Mix(seed, 0x73706c6974ULL));
  rng.Shuffle(idx);
  const size_t n_train = static_cast<size_t>(
      std::llround(std::clamp(train_fraction, 0.0, 1.0) * records.size()));
  std::vector<size_t> train_idx(idx.begin(), idx.begin() + n_train);
  std::vector<size_t> held_idx(idx.begin() + n_train, idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(held_idx.begin(), held_idx.end());
  std::pair<std::vector<CorpusRecord>, std::vector<CorpusRecord>> out;
  for (size_t i : train_idx) out.first.push_back(records[i]);
  for (size_t i : held_idx) out.second.push_back(records[i]);
  return out;
}

}  // namespace hprm
