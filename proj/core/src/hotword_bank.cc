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

#include "hprm/hotword_bank.h"

#include <glog/logging.h>

#include <algorithm>
#include <sstream>

#include "hprm/error.h"
#include "hprm/text_normalizer.h"

namespace hprm {

namespace {

constexpr char kBankMagic[4] = {'H', 'P', 'R', 'M'};
constexpr uint16_t kBankVersion = 1;

}  // namespace

PhonemeVocab::PhonemeVocab(std::vector<std::string> symbols) {
  symbols_.reserve(symbols.size() + 1);
  symbols_.push_back(kPadSymbol);
  for (std::string& s : symbols) {
    if (s == kPadSymbol) continue;
    symbols_.push_back(std::move(s));
  }
  std::string joined;
  for (size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], static_cast<int>(i)).second) {
      throw HprmError(ErrorCode::kBadInput,
                      "duplicate phoneme symbol '" + symbols_[i] + "'");
    }
    joined += symbols_[i];
    joined.push_back('\n');
  }
  hash_ = Sha256(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(joined.data()), joined.size()));
}

bool PhonemeVocab::Contains(std::string_view symbol) const {
  return index_.count(std::string(symbol)) > 0;
}

int PhonemeVocab::Id(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end() || it->second == kPadId) {
    throw HprmError(ErrorCode::kUnknownPhoneme,
                    "phoneme '" + std::string(symbol) + "' not in vocabulary");
  }
  return it->second;
}

std::vector<int> PhonemeVocab::Encode(const PhonemeSequence& seq) const {
  std::vector<int> ids;
  ids.reserve(seq.size());
  for (const Phoneme& p : seq.phonemes) ids.push_back(Id(p.symbol));
  return ids;
}

PhonemeVocab BuildVocab(const Lexicon& lexicon) {
  return PhonemeVocab(lexicon.PhonemeInventory());
}

HotwordBank::HotwordBank(Sha256Digest vocab_hash,
                         std::vector<HotwordEntry> entries)
    : vocab_hash_(vocab_hash), entries_(std::move(entries)) {
  by_id_.assign(entries_.size(), entries_.size());
  for (size_t pos = 0; pos < entries_.size(); ++pos) {
    const HotwordEntry& e = entries_[pos];
    if (e.id < 0 || static_cast<size_t>(e.id) >= entries_.size() ||
        by_id_[e.id] != entries_.size()) {
      throw HprmError(ErrorCode::kBadInput, "bank ids must be dense [0, n)");
    }
    if (e.phoneme_ids.empty()) {
      throw HprmError(ErrorCode::kBadInput,
                      "hotword '" + e.surface + "' has no phonemes");
    }
    by_id_[e.id] = pos;
    if (!surface_index_.emplace(e.surface, e.id).second) {
      throw HprmError(ErrorCode::kBadInput,
                      "duplicate hotword surface '" + e.surface + "'");
    }
  }
}

int HotwordBank::FindId(std::string_view surface) const {
  auto it = surface_index_.find(NormalizeText(surface));
  return it == surface_index_.end() ? -1 : it->second;
}

HotwordBank BuildBank(std::span<const std::string> hotwords,
                      const Lexicon& lexicon, const PhonemeVocab& vocab,
                      int max_phonemes) {
  std::vector<HotwordEntry> entries;
  std::unordered_map<std::string, int> seen;
  for (const std::string& raw : hotwords) {
    std::string surface = NormalizeText(raw);
    if (surface.empty() || seen.count(surface)) continue;
    PhonemeSequence seq;
    try {
      seq = ToPhonemes(surface, lexicon);
    } catch (const HprmError& e) {
      LOG(WARNING) << "dropping hotword '" << raw << "': " << e.what();
      continue;
    }
    std::vector<int> ids = vocab.Encode(seq);
    if (static_cast<int>(ids.size()) > max_phonemes) {
      LOG(WARNING) << "hotword '" << surface << "' has " << ids.size()
                   << " phonemes, truncating to " << max_phonemes;
      ids.resize(max_phonemes);
    }
    int id = static_cast<int>(entries.size());
    seen.emplace(surface, id);
    entries.push_back({id, std::move(surface), std::move(ids)});
  }
  if (entries.empty()) {
    throw HprmError(ErrorCode::kEmptyBank, "empty bank");
  }
  return HotwordBank(vocab.hash(), std::move(entries));
}

std::vector<uint8_t> SaveBank(const HotwordBank& bank) {
  ByteWriter w;
  w.Bytes(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(kBankMagic), 4));
  w.U16(kBankVersion);
  w.Bytes(bank.vocab_hash());
  w.U32(static_cast<uint32_t>(bank.size()));
  for (size_t id = 0; id < bank.size(); ++id) {
    const HotwordEntry& e = bank.ById(static_cast<int>(id));
    w.Str(e.surface);
    w.U32(static_cast<uint32_t>(e.phoneme_ids.size()));
    for (int p : e.phoneme_ids) w.U32(static_cast<uint32_t>(p));
  }
  w.Checksum();
  return w.Release();
}

HotwordBank LoadBank(std::span<const uint8_t> bytes,
                     const PhonemeVocab& vocab) {
  VerifyTrailingChecksum(bytes, ErrorCode::kCorruptBank);
  ByteReader r(bytes, ErrorCode::kCorruptBank);
  auto magic = r.Bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kBankMagic)) {
    r.Fail("bad magic");
  }
  if (r.U16() != kBankVersion) r.Fail("unsupported bank version");
  Sha256Digest hash;
  auto hb = r.Bytes(hash.size());
  std::copy(hb.begin(), hb.end(), hash.begin());
  if (hash != vocab.hash()) {
    throw HprmError(ErrorCode::kVocabMismatch,
                    "bank built for vocab " + ToHex(hash).substr(0, 12) +
                        ", active vocab " + ToHex(vocab.hash()).substr(0, 12));
  }
  uint32_t count = r.U32();
  std::vector<HotwordEntry> entries;
  for (uint32_t i = 0; i < count; ++i) {
    HotwordEntry e;
    e.id = static_cast<int>(i);
    e.surface = r.Str();
    uint32_t n = r.U32();
    if (n == 0 || n > r.remaining() / 4) r.Fail("bad phoneme count");
    for (uint32_t k = 0; k < n; ++k) {
      uint32_t p = r.U32();
      if (p == kPadId || p >= static_cast<uint32_t>(vocab.size())) {
        r.Fail("phoneme id out of range");
      }
      e.phoneme_ids.push_back(static_cast<int>(p));
    }
    entries.push_back(std::move(e));
  }
  r.VerifyChecksum();
  if (r.remaining() != 0) r.Fail("trailing bytes");
  try {
    return HotwordBank(hash, std::move(entries));
  } catch (const HprmError& e) {
    throw HprmError(ErrorCode::kCorruptBank, e.what());
  }
}

HotwordBank LoadBankFile(const std::filesystem::path& path,
                         const PhonemeVocab& vocab) {
  return LoadBank(ReadFileBytes(path), vocab);
}

void SaveBankFile(const HotwordBank& bank, const std::filesystem::path& path) {
  WriteFileAtomic(path, SaveBank(bank));
}

std::vector<std::string> ReadHotwordList(const std::filesystem::path& path) {
  std::istringstream in(ReadFileText(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace hprm
