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

#ifndef HPRM_HOTWORD_BANK_H_
#define HPRM_HOTWORD_BANK_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hprm/binary_io.h"
#include "hprm/lexicon.h"

namespace hprm {

inline constexpr int kPadId = 0;
inline constexpr const char* kPadSymbol = "<pad>";
inline constexpr int kDefaultMaxHotwordPhonemes = 24;

// Phoneme symbol <-> dense id. Id 0 is PAD and never appears in an encoding.
class PhonemeVocab {
 public:
  PhonemeVocab() = default;
  // `symbols` must not contain the PAD symbol; it is prepended.
  explicit PhonemeVocab(std::vector<std::string> symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& Symbol(int id) const { return symbols_.at(id); }
  bool Contains(std::string_view symbol) const;
  // Throws kUnknownPhoneme, also for the PAD symbol.
  int Id(std::string_view symbol) const;
  std::vector<int> Encode(const PhonemeSequence& seq) const;
  const Sha256Digest& hash() const { return hash_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
  Sha256Digest hash_{};
};

// PAD plus the lexicon's phoneme inventory, sorted by symbol.
PhonemeVocab BuildVocab(const Lexicon& lexicon);

struct HotwordEntry {
  int id = 0;
  std::string surface;
  std::vector<int> phoneme_ids;

  bool operator==(const HotwordEntry&) const = default;
};

// The hotword feature bank. It stores phoneme ids rather than embeddings so
// one bank serves every checkpoint trained on the same vocabulary.
class HotwordBank {
 public:
  HotwordBank() = default;
  // Entries may come in any order but their ids must be a permutation of
  // [0, n) and surfaces must be unique.
  HotwordBank(Sha256Digest vocab_hash, std::vector<HotwordEntry> entries);

  const Sha256Digest& vocab_hash() const { return vocab_hash_; }
  const std::vector<HotwordEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Entry by id (not position).
  const HotwordEntry& ById(int id) const { return entries_[by_id_.at(id)]; }
  // Looks up a surface after normalization; -1 when absent.
  int FindId(std::string_view surface) const;

  bool operator==(const HotwordBank& other) const {
    return vocab_hash_ == other.vocab_hash_ && entries_ == other.entries_;
  }

 private:
  Sha256Digest vocab_hash_{};
  std::vector<HotwordEntry> entries_;
  std::vector<size_t> by_id_;
  std::unordered_map<std::string, int> surface_index_;
};

// Normalizes, converts and deduplicates hotwords (first occurrence wins) and
// assigns ids in input order. Hotwords longer than `max_phonemes` are
// truncated with a warning; unconvertible ones are dropped with a warning.
// Throws kEmptyBank when nothing survives.
HotwordBank BuildBank(std::span<const std::string> hotwords,
                      const Lexicon& lexicon, const PhonemeVocab& vocab,
                      int max_phonemes = kDefaultMaxHotwordPhonemes);

// Layout: "HPRM", u16 version, 32-byte vocab hash, u32 entry count, then per
// entry in id order a u32-length-prefixed UTF-8 surface and a u32-count
// prefixed list of u32 phoneme ids; a trailing CRC-32. Little-endian.
std::vector<uint8_t> SaveBank(const HotwordBank& bank);
// Throws kCorruptBank on malformed input and kVocabMismatch when the stored
// hash differs from `vocab`.
HotwordBank LoadBank(std::span<const uint8_t> bytes, const PhonemeVocab& vocab);

HotwordBank LoadBankFile(const std::filesystem::path& path,
                         const PhonemeVocab& vocab);
void SaveBankFile(const HotwordBank& bank, const std::filesystem::path& path);

// One hotword per line; blank lines and surrounding whitespace are ignored.
std::vector<std::string> ReadHotwordList(const std::filesystem::path& path);

}  // namespace hprm

#endif  // HPRM_HOTWORD_BANK_H_
