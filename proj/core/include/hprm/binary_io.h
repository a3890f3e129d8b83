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

#ifndef HPRM_BINARY_IO_H_
#define HPRM_BINARY_IO_H_

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hprm/error.h"

namespace hprm {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest Sha256(std::span<const uint8_t> data);
std::string ToHex(std::span<const uint8_t> bytes);
uint32_t Crc32(std::span<const uint8_t> data);

// Little-endian serializer.
class ByteWriter {
 public:
  void U8(uint8_t v) { buf_.push_back(v); }
  void U16(uint16_t v) { Raw(v); }
  void U32(uint32_t v) { Raw(v); }
  void U64(uint64_t v) { Raw(v); }
  void F32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    Raw(bits);
  }
  void Bytes(std::span<const uint8_t> b) {
    buf_.insert(buf_.end(), b.begin(), b.end());
  }
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  // Appends the CRC-32 of everything written so far.
  void Checksum() { U32(Crc32(buf_)); }

  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> Release() { return std::move(buf_); }

 private:
  template <typename T>
  void Raw(T v) {
    for (size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }
  std::vector<uint8_t> buf_;
};

// Little-endian deserializer; every overrun throws `error_code`.
class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> data, ErrorCode error_code)
      : data_(data), code_(error_code) {}

  uint8_t U8() { return static_cast<uint8_t>(Raw<uint8_t>()); }
  uint16_t U16() { return Raw<uint16_t>(); }
  uint32_t U32() { return Raw<uint32_t>(); }
  uint64_t U64() { return Raw<uint64_t>(); }
  float F32() {
    uint32_t bits = Raw<uint32_t>();
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::span<const uint8_t> Bytes(size_t n) {
    Need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::string Str() {
    uint32_t n = U32();
    auto b = Bytes(n);
    return std::string(b.begin(), b.end());
  }
  // Verifies a trailing CRC-32 over bytes [0, position).
  void VerifyChecksum() {
    uint32_t expected = Crc32(data_.first(pos_));
    if (U32() != expected) Fail("checksum mismatch");
  }
  size_t position() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  [[noreturn]] void Fail(const std::string& why) const {
    throw HprmError(code_, why);
  }

 private:
  void Need(size_t n) const {
    if (n > remaining()) Fail("truncated input");
  }
  template <typename T>
  T Raw() {
    Need(sizeof(T));
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(data_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  ErrorCode code_;
};

// Checks that the last four bytes are the CRC-32 of the rest; throws `code`.
inline void VerifyTrailingChecksum(std::span<const uint8_t> data, ErrorCode code) {
  if (data.size() < 4) throw HprmError(code, "truncated input");
  ByteReader tail(data.last(4), code);
  if (tail.U32() != Crc32(data.first(data.size() - 4))) {
    throw HprmError(code, "checksum mismatch");
  }
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);
// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> bytes);
void WriteFileAtomic(const std::filesystem::path& path, std::string_view text);

}  // namespace hprm

#endif  // HPRM_BINARY_IO_H_
