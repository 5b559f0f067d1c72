// dubkit/binio.h

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

#ifndef DUBKIT_BINIO_H_
#define DUBKIT_BINIO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace dubkit {

// Raised when a file's magic or version is not what the reader expects.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on truncation or checksum mismatch.
struct CorruptionError : std::runtime_error {
  explicit CorruptionError(const std::string& what) : std::runtime_error(what) {}
};

// All on-disk integers and floats are little-endian.

inline void put_u8(std::string& buf, uint8_t v) {
  buf.push_back(static_cast<char>(v));
}

inline void put_u16(std::string& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u64(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& buf, float v) {
  put_u32(buf, std::bit_cast<uint32_t>(v));
}

inline void put_f64(std::string& buf, double v) {
  put_u64(buf, std::bit_cast<uint64_t>(v));
}

inline void put_bytes(std::string& buf, const std::string& v) {
  buf.append(v);
}

// Sequential reader over an in-memory byte buffer. Throws CorruptionError on
// reads past the end.
class ByteReader {
 public:
  ByteReader(const std::string& data, std::string origin)
      : data_(data), origin_(std::move(origin)) {}

  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  void need(size_t n) const {
    if (remaining() < n)
      throw CorruptionError(origin_ + ": truncated (need " + std::to_string(n) +
                            " bytes at offset " + std::to_string(pos_) + ")");
  }

  uint8_t get_u8() {
    need(1);
    return static_cast<uint8_t>(data_[pos_++]);
  }

  uint16_t get_u16() {
    need(2);
    uint16_t v = 0;
    for (int i = 0; i < 2; ++i)
      v |= static_cast<uint16_t>(static_cast<uint8_t>(data_[pos_ + i])) << (8 * i);
    pos_ += 2;
    return v;
  }

  uint32_t get_u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<uint8_t>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  uint64_t get_u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  float get_f32() { return std::bit_cast<float>(get_u32()); }
  double get_f64() { return std::bit_cast<double>(get_u64()); }

  std::string get_bytes(size_t n) {
    need(n);
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  const std::string& data_;
  size_t pos_ = 0;
  std::string origin_;
};

// Whole-file helpers.
std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::string& bytes);

}  // namespace dubkit

#endif  // DUBKIT_BINIO_H_
