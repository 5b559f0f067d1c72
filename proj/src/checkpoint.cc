// src/checkpoint.cc

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

#include "dubkit/checkpoint.h"

#include <cstring>

#include "dubkit/binio.h"
#include "dubkit/crc32.h"

namespace dubkit {

void save_checkpoint(const std::string& path, const TrainConfig& config,
                     const ParamSet& params) {
  std::string buf;
  buf.append(kCheckpointMagic, 4);
  put_u32(buf, kCheckpointVersion);
  std::string cfg = config.to_text();
  put_u32(buf, static_cast<uint32_t>(cfg.size()));
  buf.append(cfg);
  put_u32(buf, static_cast<uint32_t>(params.size()));
  for (size_t i = 0; i < params.size(); ++i) {
    const Param& p = params.at(i);
    put_u32(buf, static_cast<uint32_t>(p.name.size()));
    buf.append(p.name);
    put_u8(buf, p.trainable ? 1 : 0);
    put_u32(buf, static_cast<uint32_t>(p.value.rank()));
    for (int64_t d : p.value.shape()) put_u32(buf, static_cast<uint32_t>(d));
  }
  for (size_t i = 0; i < params.size(); ++i)
    for (double v : params.at(i).value.flat()) put_f64(buf, v);
  put_u32(buf, crc32(buf));
  write_file_bytes(path, buf);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::string buf = read_file_bytes(path);
  if (buf.size() < 4)
    throw CorruptionError(path + ": too short to hold a checksum");
  uint32_t stored = 0;
  for (int b = 0; b < 4; ++b)
    stored |= static_cast<uint32_t>(
                  static_cast<uint8_t>(buf[buf.size() - 4 + b]))
              << (8 * b);
  uint32_t expect = crc32(buf.data(), buf.size() - 4);
  if (stored != expect)
    throw CorruptionError(path + ": checkpoint checksum mismatch");

  ByteReader r(buf, path);
  std::string magic = r.get_bytes(4);
  if (std::memcmp(magic.data(), kCheckpointMagic, 4) != 0)
    throw FormatError(path + ": not a checkpoint file (bad magic)");
  uint32_t version = r.get_u32();
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported checkpoint version " +
                      std::to_string(version));
  uint32_t cfg_len = r.get_u32();
  Checkpoint ckpt{TrainConfig::from_text(r.get_bytes(cfg_len)), ParamSet()};
  uint32_t count = r.get_u32();
  struct Entry {
    std::string name;
    bool trainable;
    std::vector<int64_t> shape;
  };
  std::vector<Entry> manifest;
  manifest.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    Entry e;
    uint32_t name_len = r.get_u32();
    e.name = r.get_bytes(name_len);
    e.trainable = r.get_u8() != 0;
    uint32_t rank = r.get_u32();
    if (rank < 1 || rank > 3)
      throw CorruptionError(path + ": parameter '" + e.name +
                            "' has unsupported rank " + std::to_string(rank));
    for (uint32_t d = 0; d < rank; ++d)
      e.shape.push_back(static_cast<int64_t>(r.get_u32()));
    manifest.push_back(std::move(e));
  }
  for (const Entry& e : manifest) {
    Grid value(e.shape);
    for (double& v : value.flat()) v = r.get_f64();
    ckpt.params.add(e.name, std::move(value), e.trainable);
  }
  r.get_u32();  // checksum, verified above
  if (!r.at_end())
    throw CorruptionError(path + ": trailing bytes after checksum");
  return ckpt;
}

void load_into_model(Model& model, const Checkpoint& ckpt) {
  if (ckpt.params.size() != model.params.size())
    throw FormatError("load_into_model: checkpoint has " +
                      std::to_string(ckpt.params.size()) +
                      " parameters, model expects " +
                      std::to_string(model.params.size()));
  for (size_t i = 0; i < model.params.size(); ++i) {
    Param& p = model.params.at(i);
    if (!ckpt.params.has(p.name))
      throw FormatError("load_into_model: checkpoint lacks parameter '" +
                        p.name + "'");
    const Param& src = ckpt.params.get(p.name);
    if (!src.value.same_shape(p.value))
      throw FormatError("load_into_model: shape mismatch for '" + p.name +
                        "': checkpoint " + shape_str(src.value) + ", model " +
                        shape_str(p.value));
    if (src.trainable != p.trainable)
      throw FormatError("load_into_model: trainable flag mismatch for '" +
                        p.name + "'");
    p.value = src.value;
  }
}

uint32_t file_crc32(const std::string& path) {
  std::string buf = read_file_bytes(path);
  return crc32(buf);
}

}  // namespace dubkit
