// src/corpus_io.cc

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

#include "dubkit/corpus_io.h"

#include <cstring>

#include "dubkit/binio.h"
#include "dubkit/crc32.h"

namespace dubkit {

namespace {

void put_grid_f32(std::string& buf, const Grid& g) {
  for (double v : g.flat()) put_f32(buf, static_cast<float>(v));
}

Grid get_grid_f32(ByteReader& r, std::vector<int64_t> shape) {
  Grid g(std::move(shape));
  for (double& v : g.flat()) v = static_cast<double>(r.get_f32());
  return g;
}

std::string encode_record(const Sample& s) {
  std::string rec;
  put_u64(rec, s.id);
  put_u32(rec, s.speaker_id);
  put_u32(rec, static_cast<uint32_t>(s.mel.bins()));
  put_u32(rec, static_cast<uint32_t>(s.mel.frames()));
  put_u32(rec, static_cast<uint32_t>(s.visual.video_frames()));
  put_u32(rec, static_cast<uint32_t>(s.text.tokens.size()));
  put_grid_f32(rec, s.mel.values);
  put_grid_f32(rec, s.visual.face);
  put_grid_f32(rec, s.visual.lip);
  for (double v : s.latent_prosody) put_f32(rec, static_cast<float>(v));
  for (uint16_t tok : s.text.tokens) put_u16(rec, tok);
  put_u32(rec, crc32(rec));
  return rec;
}

Sample decode_record(ByteReader& r, const std::string& buf, size_t index) {
  size_t start = r.pos();
  Sample s;
  s.id = r.get_u64();
  s.speaker_id = r.get_u32();
  int64_t bins = r.get_u32();
  int64_t t_mel = r.get_u32();
  int64_t t_v = r.get_u32();
  int64_t n_tokens = r.get_u32();
  if (bins <= 0 || t_mel <= 0 || t_v <= 0 || n_tokens < 0)
    throw CorruptionError(r.origin() + ": record " + std::to_string(index) +
                          " has bad dimensions");
  s.mel = MelGrid(get_grid_f32(r, {bins, t_mel}));
  s.visual.face = get_grid_f32(r, {kFaceChannels, t_v});
  s.visual.lip = get_grid_f32(r, {kLipChannels, t_v});
  s.latent_prosody.resize(static_cast<size_t>(t_mel));
  for (double& v : s.latent_prosody) v = static_cast<double>(r.get_f32());
  s.text.tokens.resize(static_cast<size_t>(n_tokens));
  for (auto& tok : s.text.tokens) tok = r.get_u16();
  size_t body_end = r.pos();
  uint32_t stored = r.get_u32();
  uint32_t expect = crc32(buf.data() + start, body_end - start);
  if (stored != expect)
    throw CorruptionError(r.origin() + ": checksum mismatch in record " +
                          std::to_string(index));
  return s;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::string buf;
  buf.append(kCorpusMagic, 4);
  put_u32(buf, kCorpusVersion);
  put_u64(buf, static_cast<uint64_t>(corpus.size()));
  for (const Sample& s : corpus) buf.append(encode_record(s));
  write_file_bytes(path, buf);
}

Corpus load_corpus(const std::string& path) {
  std::string buf = read_file_bytes(path);
  ByteReader r(buf, path);
  std::string magic = r.get_bytes(4);
  if (std::memcmp(magic.data(), kCorpusMagic, 4) != 0)
    throw FormatError(path + ": not a corpus file (bad magic)");
  uint32_t version = r.get_u32();
  if (version != kCorpusVersion)
    throw FormatError(path + ": unsupported corpus version " +
                      std::to_string(version));
  uint64_t count = r.get_u64();
  Corpus corpus;
  corpus.reserve(count);
  for (uint64_t i = 0; i < count; ++i)
    corpus.push_back(decode_record(r, buf, static_cast<size_t>(i)));
  if (!r.at_end())
    throw CorruptionError(path + ": trailing bytes after last record");
  return corpus;
}

}  // namespace dubkit
