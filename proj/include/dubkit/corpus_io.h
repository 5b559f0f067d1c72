// dubkit/corpus_io.h

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

#ifndef DUBKIT_CORPUS_IO_H_
#define DUBKIT_CORPUS_IO_H_

#include <string>

#include "dubkit/corpus.h"

namespace dubkit {

// Container layout (all integers little-endian):
//   "SVLB" | u32 version | u64 record count
//   repeated records:
//     u64 id | u32 speaker | u32 bins | u32 mel frames | u32 video frames
//     | u32 token count | f32 mel payload | f32 face | f32 lip
//     | f32 prosody contour | u16 tokens | u32 crc32 of the record bytes
inline constexpr char kCorpusMagic[5] = "SVLB";
inline constexpr uint32_t kCorpusVersion = 1;

void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace dubkit

#endif  // DUBKIT_CORPUS_IO_H_
