// dubkit/crc32.h

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

#ifndef DUBKIT_CRC32_H_
#define DUBKIT_CRC32_H_

#include <cstddef>
#include <cstdint>
#include <string>

namespace dubkit {

// IEEE CRC-32 (reflected, polynomial 0xEDB88320), as used by gzip and zip.
uint32_t crc32(const void* data, size_t length, uint32_t seed = 0);
uint32_t crc32(const std::string& data, uint32_t seed = 0);

}  // namespace dubkit

#endif  // DUBKIT_CRC32_H_
