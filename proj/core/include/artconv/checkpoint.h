// Copyright 2026 The artconv Authors.
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

#ifndef ARTCONV_CHECKPOINT_H_
#define ARTCONV_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "artconv/net.h"

namespace artconv {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, little-endian:
//   "ARTM" | u32 version | u32 input | u32 hidden | u32 embedding
//   then per tensor, in TensorLayout order followed by the two running
//   normalization statistics:
//     u32 name length | name bytes | u32 rank | rank x u32 dims |
//     f64 payload (row-major)
std::vector<std::uint8_t> EncodeCheckpoint(const ModelParams& params);
ModelParams DecodeCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams LoadCheckpoint(const std::filesystem::path& path);

}  // namespace artconv

#endif  // ARTCONV_CHECKPOINT_H_
