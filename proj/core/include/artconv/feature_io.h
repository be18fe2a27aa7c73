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

#ifndef ARTCONV_FEATURE_IO_H_
#define ARTCONV_FEATURE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "artconv/dsp.h"

namespace artconv {

// Feature file layout, all little-endian:
//   "ARTF" | u32 rows | u32 cols | rows*cols f32, row-major
std::vector<std::uint8_t> EncodeFeatures(const FeatureMatrix& f);
FeatureMatrix DecodeFeatures(std::span<const std::uint8_t> bytes);

void WriteFeatures(const FeatureMatrix& f, const std::filesystem::path& path);
FeatureMatrix ReadFeatures(const std::filesystem::path& path);

}  // namespace artconv

#endif  // ARTCONV_FEATURE_IO_H_
