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

#include "artconv/feature_io.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "artconv/error.h"

namespace artconv {

namespace {

constexpr char kMagic[4] = {'A', 'R', 'T', 'F'};
constexpr std::size_t kHeaderBytes = 12;

}  // namespace

std::vector<std::uint8_t> EncodeFeatures(const FeatureMatrix& f) {
  const auto rows = static_cast<std::uint32_t>(f.frames.rows());
  const auto cols = static_cast<std::uint32_t>(f.frames.cols());
  const std::size_t payload = static_cast<std::size_t>(rows) * cols * sizeof(float);
  std::vector<std::uint8_t> out(kHeaderBytes + payload);
  std::memcpy(out.data(), kMagic, 4);
  std::memcpy(out.data() + 4, &rows, 4);
  std::memcpy(out.data() + 8, &cols, 4);
  // FrameMatrix is row-major, so the storage order is the file order.
  if (payload > 0) std::memcpy(out.data() + kHeaderBytes, f.frames.data(), payload);
  return out;
}

FeatureMatrix DecodeFeatures(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DataError("bad magic bytes: not an ARTF feature file");
  }
  if (bytes.size() < kHeaderBytes) throw DataError("truncated feature header");
  std::uint32_t rows = 0, cols = 0;
  std::memcpy(&rows, bytes.data() + 4, 4);
  std::memcpy(&cols, bytes.data() + 8, 4);
  const std::size_t payload = static_cast<std::size_t>(rows) * cols * sizeof(float);
  if (bytes.size() - kHeaderBytes < payload) {
    throw DataError("truncated feature payload: expected " +
                    std::to_string(payload) + " bytes, found " +
                    std::to_string(bytes.size() - kHeaderBytes));
  }
  FeatureMatrix f;
  f.frames.resize(rows, cols);
  if (payload > 0) std::memcpy(f.frames.data(), bytes.data() + kHeaderBytes, payload);
  return f;
}

void WriteFeatures(const FeatureMatrix& f, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeFeatures(f);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

FeatureMatrix ReadFeatures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing feature file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return DecodeFeatures(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace artconv
