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

#include "artconv/checkpoint.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "artconv/error.h"

namespace artconv {

namespace {

constexpr char kMagic[4] = {'A', 'R', 'T', 'M'};
constexpr std::string_view kRunningMeanName = "bn.running_mean";
constexpr std::string_view kRunningVarName = "bn.running_var";

class Writer {
 public:
  void Bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  void U32(std::uint32_t v) { Bytes(&v, 4); }
  void F64(double v) { Bytes(&v, 8); }

  void Tensor(std::string_view name, const Eigen::Ref<const Eigen::MatrixXd>& t,
              bool vector) {
    U32(static_cast<std::uint32_t>(name.size()));
    Bytes(name.data(), name.size());
    if (vector) {
      U32(1);
      U32(static_cast<std::uint32_t>(t.size()));
    } else {
      U32(2);
      U32(static_cast<std::uint32_t>(t.rows()));
      U32(static_cast<std::uint32_t>(t.cols()));
    }
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) F64(t(r, c));
    }
  }

  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void Bytes(void* dst, std::size_t n) {
    if (pos_ + n > bytes_.size()) throw DataError("truncated checkpoint");
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t U32() {
    std::uint32_t v;
    Bytes(&v, 4);
    return v;
  }
  double F64() {
    double v;
    Bytes(&v, 8);
    return v;
  }

  // Reads the next tensor, checking its name and shape, into `dst`.
  void Tensor(std::string_view expected_name, Eigen::Ref<Eigen::MatrixXd> dst,
              bool vector) {
    const std::uint32_t name_len = U32();
    if (name_len > 256) throw DataError("corrupt checkpoint tensor name");
    std::string name(name_len, '\0');
    Bytes(name.data(), name_len);
    if (name != expected_name) {
      throw DataError("checkpoint tensor \"" + name + "\" where \"" +
                      std::string(expected_name) + "\" was expected");
    }
    const std::uint32_t rank = U32();
    const bool shape_ok =
        vector ? rank == 1 && U32() == dst.size()
               : rank == 2 && U32() == dst.rows() && U32() == dst.cols();
    if (!shape_ok) {
      throw DataError("checkpoint tensor \"" + name + "\" has the wrong shape");
    }
    for (Eigen::Index r = 0; r < dst.rows(); ++r) {
      for (Eigen::Index c = 0; c < dst.cols(); ++c) dst(r, c) = F64();
    }
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const ModelParams& params) {
  Writer w;
  w.Bytes(kMagic, 4);
  w.U32(kCheckpointVersion);
  const ModelDims& d = params.dims();
  w.U32(static_cast<std::uint32_t>(d.input));
  w.U32(static_cast<std::uint32_t>(d.hidden));
  w.U32(static_cast<std::uint32_t>(d.embedding));
  for (const TensorSpec& s : params.weights.layout()) {
    w.Tensor(s.name, params.weights[s.id], s.cols == 1);
  }
  w.Tensor(kRunningMeanName, params.norm_running_mean, true);
  w.Tensor(kRunningVarName, params.norm_running_var, true);
  return w.Take();
}

ModelParams DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("bad magic bytes: not an ARTM checkpoint");
  }
  const std::uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  ModelDims dims;
  dims.input = static_cast<int>(r.U32());
  dims.hidden = static_cast<int>(r.U32());
  dims.embedding = static_cast<int>(r.U32());
  if (dims.input < 1 || dims.hidden < 1 || dims.embedding < 1 ||
      dims.input > 1 << 16 || dims.hidden > 1 << 16 || dims.embedding > 1 << 16) {
    throw DataError("checkpoint has invalid dimensions");
  }
  ModelParams params;
  params.weights = TensorBuffer(dims);
  for (const TensorSpec& s : params.weights.layout()) {
    r.Tensor(s.name, params.weights[s.id], s.cols == 1);
  }
  params.norm_running_mean.resize(2 * dims.hidden);
  params.norm_running_var.resize(2 * dims.hidden);
  r.Tensor(kRunningMeanName, params.norm_running_mean, true);
  r.Tensor(kRunningVarName, params.norm_running_var, true);
  if (!r.AtEnd()) throw DataError("trailing bytes after checkpoint");
  if (!params.AllFinite()) throw DataError("checkpoint holds non-finite values");
  return params;
}

void SaveCheckpoint(const ModelParams& params, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeCheckpoint(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

ModelParams LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return DecodeCheckpoint(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace artconv
