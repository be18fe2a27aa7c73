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

#ifndef ARTCONV_GRADCHECK_H_
#define ARTCONV_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artconv/net.h"

namespace artconv {

struct GradCheckOptions {
  int sequence_length = 7;
  int pairs = 2;
  double epsilon = 1e-5;
  double l1_coeff = 1e-3;
  double dropout_rate = 0.2;
  double init_stddev = 0.5;
  // Denominator floor of the relative error.
  double floor = 1e-6;
};

struct TensorCheck {
  std::string name;
  std::size_t entries = 0;
  double max_relative_error = 0.0;
  double max_abs_gradient = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_relative_error = 0.0;
  bool passed(double tolerance = 1e-4) const { return max_relative_error < tolerance; }
};

// relative error = |a - n| / max(|a| + |n|, floor)
double RelativeError(double analytic, double numeric, double floor);

// Compares the analytic gradient of a random train-mode batch with fixed
// dropout masks against central differences for every trainable scalar. Pairs mix equal and unequal
// lengths, and one pair carries padding rows.
GradCheckReport GradientCheck(const ModelDims& dims, std::uint64_t seed,
                              const GradCheckOptions& options = {});

void to_json(nlohmann::json& j, const TensorCheck& t);
void to_json(nlohmann::json& j, const GradCheckReport& r);

}  // namespace artconv

#endif  // ARTCONV_GRADCHECK_H_
