// Copyright 2026, The buildstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BUILDSTREAM_TESTS_TEST_UTIL_HPP_
#define BUILDSTREAM_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "buildstream/stream.hpp"

namespace buildstream::testing {

inline std::shared_ptr<const StreamSchema> schema_of(std::size_t dims) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dims; ++i) names.push_back("m" + std::to_string(i));
  return std::make_shared<const StreamSchema>(std::move(names));
}

inline Instance make_instance(std::string id, std::vector<double> features, ClassLabel label,
                              std::int64_t day = 0) {
  Instance inst;
  inst.id = std::move(id);
  inst.date = std::chrono::sys_days{std::chrono::year{2010} / 1 / 1} + std::chrono::days{day};
  inst.features = std::move(features);
  inst.outcome = label;
  return inst;
}

// Stream of 1-d points, ids "i0", "i1", ...
inline LabeledStream points_1d(const std::vector<double>& xs, ClassLabel label) {
  std::vector<Instance> v;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v.push_back(make_instance("i" + std::to_string(i), {xs[i]}, label, static_cast<std::int64_t>(i)));
  }
  return LabeledStream(schema_of(1), std::move(v));
}

// Batch decision-stump oracle: exhaustive search over every attribute and
// every midpoint between consecutive sorted values, majority label on each
// side. Independent of the incremental learner.
struct Stump {
  std::size_t attribute = 0;
  double threshold = 0.0;
  double accuracy = 0.0;
};

inline Stump best_stump(const LabeledStream& stream) {
  Stump best;
  const std::size_t n = stream.size();
  const std::size_t total_s = stream.class_counts().success;
  for (std::size_t a = 0; a < stream.schema().size(); ++a) {
    std::vector<std::pair<double, bool>> col;
    col.reserve(n);
    for (const auto& inst : stream) col.emplace_back(inst.features[a], inst.outcome == ClassLabel::Success);
    std::sort(col.begin(), col.end());
    std::size_t left_s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_s += col[i].second;
      if (col[i].first == col[i + 1].first) continue;
      const std::size_t left_n = i + 1;
      const std::size_t left_f = left_n - left_s;
      const std::size_t right_s = total_s - left_s;
      const std::size_t right_f = (n - left_n) - right_s;
      const double acc = static_cast<double>(std::max(left_s, left_f) + std::max(right_s, right_f)) /
                         static_cast<double>(n);
      if (acc > best.accuracy) best = {a, 0.5 * (col[i].first + col[i + 1].first), acc};
    }
  }
  return best;
}

}  // namespace buildstream::testing

#endif  // BUILDSTREAM_TESTS_TEST_UTIL_HPP_
