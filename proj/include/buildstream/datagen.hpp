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

#ifndef BUILDSTREAM_DATAGEN_HPP_
#define BUILDSTREAM_DATAGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "buildstream/stream.hpp"

namespace buildstream {

// Synthetic build streams. Each feature is drawn from a class-conditional
// Gaussian; on the informative features the success mean sits `overlap`
// standard deviations above the failure mean, the rest are pure noise.
// Features are then scaled by a per-column factor (1, 10, 100, 1000, ...)
// so that columns differ in magnitude the way raw metrics do. This says
// nothing about the marginals of real build metrics.
struct GenSpec {
  std::size_t success_count = 127;
  std::size_t failure_count = 72;
  double overlap = 1.0;
  std::vector<std::size_t> informative = {0, 1, 2, 3, 4};
  // Labels from `shift_point` on have success probability
  // `post_shift_success_probability` (as far as the exact class counts
  // allow); before it the remaining labels are shuffled uniformly.
  std::optional<std::size_t> shift_point;
  double post_shift_success_probability = 0.75;
  std::uint64_t seed = 1;
  Timestamp start = std::chrono::sys_days{std::chrono::year{2008} / 6 / 1};
  std::int64_t step_seconds = 3600;

  std::size_t n_instances() const noexcept { return success_count + failure_count; }

  // Throws std::invalid_argument.
  void validate(std::size_t num_features) const;
};

// First `count` columns informative.
std::vector<std::size_t> first_features(std::size_t count);

// Dates strictly increase; ids are `b00001`, `b00002`, ...
LabeledStream generate_stream(const GenSpec& spec,
                              std::shared_ptr<const StreamSchema> schema = nullptr);

}  // namespace buildstream

#endif  // BUILDSTREAM_DATAGEN_HPP_
