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

#ifndef BUILDSTREAM_SMOTE_HPP_
#define BUILDSTREAM_SMOTE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "buildstream/errors.hpp"
#include "buildstream/random.hpp"
#include "buildstream/stream.hpp"

namespace buildstream {

class SmoteError : public DataError {
 public:
  using DataError::DataError;
};

enum class DistanceNormalization { MinMax, None };

std::string_view to_string(DistanceNormalization n) noexcept;

struct SmoteConfig {
  std::size_t k = 5;
  unsigned percent = 900;  // multiple of 100
  std::uint64_t seed = 1;
  DistanceNormalization normalization = DistanceNormalization::MinMax;

  // Throws std::invalid_argument.
  void validate() const;
};

// Synthetic instances from one oversampling pass, in generation order.
// Each instance's origin carries its multiplier.
struct SyntheticBatch {
  std::vector<Instance> instances;
};

// Indices into `pool` of the k instances of the target's class closest to
// pool[target] (excluding the target itself), nearest first. Distances are
// Euclidean, on features min-max scaled over the target's class when
// normalization is MinMax. Equal distances rank the lower index first.
// Throws SmoteError if the class has fewer than k other members.
std::vector<std::size_t> k_nearest_same_class(const LabeledStream& pool, std::size_t target,
                                              std::size_t k,
                                              DistanceNormalization normalization);

// seed + r * (neighbor - seed) in raw feature space.
// Throws std::invalid_argument on class mismatch or r outside [0, 1].
Instance synthesize(const Instance& seed, const Instance& neighbor, double r, std::string id);

// percent/100 synthetic instances per member of `minority`, each toward a
// uniformly drawn one of its k neighbors. Synthetic ids are
// `<seed id>~<tag>.<j>`.
SyntheticBatch generate_synthetic(const LabeledStream& stream, ClassLabel minority,
                                  const SmoteConfig& config, Rng& rng,
                                  std::string_view id_tag = "s");

// Originals plus the batch; each seed's synthetic instances follow it
// directly (and share its date).
LabeledStream smote_pass(const LabeledStream& stream, ClassLabel minority,
                         const SmoteConfig& config, Rng& rng, std::string_view id_tag = "s");

// Two passes at `percent`: first the current minority class (failure on a
// tie), then whichever class is the minority afterwards. The result is
// re-sorted by date. Randomness comes from config.seed only.
LabeledStream double_smote(const LabeledStream& stream, unsigned percent,
                           const SmoteConfig& config);

}  // namespace buildstream

#endif  // BUILDSTREAM_SMOTE_HPP_
