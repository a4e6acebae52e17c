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

#ifndef BUILDSTREAM_ADWIN_HPP_
#define BUILDSTREAM_ADWIN_HPP_

#include <cstddef>
#include <deque>
#include <vector>

namespace buildstream {

// sqrt( ln(4 * n_checks / delta_prime) / (2m) ), m the harmonic mean of the
// two sub-window lengths. Throws std::invalid_argument unless m > 0,
// 0 < delta_prime < 1 and n_checks >= 1.
double cut_threshold(double m, double delta_prime, std::size_t n_checks);

struct DriftReport {
  bool detected = false;
  std::size_t instances_dropped = 0;
  double window_mean_after = 0.0;
};

// Adaptive sliding window over values in [0, 1], stored as an exponential
// histogram: level i holds buckets of 2^i observations, at most
// max_buckets_per_level per level. Copy to branch.
class AdwinDetector {
 public:
  explicit AdwinDetector(double delta_prime = 0.002, std::size_t max_buckets_per_level = 5);

  // Appends `value`, then drops the oldest bucket for as long as some
  // split of the window at a bucket boundary has sub-window means at least
  // cut_threshold apart. Throws std::invalid_argument outside [0, 1].
  DriftReport add_observation(double value);

  std::size_t width() const noexcept { return width_; }
  double total() const noexcept { return total_; }
  double mean() const noexcept { return width_ ? total_ / static_cast<double>(width_) : 0.0; }
  std::size_t bucket_count() const noexcept;
  std::size_t detections() const noexcept { return detections_; }
  double delta_prime() const noexcept { return delta_prime_; }
  std::size_t max_buckets_per_level() const noexcept { return max_buckets_; }

  void reset();

 private:
  struct Bucket {
    double sum = 0.0;
    std::size_t count = 0;
  };

  void compress();
  bool cut_once();
  void drop_oldest();

  double delta_prime_;
  std::size_t max_buckets_;
  // levels_[i]: front = newest, back = oldest. Every bucket on level i is
  // newer than every bucket on level i + 1.
  std::vector<std::deque<Bucket>> levels_;
  double total_ = 0.0;
  std::size_t width_ = 0;
  std::size_t detections_ = 0;
};

}  // namespace buildstream

#endif  // BUILDSTREAM_ADWIN_HPP_
