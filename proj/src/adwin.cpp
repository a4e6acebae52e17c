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

#include "buildstream/adwin.hpp"

#include <cmath>
#include <stdexcept>

namespace buildstream {

double cut_threshold(double m, double delta_prime, std::size_t n_checks) {
  if (!(m > 0.0)) throw std::invalid_argument("cut threshold needs m > 0");
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw std::invalid_argument("cut threshold needs 0 < delta' < 1");
  }
  if (n_checks == 0) throw std::invalid_argument("cut threshold needs n_checks >= 1");
  return std::sqrt(std::log(4.0 * static_cast<double>(n_checks) / delta_prime) / (2.0 * m));
}

AdwinDetector::AdwinDetector(double delta_prime, std::size_t max_buckets_per_level)
    : delta_prime_(delta_prime), max_buckets_(max_buckets_per_level) {
  if (!(delta_prime_ > 0.0 && delta_prime_ < 1.0)) {
    throw std::invalid_argument("adwin delta' must lie in (0, 1)");
  }
  if (max_buckets_ < 2) throw std::invalid_argument("adwin needs at least 2 buckets per level");
}

std::size_t AdwinDetector::bucket_count() const noexcept {
  std::size_t n = 0;
  for (const auto& level : levels_) n += level.size();
  return n;
}

void AdwinDetector::reset() {
  levels_.clear();
  total_ = 0.0;
  width_ = 0;
}

DriftReport AdwinDetector::add_observation(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("adwin observations must lie in [0, 1]");
  }
  if (levels_.empty()) levels_.emplace_back();
  levels_[0].push_front(Bucket{value, 1});
  total_ += value;
  ++width_;
  compress();

  DriftReport report;
  const std::size_t before = width_;
  while (cut_once()) {
  }
  report.instances_dropped = before - width_;
  report.detected = report.instances_dropped > 0;
  if (report.detected) ++detections_;
  report.window_mean_after = mean();
  return report;
}

void AdwinDetector::compress() {
  for (std::size_t level = 0; level < levels_.size(); ++level) {
    if (levels_[level].size() <= max_buckets_) break;
    Bucket older = levels_[level].back();
    levels_[level].pop_back();
    Bucket old = levels_[level].back();
    levels_[level].pop_back();
    if (level + 1 == levels_.size()) levels_.emplace_back();
    levels_[level + 1].push_front(Bucket{older.sum + old.sum, older.count + old.count});
  }
}

bool AdwinDetector::cut_once() {
  const std::size_t buckets = bucket_count();
  if (buckets < 2) return false;
  const std::size_t n_checks = buckets - 1;

  double head_sum = 0.0;
  std::size_t head_n = 0;
  std::size_t seen = 0;
  for (std::size_t level = levels_.size(); level-- > 0;) {
    const auto& lv = levels_[level];
    for (auto it = lv.rbegin(); it != lv.rend(); ++it) {
      head_sum += it->sum;
      head_n += it->count;
      if (++seen == buckets) return false;  // tail would be empty
      const std::size_t tail_n = width_ - head_n;
      const double tail_sum = total_ - head_sum;
      const double n0 = static_cast<double>(head_n);
      const double n1 = static_cast<double>(tail_n);
      const double m = 2.0 / (1.0 / n0 + 1.0 / n1);
      const double diff = std::fabs(head_sum / n0 - tail_sum / n1);
      if (diff >= cut_threshold(m, delta_prime_, n_checks)) {
        drop_oldest();
        return true;
      }
    }
  }
  return false;
}

void AdwinDetector::drop_oldest() {
  while (!levels_.empty() && levels_.back().empty()) levels_.pop_back();
  if (levels_.empty()) return;
  const Bucket b = levels_.back().back();
  levels_.back().pop_back();
  width_ -= b.count;
  while (!levels_.empty() && levels_.back().empty()) levels_.pop_back();
  // recompute rather than subtract, keeping the total exact to the buckets
  total_ = 0.0;
  for (const auto& level : levels_) {
    for (const Bucket& bucket : level) total_ += bucket.sum;
  }
}

}  // namespace buildstream
