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

#include "buildstream/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "buildstream/random.hpp"

namespace buildstream {

void GenSpec::validate(std::size_t num_features) const {
  if (n_instances() == 0) throw std::invalid_argument("gen: stream must not be empty");
  if (!(overlap > 0.0) || !std::isfinite(overlap)) throw std::invalid_argument("gen: overlap must be > 0");
  for (std::size_t f : informative) {
    if (f >= num_features) {
      throw std::invalid_argument("gen: informative feature " + std::to_string(f) +
                                  " outside schema of " + std::to_string(num_features));
    }
  }
  if (shift_point && *shift_point > n_instances()) {
    throw std::invalid_argument("gen: shift point beyond stream length");
  }
  if (!(post_shift_success_probability >= 0.0 && post_shift_success_probability <= 1.0)) {
    throw std::invalid_argument("gen: post-shift success probability must lie in [0, 1]");
  }
  if (step_seconds < 1) throw std::invalid_argument("gen: date step must be >= 1 second");
}

std::vector<std::size_t> first_features(std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = i;
  return out;
}

namespace {

void shuffle(std::vector<ClassLabel>& v, std::size_t begin, std::size_t end, Rng& rng) {
  for (std::size_t i = end; i > begin + 1; --i) {
    const std::size_t j = begin + uniform_index(rng, i - begin);
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<ClassLabel> make_labels(const GenSpec& spec, Rng& rng) {
  const std::size_t n = spec.n_instances();
  const std::size_t shift = spec.shift_point.value_or(n);
  const std::size_t post_len = n - shift;

  // successes placed after the shift, within what the exact counts permit
  std::size_t post_success = 0;
  if (post_len > 0) {
    const auto wanted = static_cast<std::size_t>(
        std::llround(spec.post_shift_success_probability * static_cast<double>(post_len)));
    std::size_t lo = 0;
    if (spec.success_count > shift) lo = std::max(lo, spec.success_count - shift);
    if (post_len > spec.failure_count) lo = std::max(lo, post_len - spec.failure_count);
    const std::size_t hi = std::min(post_len, spec.success_count);
    post_success = std::clamp(wanted, lo, hi);
  }
  const std::size_t pre_success = spec.success_count - post_success;

  std::vector<ClassLabel> labels(n, ClassLabel::Failure);
  std::fill_n(labels.begin(), pre_success, ClassLabel::Success);
  std::fill_n(labels.begin() + static_cast<std::ptrdiff_t>(shift), post_success,
              ClassLabel::Success);
  shuffle(labels, 0, shift, rng);
  shuffle(labels, shift, n, rng);
  return labels;
}

}  // namespace

LabeledStream generate_stream(const GenSpec& spec, std::shared_ptr<const StreamSchema> schema) {
  if (!schema) schema = std::make_shared<const StreamSchema>(StreamSchema::build_metrics());
  const std::size_t d = schema->size();
  spec.validate(d);

  std::vector<bool> is_informative(d, false);
  for (std::size_t f : spec.informative) is_informative[f] = true;

  Rng label_rng(derive_seed(spec.seed, 0));
  Rng feature_rng(derive_seed(spec.seed, 1));
  const std::vector<ClassLabel> labels = make_labels(spec, label_rng);

  std::vector<Instance> instances;
  instances.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Instance inst;
    char id[32];
    std::snprintf(id, sizeof id, "b%05zu", i + 1);
    inst.id = id;
    inst.date = spec.start + std::chrono::seconds{spec.step_seconds * static_cast<std::int64_t>(i)};
    inst.outcome = labels[i];
    inst.features.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double scale = std::pow(10.0, static_cast<double>(j % 4));
      double z = standard_normal(feature_rng);
      if (is_informative[j] && inst.outcome == ClassLabel::Success) z += spec.overlap;
      inst.features[j] = scale * z;
    }
    instances.push_back(std::move(inst));
  }
  return LabeledStream(std::move(schema), std::move(instances));
}

}  // namespace buildstream
