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

#include "buildstream/smote.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace buildstream {

std::string_view to_string(DistanceNormalization n) noexcept {
  return n == DistanceNormalization::MinMax ? "minmax" : "none";
}

void SmoteConfig::validate() const {
  if (k < 1) throw std::invalid_argument("smote k must be >= 1");
  if (percent % 100 != 0) {
    throw std::invalid_argument("smote percent must be a multiple of 100, got " +
                                std::to_string(percent));
  }
}

namespace {

struct ClassScale {
  std::vector<double> lo;
  std::vector<double> inv_range;  // 0 for constant features
};

ClassScale class_scale(const LabeledStream& pool, ClassLabel label,
                       DistanceNormalization normalization) {
  const std::size_t d = pool.schema().size();
  ClassScale s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  if (normalization == DistanceNormalization::None) return s;
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  std::fill(s.lo.begin(), s.lo.end(), std::numeric_limits<double>::infinity());
  for (const Instance& inst : pool) {
    if (inst.outcome != label) continue;
    for (std::size_t j = 0; j < d; ++j) {
      s.lo[j] = std::min(s.lo[j], inst.features[j]);
      hi[j] = std::max(hi[j], inst.features[j]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double range = hi[j] - s.lo[j];
    s.inv_range[j] = range > 0.0 ? 1.0 / range : 0.0;
  }
  return s;
}

double scaled_distance2(const Instance& a, const Instance& b, const ClassScale& s) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.features.size(); ++j) {
    const double diff = (a.features[j] - b.features[j]) * s.inv_range[j];
    sum += diff * diff;
  }
  return sum;
}

std::vector<std::size_t> nearest(const LabeledStream& pool, std::size_t target, std::size_t k,
                                 const std::vector<std::size_t>& members, const ClassScale& scale) {
  const ClassLabel label = pool[target].outcome;
  if (members.size() < k + 1) {
    throw SmoteError("class " + std::string(to_string(label)) + " has " +
                     std::to_string(members.size() - 1) + " neighbor candidates, k=" +
                     std::to_string(k) + " required");
  }
  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(members.size() - 1);
  for (std::size_t idx : members) {
    if (idx == target) continue;
    candidates.emplace_back(scaled_distance2(pool[target], pool[idx], scale), idx);
  }
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = candidates[i].second;
  return out;
}

std::vector<std::size_t> members_of(const LabeledStream& pool, ClassLabel label) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].outcome == label) members.push_back(i);
  }
  return members;
}

}  // namespace

std::vector<std::size_t> k_nearest_same_class(const LabeledStream& pool, std::size_t target,
                                              std::size_t k,
                                              DistanceNormalization normalization) {
  if (target >= pool.size()) throw std::out_of_range("target index outside pool");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const ClassLabel label = pool[target].outcome;
  return nearest(pool, target, k, members_of(pool, label), class_scale(pool, label, normalization));
}

Instance synthesize(const Instance& seed, const Instance& neighbor, double r, std::string id) {
  if (seed.outcome != neighbor.outcome) {
    throw std::invalid_argument("synthesize: seed '" + seed.id + "' and neighbor '" + neighbor.id +
                                "' belong to different classes");
  }
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("synthesize: r must lie in [0, 1]");
  if (seed.features.size() != neighbor.features.size()) {
    throw std::invalid_argument("synthesize: feature length mismatch");
  }
  Instance out;
  out.id = std::move(id);
  out.date = seed.date;
  out.outcome = seed.outcome;
  out.features.resize(seed.features.size());
  for (std::size_t j = 0; j < seed.features.size(); ++j) {
    const double a = seed.features[j];
    const double b = neighbor.features[j];
    // clamp away rounding so the result never leaves the parents' range
    out.features[j] = std::clamp(a + r * (b - a), std::min(a, b), std::max(a, b));
  }
  out.origin = SyntheticOrigin{seed.id, neighbor.id, r};
  return out;
}

SyntheticBatch generate_synthetic(const LabeledStream& stream, ClassLabel minority,
                                  const SmoteConfig& config, Rng& rng, std::string_view id_tag) {
  config.validate();
  SyntheticBatch batch;
  const std::size_t per_seed = config.percent / 100;
  if (per_seed == 0) return batch;

  const auto members = members_of(stream, minority);
  if (members.size() < std::max<std::size_t>(2, config.k + 1)) {
    throw SmoteError("class " + std::string(to_string(minority)) + " has " +
                     std::to_string(members.size()) + " instances, smote with k=" +
                     std::to_string(config.k) + " needs at least " +
                     std::to_string(std::max<std::size_t>(2, config.k + 1)));
  }
  const ClassScale scale = class_scale(stream, minority, config.normalization);

  batch.instances.reserve(members.size() * per_seed);
  for (std::size_t seed_idx : members) {
    const auto neighbors = nearest(stream, seed_idx, config.k, members, scale);
    for (std::size_t j = 1; j <= per_seed; ++j) {
      const std::size_t pick = neighbors[uniform_index(rng, neighbors.size())];
      const double r = uniform01(rng);
      batch.instances.push_back(synthesize(stream[seed_idx], stream[pick], r,
                                           stream[seed_idx].id + "~" + std::string(id_tag) + "." +
                                               std::to_string(j)));
    }
  }
  return batch;
}

LabeledStream smote_pass(const LabeledStream& stream, ClassLabel minority,
                         const SmoteConfig& config, Rng& rng, std::string_view id_tag) {
  SyntheticBatch batch = generate_synthetic(stream, minority, config, rng, id_tag);
  const std::size_t per_seed = config.percent / 100;

  std::vector<Instance> out;
  out.reserve(stream.size() + batch.instances.size());
  auto next = batch.instances.begin();
  for (const Instance& inst : stream) {
    out.push_back(inst);
    if (inst.outcome != minority) continue;
    for (std::size_t j = 0; j < per_seed; ++j) out.push_back(std::move(*next++));
  }
  return LabeledStream(stream.schema_ptr(), std::move(out));
}

LabeledStream double_smote(const LabeledStream& stream, unsigned percent,
                           const SmoteConfig& config) {
  SmoteConfig cfg = config;
  cfg.percent = percent;
  cfg.validate();
  const ClassCounts& counts = stream.class_counts();
  if (counts.success == 0 || counts.failure == 0) {
    throw SmoteError("double smote needs both classes present (success=" +
                     std::to_string(counts.success) +
                     ", failure=" + std::to_string(counts.failure) + ")");
  }
  auto minority_of = [](const ClassCounts& c) {
    return c.success < c.failure ? ClassLabel::Success : ClassLabel::Failure;
  };

  Rng first(derive_seed(cfg.seed, 1));
  LabeledStream once = smote_pass(stream, minority_of(counts), cfg, first, "s1");
  Rng second(derive_seed(cfg.seed, 2));
  LabeledStream twice = smote_pass(once, minority_of(once.class_counts()), cfg, second, "s2");
  return sort_by_date(std::move(twice));
}

}  // namespace buildstream
