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

#ifndef BUILDSTREAM_HOEFFDING_TREE_HPP_
#define BUILDSTREAM_HOEFFDING_TREE_HPP_

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "buildstream/stream.hpp"

namespace buildstream {

struct SplitConfig {
  double delta = 1e-7;        // split confidence complement
  double tau = 0.05;          // tie threshold
  std::size_t grace_period = 200;
  double range = 1.0;         // R: range of information gain for two classes
  std::size_t candidate_thresholds = 10;

  // Throws std::invalid_argument.
  void validate() const;
};

// epsilon = sqrt(R^2 ln(1/delta) / (2n)).
// Throws std::invalid_argument unless R > 0, 0 < delta <= 1 and n >= 1.
double hoeffding_bound(double range, double delta, std::size_t n);

using ClassWeights = std::array<double, kNumClasses>;  // indexed by class_index()

// Shannon entropy in bits. Zero for an empty distribution.
double entropy(const ClassWeights& counts);

// entropy(parent) minus the size-weighted entropy of the two sides.
double split_gain(const ClassWeights& parent, const ClassWeights& left, const ClassWeights& right);

// Streaming mean/variance (Welford) with observed min and max.
class GaussianEstimator {
 public:
  void add(double x) noexcept;

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double m2() const noexcept { return m2_; }
  double variance() const noexcept;  // sample variance, 0 below two points
  double stddev() const noexcept;
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  // Estimated number of observations <= t: 0 below the observed minimum,
  // all at or above the observed maximum, normal CDF mass in between.
  double weight_at_or_below(double t) const noexcept;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

// Sufficient statistics of a learning leaf. Nothing here grows with the
// number of instances seen.
class LeafStats {
 public:
  explicit LeafStats(std::size_t num_attributes);

  void add(std::span<const double> features, ClassLabel label);

  std::size_t n() const noexcept { return n_; }
  const ClassWeights& class_counts() const noexcept { return class_counts_; }
  std::size_t num_attributes() const noexcept { return observers_.size(); }
  bool is_pure() const noexcept;

  const GaussianEstimator& estimator(std::size_t attribute, ClassLabel label) const {
    return observers_.at(attribute)[class_index(label)];
  }
  double min(std::size_t attribute) const;
  double max(std::size_t attribute) const;

  // `count` equally spaced interior points of [min, max]; empty when the
  // attribute has not varied.
  std::vector<double> candidate_thresholds(std::size_t attribute, std::size_t count) const;

 private:
  std::size_t n_ = 0;
  ClassWeights class_counts_{};
  std::vector<std::array<GaussianEstimator, kNumClasses>> observers_;
};

// Information gain of `attribute <= threshold`, side class counts estimated
// from the per-class Gaussian summaries. Clamped to [0, 1]; 0 when n < 2.
double info_gain(const LeafStats& stats, std::size_t attribute, double threshold);

struct SplitCandidate {
  std::size_t attribute = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

struct SplitDecision {
  bool split = false;
  std::optional<SplitCandidate> best;       // highest-gain attribute
  std::optional<SplitCandidate> runner_up;  // best of the remaining attributes
  double epsilon = 0.0;
  double gain_difference = 0.0;
};

// The Hoeffding split test: the leader is significantly better than the
// runner-up, or the bound is already below the tie threshold.
constexpr bool hoeffding_split_test(double best_gain, double runner_up_gain, double epsilon,
                                    double tau) noexcept {
  return best_gain - runner_up_gain > epsilon || epsilon < tau;
}

// Splits iff best.gain > 0 and hoeffding_split_test passes. Pure leaves
// never split.
SplitDecision attempt_split(const LeafStats& leaf, const SplitConfig& config);

struct SplitEvent {
  std::size_t node = 0;
  std::size_t attribute = 0;
  double threshold = 0.0;
  std::size_t n = 0;
  double best_gain = 0.0;
  double runner_up_gain = 0.0;
  double epsilon = 0.0;
};

struct Prediction {
  ClassLabel label = ClassLabel::Success;
  ClassWeights scores{0.5, 0.5};  // indexed by class_index()

  double score(ClassLabel c) const noexcept { return scores[class_index(c)]; }
};

struct TreeStats {
  std::size_t depth = 0;
  std::size_t leaves = 0;
  std::size_t internal_nodes = 0;

  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

// Incremental binary decision tree over numeric attributes.
//
// Single writer: learn_one mutates; predict on an idle model may be called
// from several threads. Copying yields an independent model.
class HoeffdingModel {
 public:
  static constexpr std::size_t kRoot = 0;
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct LeafNode {
    LeafStats stats;
    std::size_t seen_at_last_check = 0;
  };
  struct SplitNode {
    std::size_t attribute = 0;
    double threshold = 0.0;
    std::size_t left = kNone;   // attribute <= threshold
    std::size_t right = kNone;  // attribute > threshold
  };
  struct Node {
    std::variant<LeafNode, SplitNode> content;
    std::size_t depth = 0;

    bool is_leaf() const noexcept { return std::holds_alternative<LeafNode>(content); }
    const LeafNode& leaf() const { return std::get<LeafNode>(content); }
    const SplitNode& split() const { return std::get<SplitNode>(content); }
  };

  explicit HoeffdingModel(std::size_t num_attributes, SplitConfig config = {});

  std::optional<SplitEvent> learn_one(std::span<const double> features, ClassLabel label);
  std::optional<SplitEvent> learn_one(const Instance& instance) {
    return learn_one(instance.features, instance.outcome);
  }

  // Laplace-smoothed class frequencies of the reached leaf; ties go to
  // success.
  Prediction predict(std::span<const double> features) const;

  // Index of the leaf `features` is routed to.
  std::size_t route(std::span<const double> features) const;

  // Replaces a leaf with a split and two empty leaves. Used by learn_one and
  // for building trees by hand. Returns {left, right}.
  std::pair<std::size_t, std::size_t> split_leaf(std::size_t leaf, std::size_t attribute,
                                                 double threshold);

  // Back to a single empty leaf; config and counters other than
  // instances_learned are kept.
  void reset();

  TreeStats stats() const;
  std::span<const Node> nodes() const noexcept { return nodes_; }
  const SplitConfig& config() const noexcept { return config_; }
  std::size_t num_attributes() const noexcept { return num_attributes_; }

  std::size_t instances_learned() const noexcept { return instances_learned_; }
  std::size_t split_events() const noexcept { return split_events_; }
  std::size_t split_checks() const noexcept { return split_checks_; }
  std::size_t resets() const noexcept { return resets_; }

 private:
  SplitConfig config_;
  std::size_t num_attributes_;
  std::vector<Node> nodes_;
  std::size_t instances_learned_ = 0;
  std::size_t split_events_ = 0;
  std::size_t split_checks_ = 0;
  std::size_t resets_ = 0;
};

struct DotExport {
  std::string text;
  TreeStats stats;
};

// Graphviz digraph: internal nodes `name ≤ threshold`, leaves with majority
// class and counts. Names come from `schema` when given, `x<i>` otherwise.
DotExport export_dot(const HoeffdingModel& model, const StreamSchema* schema = nullptr);

// {"depth":..,"leaves":..,"internal_nodes":..,"instances_learned":..}
std::string tree_stats_json(const HoeffdingModel& model);

}  // namespace buildstream

#endif  // BUILDSTREAM_HOEFFDING_TREE_HPP_
