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

#include "buildstream/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace buildstream {

void SplitConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  if (grace_period < 1) throw std::invalid_argument("grace period must be >= 1");
  if (!(range > 0.0)) throw std::invalid_argument("range R must be > 0");
  if (candidate_thresholds < 1) throw std::invalid_argument("candidate thresholds must be >= 1");
}

double hoeffding_bound(double range, double delta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("hoeffding bound undefined for n = 0");
  if (!(range > 0.0)) throw std::invalid_argument("hoeffding bound needs R > 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("hoeffding bound needs 0 < delta <= 1");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

double entropy(const ClassWeights& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double split_gain(const ClassWeights& parent, const ClassWeights& left, const ClassWeights& right) {
  const double nl = left[0] + left[1];
  const double nr = right[0] + right[1];
  const double n = nl + nr;
  if (n <= 0.0) return 0.0;
  return entropy(parent) - (nl / n) * entropy(left) - (nr / n) * entropy(right);
}

// ---------------------------------------------------------------------------

void GaussianEstimator::add(double x) noexcept {
  ++count_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(count_);
  m2_ += d * (x - mean_);
  min_ = std::min(min_, x);
  max_ = std::max(max_, x);
}

double GaussianEstimator::variance() const noexcept {
  return count_ > 1 ? std::max(0.0, m2_ / static_cast<double>(count_ - 1)) : 0.0;
}

double GaussianEstimator::stddev() const noexcept { return std::sqrt(variance()); }

double GaussianEstimator::weight_at_or_below(double t) const noexcept {
  if (count_ == 0 || t < min_) return 0.0;
  const double n = static_cast<double>(count_);
  if (t >= max_) return n;
  const double sd = stddev();
  if (sd <= 0.0) return n;  // unreachable: min < max implies spread
  const double z = (t - mean_) / sd;
  return n * 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// ---------------------------------------------------------------------------

LeafStats::LeafStats(std::size_t num_attributes) : observers_(num_attributes) {}

void LeafStats::add(std::span<const double> features, ClassLabel label) {
  if (features.size() != observers_.size()) {
    throw std::invalid_argument("feature vector length does not match the model");
  }
  ++n_;
  class_counts_[class_index(label)] += 1.0;
  for (std::size_t a = 0; a < features.size(); ++a) {
    observers_[a][class_index(label)].add(features[a]);
  }
}

bool LeafStats::is_pure() const noexcept {
  return class_counts_[0] == 0.0 || class_counts_[1] == 0.0;
}

double LeafStats::min(std::size_t attribute) const {
  const auto& obs = observers_.at(attribute);
  return std::min(obs[0].min(), obs[1].min());
}

double LeafStats::max(std::size_t attribute) const {
  const auto& obs = observers_.at(attribute);
  return std::max(obs[0].max(), obs[1].max());
}

std::vector<double> LeafStats::candidate_thresholds(std::size_t attribute, std::size_t count) const {
  std::vector<double> out;
  const double lo = min(attribute);
  const double hi = max(attribute);
  if (!(hi > lo)) return out;
  const double step = (hi - lo) / static_cast<double>(count + 1);
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

double info_gain(const LeafStats& stats, std::size_t attribute, double threshold) {
  if (stats.n() < 2) return 0.0;
  ClassWeights left{}, right{};
  for (ClassLabel c : {ClassLabel::Failure, ClassLabel::Success}) {
    const std::size_t i = class_index(c);
    const double total = stats.class_counts()[i];
    const double below = std::clamp(stats.estimator(attribute, c).weight_at_or_below(threshold), 0.0, total);
    left[i] = below;
    right[i] = total - below;
  }
  return std::clamp(split_gain(stats.class_counts(), left, right), 0.0, 1.0);
}

SplitDecision attempt_split(const LeafStats& leaf, const SplitConfig& config) {
  SplitDecision decision;
  decision.epsilon = hoeffding_bound(config.range, config.delta, std::max<std::size_t>(leaf.n(), 1));
  if (leaf.is_pure()) return decision;

  // best threshold per attribute, then the two best attributes
  for (std::size_t a = 0; a < leaf.num_attributes(); ++a) {
    std::optional<SplitCandidate> attr_best;
    for (double t : leaf.candidate_thresholds(a, config.candidate_thresholds)) {
      const double g = info_gain(leaf, a, t);
      if (!attr_best || g > attr_best->gain) attr_best = SplitCandidate{a, t, g};
    }
    if (!attr_best) attr_best = SplitCandidate{a, leaf.min(a), 0.0};
    if (!decision.best || attr_best->gain > decision.best->gain) {
      decision.runner_up = decision.best;
      decision.best = attr_best;
    } else if (!decision.runner_up || attr_best->gain > decision.runner_up->gain) {
      decision.runner_up = attr_best;
    }
  }
  if (!decision.best || decision.best->gain <= 0.0) return decision;
  const double second = decision.runner_up ? decision.runner_up->gain : 0.0;
  decision.gain_difference = decision.best->gain - second;
  decision.split = hoeffding_split_test(decision.best->gain, second, decision.epsilon, config.tau);
  return decision;
}

// ---------------------------------------------------------------------------

HoeffdingModel::HoeffdingModel(std::size_t num_attributes, SplitConfig config)
    : config_(config), num_attributes_(num_attributes) {
  config_.validate();
  if (num_attributes_ == 0) throw std::invalid_argument("model needs at least one attribute");
  nodes_.push_back(Node{LeafNode{LeafStats(num_attributes_)}, 0});
}

std::size_t HoeffdingModel::route(std::span<const double> features) const {
  if (features.size() != num_attributes_) {
    throw std::invalid_argument("feature vector length does not match the model");
  }
  std::size_t at = kRoot;
  while (!nodes_[at].is_leaf()) {
    const SplitNode& s = nodes_[at].split();
    at = features[s.attribute] <= s.threshold ? s.left : s.right;
  }
  return at;
}

std::optional<SplitEvent> HoeffdingModel::learn_one(std::span<const double> features,
                                                    ClassLabel label) {
  const std::size_t at = route(features);
  ++instances_learned_;
  LeafNode& leaf = std::get<LeafNode>(nodes_[at].content);
  leaf.stats.add(features, label);
  if (leaf.stats.n() - leaf.seen_at_last_check < config_.grace_period) return std::nullopt;

  leaf.seen_at_last_check = leaf.stats.n();
  ++split_checks_;
  const SplitDecision decision = attempt_split(leaf.stats, config_);
  if (!decision.split) return std::nullopt;

  SplitEvent event{at,
                   decision.best->attribute,
                   decision.best->threshold,
                   leaf.stats.n(),
                   decision.best->gain,
                   decision.runner_up ? decision.runner_up->gain : 0.0,
                   decision.epsilon};
  split_leaf(at, event.attribute, event.threshold);
  ++split_events_;
  return event;
}

Prediction HoeffdingModel::predict(std::span<const double> features) const {
  const LeafStats& stats = nodes_[route(features)].leaf().stats;
  const ClassWeights& counts = stats.class_counts();
  const double denom = static_cast<double>(stats.n()) + 2.0;
  Prediction p;
  p.scores[0] = (counts[0] + 1.0) / denom;
  p.scores[1] = (counts[1] + 1.0) / denom;
  p.label = counts[class_index(ClassLabel::Failure)] > counts[class_index(ClassLabel::Success)]
                ? ClassLabel::Failure
                : ClassLabel::Success;
  return p;
}

std::pair<std::size_t, std::size_t> HoeffdingModel::split_leaf(std::size_t leaf,
                                                                std::size_t attribute,
                                                                double threshold) {
  if (leaf >= nodes_.size() || !nodes_[leaf].is_leaf()) {
    throw std::invalid_argument("split_leaf: node " + std::to_string(leaf) + " is not a leaf");
  }
  if (attribute >= num_attributes_) throw std::invalid_argument("split_leaf: attribute out of range");
  const std::size_t depth = nodes_[leaf].depth + 1;
  const std::size_t left = nodes_.size();
  const std::size_t right = left + 1;
  nodes_.push_back(Node{LeafNode{LeafStats(num_attributes_)}, depth});
  nodes_.push_back(Node{LeafNode{LeafStats(num_attributes_)}, depth});
  nodes_[leaf].content = SplitNode{attribute, threshold, left, right};
  return {left, right};
}

void HoeffdingModel::reset() {
  nodes_.clear();
  nodes_.push_back(Node{LeafNode{LeafStats(num_attributes_)}, 0});
  ++resets_;
}

TreeStats HoeffdingModel::stats() const {
  TreeStats s;
  for (const Node& node : nodes_) {
    if (node.is_leaf()) {
      ++s.leaves;
      s.depth = std::max(s.depth, node.depth);
    } else {
      ++s.internal_nodes;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

DotExport export_dot(const HoeffdingModel& model, const StreamSchema* schema) {
  auto name_of = [&](std::size_t a) {
    if (schema && a < schema->size()) return schema->metric_columns()[a];
    return "x" + std::to_string(a);
  };
  std::ostringstream out;
  out << "digraph HoeffdingTree {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  const auto nodes = model.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.is_leaf()) {
      const auto& counts = node.leaf().stats.class_counts();
      const ClassLabel majority = counts[class_index(ClassLabel::Failure)] >
                                          counts[class_index(ClassLabel::Success)]
                                      ? ClassLabel::Failure
                                      : ClassLabel::Success;
      out << "  n" << i << " [shape=box, label=\"" << to_string(majority) << "\\nsuccess="
          << counts[class_index(ClassLabel::Success)]
          << " failure=" << counts[class_index(ClassLabel::Failure)] << "\"];\n";
    } else {
      const auto& s = node.split();
      out << "  n" << i << " [shape=ellipse, label=\"" << dot_escape(name_of(s.attribute))
          << " ≤ " << short_number(s.threshold) << "\"];\n";
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    const auto& s = nodes[i].split();
    out << "  n" << i << " -> n" << s.left << " [label=\"yes\"];\n";
    out << "  n" << i << " -> n" << s.right << " [label=\"no\"];\n";
  }
  out << "}\n";
  return DotExport{out.str(), model.stats()};
}

std::string tree_stats_json(const HoeffdingModel& model) {
  const TreeStats s = model.stats();
  nlohmann::ordered_json j;
  j["depth"] = s.depth;
  j["leaves"] = s.leaves;
  j["internal_nodes"] = s.internal_nodes;
  j["instances_learned"] = model.instances_learned();
  return j.dump();
}

}  // namespace buildstream
