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

#ifndef BUILDSTREAM_EVALUATION_HPP_
#define BUILDSTREAM_EVALUATION_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "buildstream/adwin.hpp"
#include "buildstream/hoeffding_tree.hpp"
#include "buildstream/smote.hpp"
#include "buildstream/stream.hpp"

namespace buildstream {

// Anything that can be scored prequentially.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual ClassLabel predict(std::span<const double> features) const = 0;
  virtual void learn(const Instance& instance) = 0;
  // Called when a drift triggers a rebuild.
  virtual void reset() = 0;
};

// Adapts a HoeffdingModel (held by reference) to Learner.
class HoeffdingLearner final : public Learner {
 public:
  explicit HoeffdingLearner(HoeffdingModel& model) : model_(model) {}
  ClassLabel predict(std::span<const double> features) const override {
    return model_.predict(features).label;
  }
  void learn(const Instance& instance) override { model_.learn_one(instance); }
  void reset() override { model_.reset(); }

 private:
  HoeffdingModel& model_;
};

enum class DriftAction { Record, ResetTree };

std::string_view to_string(DriftAction a) noexcept;

struct RunConfig {
  std::size_t window_size = 100;
  DriftAction drift_action = DriftAction::Record;
  std::uint64_t seed = 1;
  double adwin_delta = 0.002;
  SplitConfig split;
  SmoteConfig smote;

  // Throws std::invalid_argument.
  void validate() const;
};

// Success is the positive class: tp = success predicted success,
// fn = success predicted failure, fp = failure predicted success,
// tn = failure predicted failure.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Ratio with the convention 0/0 = 0.
double safe_ratio(std::size_t num, std::size_t den) noexcept;

struct StepRecord {
  std::size_t step = 0;  // 1-based
  std::string instance_id;
  ClassLabel actual = ClassLabel::Success;
  ClassLabel predicted = ClassLabel::Success;
  double cumulative_accuracy = 0.0;
  double windowed_accuracy = 0.0;
  double sensitivity_success = 0.0;  // tp / (tp + fn)
  double sensitivity_failure = 0.0;  // tn / (tn + fp)
  double precision_success = 0.0;   // tp / (tp + fp)
  double precision_failure = 0.0;   // tn / (tn + fn)
  double false_positive_rate = 0.0;           // fp / (fp + tn), success positive
  double false_positive_rate_mirrored = 0.0;  // fn / (fn + tp), failure positive
  Confusion confusion;
  double window_success_fraction = 0.0;
  bool drift = false;
};

struct EvaluationSeries {
  std::size_t window_size = 0;
  std::vector<StepRecord> steps;
  std::vector<std::size_t> drift_points;  // steps flagged by the detector
};

// Test-then-train over `stream`: each instance is predicted, scored, its
// 0/1 error fed to `detector`, and only then learned. With
// DriftAction::ResetTree the learner is reset on detection, before it
// learns the instance that triggered it.
// Throws std::invalid_argument on an empty stream.
EvaluationSeries prequential_run(const LabeledStream& stream, Learner& learner,
                                 AdwinDetector& detector, const RunConfig& config);
EvaluationSeries prequential_run(const LabeledStream& stream, HoeffdingModel& model,
                                 AdwinDetector& detector, const RunConfig& config);

// Fraction of successes among the last `window` instances, per step.
std::vector<double> class_distribution_series(const LabeledStream& stream, std::size_t window);

void write_series_csv(std::ostream& out, const EvaluationSeries& series);

struct Summary {
  std::size_t instances = 0;
  std::size_t start_step = 0;  // min(window, instances)
  double start_accuracy = 0.0;
  double end_accuracy = 0.0;
  double average_accuracy = 0.0;  // mean of the cumulative accuracy curve
  double start_sensitivity_success = 0.0;
  double end_sensitivity_success = 0.0;
  double average_sensitivity_success = 0.0;
  double start_sensitivity_failure = 0.0;
  double end_sensitivity_failure = 0.0;
  double average_sensitivity_failure = 0.0;
  std::size_t drift_count = 0;
};

Summary summarize(const EvaluationSeries& series);
// One line, no trailing newline.
std::string summary_json(const Summary& summary);

}  // namespace buildstream

#endif  // BUILDSTREAM_EVALUATION_HPP_
