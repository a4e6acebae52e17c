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

#include "buildstream/evaluation.hpp"

#include <deque>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "buildstream/csv.hpp"

namespace buildstream {

std::string_view to_string(DriftAction a) noexcept {
  return a == DriftAction::Record ? "record" : "reset-tree";
}

void RunConfig::validate() const {
  if (window_size < 1) throw std::invalid_argument("window size must be >= 1");
  if (!(adwin_delta > 0.0 && adwin_delta < 1.0)) {
    throw std::invalid_argument("adwin delta must lie in (0, 1)");
  }
  split.validate();
  smote.validate();
}

double safe_ratio(std::size_t num, std::size_t den) noexcept {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

EvaluationSeries prequential_run(const LabeledStream& stream, Learner& learner,
                                 AdwinDetector& detector, const RunConfig& config) {
  config.validate();
  if (stream.empty()) throw std::invalid_argument("prequential run needs a non-empty stream");

  EvaluationSeries series;
  series.window_size = config.window_size;
  series.steps.reserve(stream.size());

  const std::vector<double> success_fraction =
      class_distribution_series(stream, config.window_size);
  Confusion cm;
  std::deque<bool> recent;  // correctness of the last window_size predictions
  std::size_t recent_correct = 0;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Instance& inst = stream[i];
    StepRecord rec;
    rec.step = i + 1;
    rec.instance_id = inst.id;
    rec.actual = inst.outcome;
    rec.predicted = learner.predict(inst.features);
    const bool correct = rec.predicted == rec.actual;

    if (rec.actual == ClassLabel::Success) {
      ++(correct ? cm.tp : cm.fn);
    } else {
      ++(correct ? cm.tn : cm.fp);
    }
    recent.push_back(correct);
    recent_correct += correct;
    if (recent.size() > config.window_size) {
      recent_correct -= recent.front();
      recent.pop_front();
    }

    rec.confusion = cm;
    rec.cumulative_accuracy = safe_ratio(cm.tp + cm.tn, rec.step);
    rec.windowed_accuracy = safe_ratio(recent_correct, recent.size());
    rec.sensitivity_success = safe_ratio(cm.tp, cm.tp + cm.fn);
    rec.sensitivity_failure = safe_ratio(cm.tn, cm.tn + cm.fp);
    rec.precision_success = safe_ratio(cm.tp, cm.tp + cm.fp);
    rec.precision_failure = safe_ratio(cm.tn, cm.tn + cm.fn);
    rec.false_positive_rate = safe_ratio(cm.fp, cm.fp + cm.tn);
    rec.false_positive_rate_mirrored = safe_ratio(cm.fn, cm.fn + cm.tp);
    rec.window_success_fraction = success_fraction[i];

    const DriftReport drift = detector.add_observation(correct ? 0.0 : 1.0);
    rec.drift = drift.detected;
    if (drift.detected) {
      series.drift_points.push_back(rec.step);
      if (config.drift_action == DriftAction::ResetTree) learner.reset();
    }

    learner.learn(inst);
    series.steps.push_back(std::move(rec));
  }
  return series;
}

EvaluationSeries prequential_run(const LabeledStream& stream, HoeffdingModel& model,
                                 AdwinDetector& detector, const RunConfig& config) {
  HoeffdingLearner learner(model);
  return prequential_run(stream, learner, detector, config);
}

std::vector<double> class_distribution_series(const LabeledStream& stream, std::size_t window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out;
  out.reserve(stream.size());
  std::size_t successes = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    successes += stream[i].outcome == ClassLabel::Success;
    if (i >= window && stream[i - window].outcome == ClassLabel::Success) --successes;
    const std::size_t in_window = std::min(window, i + 1);
    out.push_back(static_cast<double>(successes) / static_cast<double>(in_window));
  }
  return out;
}

void write_series_csv(std::ostream& out, const EvaluationSeries& series) {
  csv::write_record(out, {"step", "instance_id", "actual", "predicted", "cumulative_accuracy",
                          "windowed_accuracy", "sensitivity_success", "sensitivity_failure",
                          "precision_success", "precision_failure", "false_positive_rate",
                          "false_positive_rate_mirrored", "tp", "fp", "tn", "fn",
                          "window_success_fraction", "drift"});
  for (const StepRecord& r : series.steps) {
    csv::write_record(out, {std::to_string(r.step),
                            r.instance_id,
                            std::string(to_string(r.actual)),
                            std::string(to_string(r.predicted)),
                            format_number(r.cumulative_accuracy),
                            format_number(r.windowed_accuracy),
                            format_number(r.sensitivity_success),
                            format_number(r.sensitivity_failure),
                            format_number(r.precision_success),
                            format_number(r.precision_failure),
                            format_number(r.false_positive_rate),
                            format_number(r.false_positive_rate_mirrored),
                            std::to_string(r.confusion.tp),
                            std::to_string(r.confusion.fp),
                            std::to_string(r.confusion.tn),
                            std::to_string(r.confusion.fn),
                            format_number(r.window_success_fraction),
                            r.drift ? "1" : "0"});
  }
}

Summary summarize(const EvaluationSeries& series) {
  Summary s;
  s.instances = series.steps.size();
  s.drift_count = series.drift_points.size();
  if (series.steps.empty()) return s;
  s.start_step = std::min(series.window_size, s.instances);
  const StepRecord& first = series.steps[s.start_step - 1];
  const StepRecord& last = series.steps.back();
  s.start_accuracy = first.cumulative_accuracy;
  s.start_sensitivity_success = first.sensitivity_success;
  s.start_sensitivity_failure = first.sensitivity_failure;
  s.end_accuracy = last.cumulative_accuracy;
  s.end_sensitivity_success = last.sensitivity_success;
  s.end_sensitivity_failure = last.sensitivity_failure;
  for (const StepRecord& r : series.steps) {
    s.average_accuracy += r.cumulative_accuracy;
    s.average_sensitivity_success += r.sensitivity_success;
    s.average_sensitivity_failure += r.sensitivity_failure;
  }
  const double n = static_cast<double>(s.instances);
  s.average_accuracy /= n;
  s.average_sensitivity_success /= n;
  s.average_sensitivity_failure /= n;
  return s;
}

std::string summary_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["instances"] = s.instances;
  j["start_step"] = s.start_step;
  j["start_accuracy"] = s.start_accuracy;
  j["end_accuracy"] = s.end_accuracy;
  j["average_accuracy"] = s.average_accuracy;
  j["start_sensitivity_success"] = s.start_sensitivity_success;
  j["end_sensitivity_success"] = s.end_sensitivity_success;
  j["average_sensitivity_success"] = s.average_sensitivity_success;
  j["start_sensitivity_failure"] = s.start_sensitivity_failure;
  j["end_sensitivity_failure"] = s.end_sensitivity_failure;
  j["average_sensitivity_failure"] = s.average_sensitivity_failure;
  j["drift_count"] = s.drift_count;
  return j.dump();
}

}  // namespace buildstream
