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

#include <doctest.h>

#include <random>
#include <sstream>

#include "buildstream/csv.hpp"
#include "buildstream/evaluation.hpp"
#include "test_util.hpp"

using namespace buildstream;
using buildstream::testing::make_instance;
using buildstream::testing::schema_of;

namespace {

// Knows the answers ahead of time: looks up the label by feature value.
class OracleStub final : public Learner {
 public:
  explicit OracleStub(bool invert) : invert_(invert) {}
  ClassLabel predict(std::span<const double> f) const override {
    const ClassLabel truth = f[0] > 0.5 ? ClassLabel::Success : ClassLabel::Failure;
    return invert_ ? other_class(truth) : truth;
  }
  void learn(const Instance&) override {}
  void reset() override {}

 private:
  bool invert_;
};

class ConstantStub final : public Learner {
 public:
  explicit ConstantStub(ClassLabel c) : c_(c) {}
  ClassLabel predict(std::span<const double>) const override { return c_; }
  void learn(const Instance&) override { ++learned; }
  void reset() override { ++resets; }
  std::size_t learned = 0;
  std::size_t resets = 0;

 private:
  ClassLabel c_;
};

// Predicts the majority of what it has learned so far, success on ties.
class MajorityLearner final : public Learner {
 public:
  ClassLabel predict(std::span<const double>) const override {
    return failures_ > successes_ ? ClassLabel::Failure : ClassLabel::Success;
  }
  void learn(const Instance& inst) override {
    ++(inst.outcome == ClassLabel::Success ? successes_ : failures_);
  }
  void reset() override { successes_ = failures_ = 0; }

 private:
  std::size_t successes_ = 0;
  std::size_t failures_ = 0;
};

// feature 0 is 1 for success, 0 for failure
LabeledStream labelled(const std::vector<ClassLabel>& labels) {
  std::vector<Instance> v;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    v.push_back(make_instance("r" + std::to_string(i), {labels[i] == ClassLabel::Success ? 1.0 : 0.0},
                              labels[i], static_cast<std::int64_t>(i)));
  }
  return LabeledStream(schema_of(1), std::move(v));
}

std::vector<ClassLabel> bernoulli_labels(std::size_t n, double p_success, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(p_success);
  std::vector<ClassLabel> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(b(rng) ? ClassLabel::Success : ClassLabel::Failure);
  return out;
}

}  // namespace

TEST_CASE("oracle stub scores 1 everywhere, inverted stub 0") {
  const auto stream = labelled(bernoulli_labels(500, 0.6, 1));
  RunConfig cfg;
  OracleStub oracle(false), inverted(true);
  AdwinDetector d1, d2;
  const auto good = prequential_run(stream, oracle, d1, cfg);
  const auto bad = prequential_run(stream, inverted, d2, cfg);
  for (const auto& r : good.steps) {
    CHECK(r.cumulative_accuracy == 1.0);
    CHECK(r.windowed_accuracy == 1.0);
  }
  for (const auto& r : bad.steps) {
    CHECK(r.cumulative_accuracy == 0.0);
    CHECK(r.windowed_accuracy == 0.0);
  }
  CHECK(good.drift_points.empty());
}

TEST_CASE("no-learn stub gives the constant prior exactly") {
  const auto labels = bernoulli_labels(1000, 0.6, 2);
  const auto stream = labelled(labels);
  ConstantStub stub(ClassLabel::Success);
  AdwinDetector d;
  const auto series = prequential_run(stream, stub, d, RunConfig{});
  std::size_t successes = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    successes += labels[i] == ClassLabel::Success;
    CHECK(series.steps[i].cumulative_accuracy == static_cast<double>(successes) / (i + 1));
  }
  CHECK(stub.learned == 1000);
}

TEST_CASE("the first instance is tested before anything is learned") {
  const auto stream = labelled({ClassLabel::Failure, ClassLabel::Failure});
  MajorityLearner m;
  AdwinDetector d;
  const auto series = prequential_run(stream, m, d, RunConfig{});
  CHECK(series.steps[0].predicted == ClassLabel::Success);
  CHECK(series.steps[0].cumulative_accuracy == 0.0);
  CHECK(series.steps[1].predicted == ClassLabel::Failure);
}

TEST_CASE("majority learner converges to the class prior") {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto stream = labelled(bernoulli_labels(10000, 0.6, 100 + seed));
    MajorityLearner m;
    AdwinDetector d;
    const double acc = prequential_run(stream, m, d, RunConfig{}).steps.back().cumulative_accuracy;
    CHECK(std::fabs(acc - 0.60) <= 0.02);
    sum += acc;
  }
  CHECK(std::fabs(sum / 20 - 0.60) <= 0.02);
}

TEST_CASE("property: rates are recomputable from the confusion counts") {
  const auto stream = labelled(bernoulli_labels(3000, 0.55, 9));
  HoeffdingModel model(1, SplitConfig{1e-7, 0.05, 50});
  // a model that flips its mind now and then
  class Noisy final : public Learner {
   public:
    ClassLabel predict(std::span<const double>) const override {
      return (calls_++ % 7) < 3 ? ClassLabel::Failure : ClassLabel::Success;
    }
    void learn(const Instance&) override {}
    void reset() override {}

   private:
    mutable std::size_t calls_ = 0;
  } noisy;
  {
    AdwinDetector d;
    const auto series = prequential_run(stream, noisy, d, RunConfig{});
    for (const auto& r : series.steps) {
      const Confusion& c = r.confusion;
      REQUIRE(c.total() == r.step);
      CHECK(r.cumulative_accuracy == safe_ratio(c.tp + c.tn, r.step));
      CHECK(r.sensitivity_success == safe_ratio(c.tp, c.tp + c.fn));
      CHECK(r.sensitivity_failure == safe_ratio(c.tn, c.tn + c.fp));
      CHECK(r.precision_success == safe_ratio(c.tp, c.tp + c.fp));
      CHECK(r.precision_failure == safe_ratio(c.tn, c.tn + c.fn));
      CHECK(r.false_positive_rate == safe_ratio(c.fp, c.fp + c.tn));
      CHECK(r.false_positive_rate_mirrored == safe_ratio(c.fn, c.fn + c.tp));
      for (double v : {r.cumulative_accuracy, r.windowed_accuracy, r.sensitivity_success,
                       r.sensitivity_failure, r.precision_success, r.precision_failure,
                       r.false_positive_rate, r.false_positive_rate_mirrored}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
  AdwinDetector d;
  const auto series = prequential_run(stream, model, d, RunConfig{});
  CHECK(series.steps.back().confusion.total() == 3000);
}

TEST_CASE("windowed accuracy matches a brute-force recount") {
  const auto stream = labelled(bernoulli_labels(2500, 0.5, 4));
  for (std::size_t w : {1u, 2u, 7u, 100u, 1000u}) {
    MajorityLearner m;
    AdwinDetector d;
    RunConfig cfg;
    cfg.window_size = w;
    const auto series = prequential_run(stream, m, d, cfg);
    for (std::size_t i = 0; i < series.steps.size(); ++i) {
      const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
      std::size_t correct = 0;
      for (std::size_t j = lo; j <= i; ++j) correct += series.steps[j].actual == series.steps[j].predicted;
      CHECK(series.steps[i].windowed_accuracy == static_cast<double>(correct) / (i + 1 - lo));
    }
  }
}

TEST_CASE("class distribution series") {
  std::vector<ClassLabel> all(50, ClassLabel::Success);
  for (double f : class_distribution_series(labelled(all), 10)) CHECK(f == 1.0);

  std::vector<ClassLabel> alt;
  for (int i = 0; i < 40; ++i) alt.push_back(i % 2 ? ClassLabel::Failure : ClassLabel::Success);
  const auto fr = class_distribution_series(labelled(alt), 2);
  CHECK(fr[0] == 1.0);
  for (std::size_t i = 1; i < fr.size(); ++i) CHECK(fr[i] == 0.5);
  CHECK_THROWS_AS(class_distribution_series(labelled(alt), 0), std::invalid_argument);
}

TEST_CASE("drift actions") {
  // always-success predictions on a stream that turns from success to failure
  std::vector<ClassLabel> labels(1000, ClassLabel::Success);
  labels.resize(2000, ClassLabel::Failure);
  const auto stream = labelled(labels);

  ConstantStub recorder(ClassLabel::Success);
  AdwinDetector d1;
  const auto recorded = prequential_run(stream, recorder, d1, RunConfig{});
  REQUIRE_FALSE(recorded.drift_points.empty());
  CHECK(recorded.drift_points.front() > 1000);
  CHECK(recorded.drift_points.front() <= 1500);
  CHECK(recorder.resets == 0);
  for (std::size_t p : recorded.drift_points) CHECK(recorded.steps[p - 1].drift);

  ConstantStub resetter(ClassLabel::Success);
  AdwinDetector d2;
  RunConfig cfg;
  cfg.drift_action = DriftAction::ResetTree;
  const auto reset = prequential_run(stream, resetter, d2, cfg);
  CHECK(resetter.resets == reset.drift_points.size());
}

TEST_CASE("empty stream and bad config are rejected") {
  MajorityLearner m;
  AdwinDetector d;
  CHECK_THROWS_AS(prequential_run(LabeledStream(schema_of(1), {}), m, d, RunConfig{}),
                  std::invalid_argument);
  RunConfig bad;
  bad.window_size = 0;
  CHECK_THROWS_AS(prequential_run(labelled({ClassLabel::Success}), m, d, bad), std::invalid_argument);
}

TEST_CASE("series csv and summary") {
  const auto stream = labelled(bernoulli_labels(250, 0.5, 3));
  OracleStub oracle(false);
  AdwinDetector d;
  const auto series = prequential_run(stream, oracle, d, RunConfig{});
  std::ostringstream out;
  write_series_csv(out, series);
  std::istringstream in(out.str());
  csv::Reader reader(in);
  std::vector<std::string> f;
  REQUIRE(reader.next(f));
  CHECK(f.size() == 18);
  CHECK(f.front() == "step");
  std::size_t rows = 0;
  while (reader.next(f)) ++rows;
  CHECK(rows == 250);

  const Summary s = summarize(series);
  CHECK(s.instances == 250);
  CHECK(s.start_step == 100);
  CHECK(s.start_accuracy == 1.0);
  CHECK(s.end_accuracy == 1.0);
  CHECK(s.average_accuracy == 1.0);
  CHECK(summary_json(s).find("\"end_accuracy\":1") != std::string::npos);
}
