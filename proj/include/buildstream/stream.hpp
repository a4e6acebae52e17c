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

#ifndef BUILDSTREAM_STREAM_HPP_
#define BUILDSTREAM_STREAM_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace buildstream {

// Build outcome. The numeric values are the outcome encoding used
// throughout: success -> 1, failure -> 0.
enum class ClassLabel : std::uint8_t { Failure = 0, Success = 1 };

inline constexpr std::size_t kNumClasses = 2;

constexpr std::size_t class_index(ClassLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

constexpr ClassLabel other_class(ClassLabel label) noexcept {
  return label == ClassLabel::Success ? ClassLabel::Failure : ClassLabel::Success;
}

std::string_view to_string(ClassLabel label) noexcept;

using Timestamp = std::chrono::sys_seconds;

// Strict ISO-8601 `YYYY-MM-DDTHH:MM:SS`, timezone-naive.
// Throws std::invalid_argument on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

struct ClassCounts {
  std::size_t success = 0;
  std::size_t failure = 0;

  std::size_t total() const noexcept { return success + failure; }
  std::size_t of(ClassLabel label) const noexcept {
    return label == ClassLabel::Success ? success : failure;
  }
  std::size_t& of(ClassLabel label) noexcept {
    return label == ClassLabel::Success ? success : failure;
  }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// Parents of an oversampled instance. `multiplier` is the interpolation
// factor; it is only known for instances produced in-process (the CSV
// dialect does not carry it).
struct SyntheticOrigin {
  std::string seed_id;
  std::string neighbor_id;
  std::optional<double> multiplier;

  friend bool operator==(const SyntheticOrigin&, const SyntheticOrigin&) = default;
};

struct Instance {
  std::string id;
  Timestamp date{};
  std::vector<double> features;
  ClassLabel outcome = ClassLabel::Success;
  std::optional<SyntheticOrigin> origin;  // empty for original builds

  bool is_synthetic() const noexcept { return origin.has_value(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Column layout of a build-metric CSV.
class StreamSchema {
 public:
  static constexpr std::string_view kProvenanceColumn = "provenance";
  static constexpr std::string_view kParentsColumn = "parents";

  // Throws std::invalid_argument if names are empty or not unique, or if a
  // metric column collides with one of the reserved columns.
  explicit StreamSchema(std::vector<std::string> metric_columns,
                        std::string date_column = "date",
                        std::string outcome_column = "outcome",
                        std::string id_column = "id");

  // The 38 after-state build metrics: 15 basic, 6 dependency,
  // 2 complexity, 3 cohesion and 12 Halstead.
  static StreamSchema build_metrics();

  // {"metric_columns": [...], "date_column": ..., "outcome_column": ...,
  //  "id_column": ...}; only metric_columns is required.
  static StreamSchema from_json_text(std::string_view text);
  std::string to_json_text() const;

  const std::vector<std::string>& metric_columns() const noexcept { return metric_columns_; }
  const std::string& date_column() const noexcept { return date_column_; }
  const std::string& outcome_column() const noexcept { return outcome_column_; }
  const std::string& id_column() const noexcept { return id_column_; }
  std::size_t size() const noexcept { return metric_columns_.size(); }

  std::optional<std::size_t> metric_index(std::string_view name) const;

  // Case-insensitive `success` / `failure`.
  static std::optional<ClassLabel> decode_outcome(std::string_view token);
  static std::string_view encode_outcome(ClassLabel label) noexcept;

  friend bool operator==(const StreamSchema&, const StreamSchema&) = default;

 private:
  std::vector<std::string> metric_columns_;
  std::string date_column_;
  std::string outcome_column_;
  std::string id_column_;
};

// Ordered build instances sharing one schema. Immutable once built.
class LabeledStream {
 public:
  // Throws std::invalid_argument if an instance has the wrong number of
  // features or a non-finite feature value.
  LabeledStream(std::shared_ptr<const StreamSchema> schema, std::vector<Instance> instances);

  const StreamSchema& schema() const noexcept { return *schema_; }
  const std::shared_ptr<const StreamSchema>& schema_ptr() const noexcept { return schema_; }

  std::span<const Instance> instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }
  auto begin() const noexcept { return instances_.begin(); }
  auto end() const noexcept { return instances_.end(); }

  const ClassCounts& class_counts() const noexcept { return counts_; }

  // Moves the instances out, leaving this stream empty.
  std::vector<Instance> release() &&;

 private:
  std::shared_ptr<const StreamSchema> schema_;
  std::vector<Instance> instances_;
  ClassCounts counts_;
};

// Reads a CSV with a header row. Columns may appear in any order; the id
// column and the provenance/parents pair are optional, everything else in
// the schema is required and nothing outside it is accepted.
// Throws SchemaError / RowError.
LabeledStream parse_stream(std::istream& csv, std::shared_ptr<const StreamSchema> schema);
LabeledStream parse_stream(std::string_view csv_text, std::shared_ptr<const StreamSchema> schema);

struct WriteOptions {
  bool provenance_columns = false;
};

// Writes id, date, metrics (schema order), outcome[, provenance, parents].
void write_stream(std::ostream& out, const LabeledStream& stream, WriteOptions options = {});
std::string write_stream(const LabeledStream& stream, WriteOptions options = {});

// Stable sort by date; instances with equal dates keep their relative order.
LabeledStream sort_by_date(LabeledStream stream);

}  // namespace buildstream

#endif  // BUILDSTREAM_STREAM_HPP_
