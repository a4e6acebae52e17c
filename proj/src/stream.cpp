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

#include "buildstream/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "buildstream/csv.hpp"
#include "buildstream/errors.hpp"

namespace buildstream {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; };
           return lower(x) == lower(y);
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

template <typename Int>
bool parse_digits(std::string_view text, Int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// `seed|neighbor`; ids containing '|' are not representable.
std::string join_parents(const SyntheticOrigin& origin) {
  return origin.seed_id + "|" + origin.neighbor_id;
}

}  // namespace

std::string_view to_string(ClassLabel label) noexcept {
  return label == ClassLabel::Success ? "success" : "failure";
}

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':') {
    throw std::invalid_argument("timestamp must be YYYY-MM-DDTHH:MM:SS: '" + std::string(text) + "'");
  }
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), mo) ||
      !parse_digits(text.substr(8, 2), d) || !parse_digits(text.substr(11, 2), h) ||
      !parse_digits(text.substr(14, 2), mi) || !parse_digits(text.substr(17, 2), s)) {
    throw std::invalid_argument("timestamp has non-digit fields: '" + std::string(text) + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                        std::chrono::day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw std::invalid_argument("timestamp out of range: '" + std::string(text) + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
         std::chrono::seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  const auto days = std::chrono::floor<std::chrono::days>(ts);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{ts - days};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), long(hms.hours().count()),
                long(hms.minutes().count()), long(hms.seconds().count()));
  return buf;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// StreamSchema

StreamSchema::StreamSchema(std::vector<std::string> metric_columns, std::string date_column,
                           std::string outcome_column, std::string id_column)
    : metric_columns_(std::move(metric_columns)),
      date_column_(std::move(date_column)),
      outcome_column_(std::move(outcome_column)),
      id_column_(std::move(id_column)) {
  if (metric_columns_.empty()) throw std::invalid_argument("schema needs at least one metric column");
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& name) {
    if (name.empty()) throw std::invalid_argument("schema column names must be non-empty");
    if (!seen.insert(name).second) {
      throw std::invalid_argument("duplicate schema column '" + name + "'");
    }
  };
  add(date_column_);
  add(outcome_column_);
  add(id_column_);
  add(std::string(kProvenanceColumn));
  add(std::string(kParentsColumn));
  for (const auto& name : metric_columns_) add(name);
}

StreamSchema StreamSchema::build_metrics() {
  return StreamSchema({
      // basic
      "number_of_types_per_package",
      "number_of_comments",
      "lines_of_code",
      "comment_code_ratio",
      "number_of_import_statements",
      "number_of_interfaces",
      "number_of_methods",
      "number_of_parameters",
      "number_of_lines",
      "avg_attributes_per_class",
      "avg_constructors_per_class",
      "avg_comments",
      "avg_lines_of_code_per_method",
      "avg_methods",
      "avg_parameters",
      // dependency
      "abstractness",
      "afferent_coupling",
      "efferent_coupling",
      "maintainability_index",
      "instability",
      "normalized_distance",
      // complexity
      "avg_block_depth",
      "avg_cyclomatic_complexity",
      // cohesion
      "lcom1",
      "lcom2",
      "lcom3",
      // Halstead
      "number_of_operands",
      "number_of_operators",
      "number_of_unique_operands",
      "number_of_unique_operators",
      "program_volume",
      "difficulty_level",
      "effort_to_implement",
      "number_of_delivered_bugs",
      "time_to_implement",
      "program_length",
      "program_level",
      "program_vocabulary_size",
  });
}

StreamSchema StreamSchema::from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("schema json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("metric_columns") || !j["metric_columns"].is_array()) {
    throw std::invalid_argument("schema json must be an object with a metric_columns array");
  }
  try {
    return StreamSchema(j["metric_columns"].get<std::vector<std::string>>(),
                        j.value("date_column", std::string("date")),
                        j.value("outcome_column", std::string("outcome")),
                        j.value("id_column", std::string("id")));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("schema json: ") + e.what());
  }
}

std::string StreamSchema::to_json_text() const {
  nlohmann::ordered_json j;
  j["metric_columns"] = metric_columns_;
  j["date_column"] = date_column_;
  j["outcome_column"] = outcome_column_;
  j["id_column"] = id_column_;
  return j.dump();
}

std::optional<std::size_t> StreamSchema::metric_index(std::string_view name) const {
  for (std::size_t i = 0; i < metric_columns_.size(); ++i) {
    if (metric_columns_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<ClassLabel> StreamSchema::decode_outcome(std::string_view token) {
  token = trim(token);
  if (iequals(token, "success")) return ClassLabel::Success;
  if (iequals(token, "failure")) return ClassLabel::Failure;
  return std::nullopt;
}

std::string_view StreamSchema::encode_outcome(ClassLabel label) noexcept {
  return to_string(label);
}

// ---------------------------------------------------------------------------
// LabeledStream

LabeledStream::LabeledStream(std::shared_ptr<const StreamSchema> schema,
                             std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
  if (!schema_) throw std::invalid_argument("stream requires a schema");
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const Instance& inst = instances_[i];
    if (inst.features.size() != schema_->size()) {
      throw std::invalid_argument("instance " + std::to_string(i) + " has " +
                                  std::to_string(inst.features.size()) + " features, schema has " +
                                  std::to_string(schema_->size()));
    }
    for (double v : inst.features) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("instance " + std::to_string(i) + " has a non-finite feature");
      }
    }
    ++counts_.of(inst.outcome);
  }
}

std::vector<Instance> LabeledStream::release() && {
  counts_ = {};
  return std::move(instances_);
}

// ---------------------------------------------------------------------------
// CSV I/O

LabeledStream parse_stream(std::istream& in, std::shared_ptr<const StreamSchema> schema) {
  if (!schema) throw std::invalid_argument("parse_stream requires a schema");
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw SchemaError("", "missing header row");

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::size_t id_col = kUnset, date_col = kUnset, outcome_col = kUnset;
  std::size_t provenance_col = kUnset, parents_col = kUnset;
  std::vector<std::size_t> metric_col(schema->size(), kUnset);
  std::unordered_set<std::string> seen;

  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(trim(header[c]));
    if (!seen.insert(name).second) throw SchemaError(name, "duplicate column '" + name + "'");
    if (name == schema->id_column()) {
      id_col = c;
    } else if (name == schema->date_column()) {
      date_col = c;
    } else if (name == schema->outcome_column()) {
      outcome_col = c;
    } else if (name == StreamSchema::kProvenanceColumn) {
      provenance_col = c;
    } else if (name == StreamSchema::kParentsColumn) {
      parents_col = c;
    } else if (auto idx = schema->metric_index(name)) {
      metric_col[*idx] = c;
    } else {
      throw SchemaError(name, "unknown column '" + name + "'");
    }
  }
  if (date_col == kUnset) {
    throw SchemaError(schema->date_column(), "missing column '" + schema->date_column() + "'");
  }
  if (outcome_col == kUnset) {
    throw SchemaError(schema->outcome_column(),
                      "missing column '" + schema->outcome_column() + "'");
  }
  for (std::size_t m = 0; m < metric_col.size(); ++m) {
    if (metric_col[m] == kUnset) {
      const auto& name = schema->metric_columns()[m];
      throw SchemaError(name, "missing column '" + name + "'");
    }
  }
  if ((provenance_col == kUnset) != (parents_col == kUnset)) {
    const std::string missing(provenance_col == kUnset ? StreamSchema::kProvenanceColumn
                                                       : StreamSchema::kParentsColumn);
    throw SchemaError(missing, "missing column '" + missing + "'");
  }

  std::vector<Instance> instances;
  std::vector<std::string> fields;
  std::size_t data_row = 0;
  while (reader.next(fields)) {
    const std::size_t row = reader.record_number();
    ++data_row;
    if (fields.size() != header.size()) {
      throw RowError(row, "expected " + std::to_string(header.size()) + " cells, found " +
                              std::to_string(fields.size()));
    }
    Instance inst;
    inst.id = id_col == kUnset ? std::to_string(data_row) : fields[id_col];
    try {
      inst.date = parse_timestamp(trim(fields[date_col]));
    } catch (const std::invalid_argument& e) {
      throw RowError(row, e.what());
    }
    auto outcome = StreamSchema::decode_outcome(fields[outcome_col]);
    if (!outcome) throw RowError(row, "unknown outcome '" + fields[outcome_col] + "'");
    inst.outcome = *outcome;
    inst.features.resize(schema->size());
    for (std::size_t m = 0; m < metric_col.size(); ++m) {
      const std::string& cell = fields[metric_col[m]];
      auto value = parse_number(cell);
      if (!value) {
        throw RowError(row, "column '" + schema->metric_columns()[m] + "': '" + cell +
                                "' is not a finite number");
      }
      inst.features[m] = *value;
    }
    if (provenance_col != kUnset) {
      const std::string_view kind = trim(fields[provenance_col]);
      if (iequals(kind, "synthetic")) {
        const std::string_view parents = trim(fields[parents_col]);
        const auto bar = parents.find('|');
        if (bar == std::string_view::npos || bar == 0 || bar + 1 == parents.size()) {
          throw RowError(row, "synthetic instance needs parents 'seed|neighbor'");
        }
        inst.origin = SyntheticOrigin{std::string(parents.substr(0, bar)),
                                      std::string(parents.substr(bar + 1)), std::nullopt};
      } else if (!iequals(kind, "original")) {
        throw RowError(row, "unknown provenance '" + fields[provenance_col] + "'");
      } else if (!trim(fields[parents_col]).empty()) {
        throw RowError(row, "original instance must not list parents");
      }
    }
    instances.push_back(std::move(inst));
  }
  return LabeledStream(std::move(schema), std::move(instances));
}

LabeledStream parse_stream(std::string_view csv_text, std::shared_ptr<const StreamSchema> schema) {
  std::istringstream in{std::string(csv_text)};
  return parse_stream(in, std::move(schema));
}

void write_stream(std::ostream& out, const LabeledStream& stream, WriteOptions options) {
  const StreamSchema& schema = stream.schema();
  std::vector<std::string> fields;
  fields.push_back(schema.id_column());
  fields.push_back(schema.date_column());
  for (const auto& name : schema.metric_columns()) fields.push_back(name);
  fields.push_back(schema.outcome_column());
  if (options.provenance_columns) {
    fields.emplace_back(StreamSchema::kProvenanceColumn);
    fields.emplace_back(StreamSchema::kParentsColumn);
  }
  csv::write_record(out, fields);

  for (const Instance& inst : stream) {
    fields.clear();
    fields.push_back(inst.id);
    fields.push_back(format_timestamp(inst.date));
    for (double v : inst.features) fields.push_back(format_number(v));
    fields.emplace_back(StreamSchema::encode_outcome(inst.outcome));
    if (options.provenance_columns) {
      if (inst.origin) {
        fields.emplace_back("synthetic");
        fields.push_back(join_parents(*inst.origin));
      } else {
        fields.emplace_back("original");
        fields.emplace_back();
      }
    }
    csv::write_record(out, fields);
  }
}

std::string write_stream(const LabeledStream& stream, WriteOptions options) {
  std::ostringstream out;
  write_stream(out, stream, options);
  return out.str();
}

LabeledStream sort_by_date(LabeledStream stream) {
  auto schema = stream.schema_ptr();
  auto instances = std::move(stream).release();
  std::stable_sort(instances.begin(), instances.end(),
                   [](const Instance& a, const Instance& b) { return a.date < b.date; });
  return LabeledStream(std::move(schema), std::move(instances));
}

}  // namespace buildstream
