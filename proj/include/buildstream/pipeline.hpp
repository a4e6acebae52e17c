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

#ifndef BUILDSTREAM_PIPELINE_HPP_
#define BUILDSTREAM_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "buildstream/evaluation.hpp"
#include "buildstream/stream.hpp"

namespace buildstream {

inline constexpr std::string_view kToolName = "buildstream";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Output file name -> contents. Names are relative to the output directory.
using Artifacts = std::map<std::string, std::string>;

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);

// Writes every artifact to a temporary name first and renames only once all
// writes succeeded, so a failure leaves no new files behind.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts);

std::shared_ptr<const StreamSchema> load_schema(const std::optional<std::filesystem::path>& path);

struct PipelineOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> schema;
  RunConfig run;  // run.smote.seed is overwritten by run.seed
  std::size_t repeat = 1;
  std::size_t jobs = 1;
};

// One sort -> double smote -> prequential run -> tree export cycle.
struct PipelineResult {
  LabeledStream stream;  // the stream that was evaluated
  EvaluationSeries series;
  HoeffdingModel model;
  Artifacts artifacts;   // series.csv, summary.json, tree.dot, tree_stats.json
};

PipelineResult run_once(const LabeledStream& input, const RunConfig& config);

// Full pipeline including manifest.json; artifacts of repetition i (seed
// run.seed + i) go under `rep-<i>/` when repeat > 1. Nothing is written.
Artifacts pipeline_artifacts(const PipelineOptions& options);

// Rebuilds the options a manifest was produced from.
PipelineOptions options_from_manifest(std::string_view manifest_json);

}  // namespace buildstream

#endif  // BUILDSTREAM_PIPELINE_HPP_
