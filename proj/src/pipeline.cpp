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

#include "buildstream/pipeline.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "buildstream/errors.hpp"
#include "buildstream/random.hpp"
#include "buildstream/smote.hpp"

namespace buildstream {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts) {
  namespace fs = std::filesystem;
  std::vector<fs::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
  };
  try {
    for (const auto& [name, content] : artifacts) {
      const fs::path target = dir / name;
      fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += ".partial";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      staged.push_back(tmp);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    }
    for (const auto& [name, content] : artifacts) {
      const fs::path target = dir / name;
      fs::path tmp = target;
      tmp += ".partial";
      fs::rename(tmp, target);
    }
  } catch (const fs::filesystem_error& e) {
    discard();
    throw DataError(e.what());
  } catch (...) {
    discard();
    throw;
  }
}

std::shared_ptr<const StreamSchema> load_schema(const std::optional<std::filesystem::path>& path) {
  if (!path) return std::make_shared<const StreamSchema>(StreamSchema::build_metrics());
  return std::make_shared<const StreamSchema>(StreamSchema::from_json_text(read_file(*path)));
}

PipelineResult run_once(const LabeledStream& input, const RunConfig& config) {
  config.validate();
  LabeledStream stream = sort_by_date(input);
  if (config.smote.percent > 0) {
    SmoteConfig smote = config.smote;
    smote.seed = config.seed;
    stream = double_smote(stream, smote.percent, smote);
  }
  if (stream.empty()) throw DataError("input stream is empty");

  HoeffdingModel model(stream.schema().size(), config.split);
  AdwinDetector detector(config.adwin_delta);
  EvaluationSeries series = prequential_run(stream, model, detector, config);

  Artifacts artifacts;
  std::ostringstream csv;
  write_series_csv(csv, series);
  artifacts["series.csv"] = csv.str();
  artifacts["summary.json"] = summary_json(summarize(series)) + "\n";
  artifacts["tree.dot"] = export_dot(model, &stream.schema()).text;
  artifacts["tree_stats.json"] = tree_stats_json(model) + "\n";
  return PipelineResult{std::move(stream), std::move(series), std::move(model),
                        std::move(artifacts)};
}

namespace {

nlohmann::ordered_json config_json(const PipelineOptions& o) {
  const RunConfig& c = o.run;
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["window_size"] = c.window_size;
  j["drift_action"] = std::string(to_string(c.drift_action));
  j["adwin_delta"] = c.adwin_delta;
  j["smote"] = {{"percent", c.smote.percent},
                {"k", c.smote.k},
                {"normalization", std::string(to_string(c.smote.normalization))}};
  j["split"] = {{"delta", c.split.delta},
                {"tau", c.split.tau},
                {"grace_period", c.split.grace_period},
                {"range", c.split.range},
                {"candidate_thresholds", c.split.candidate_thresholds}};
  j["repeat"] = o.repeat;
  j["jobs"] = o.jobs;
  return j;
}

}  // namespace

Artifacts pipeline_artifacts(const PipelineOptions& options) {
  if (options.repeat < 1) throw std::invalid_argument("repeat must be >= 1");
  if (options.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  options.run.validate();

  const std::string input_bytes = read_file(options.input);
  const auto schema = load_schema(options.schema);
  const LabeledStream input = parse_stream(std::string_view(input_bytes), schema);

  std::vector<Artifacts> per_run(options.repeat);
  std::vector<std::exception_ptr> errors(options.repeat);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < options.repeat; i = next++) {
      try {
        RunConfig cfg = options.run;
        cfg.seed = options.run.seed + i;
        per_run[i] = run_once(input, cfg).artifacts;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(options.jobs, options.repeat);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Artifacts all;
  for (std::size_t i = 0; i < options.repeat; ++i) {
    std::string prefix;
    if (options.repeat > 1) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "rep-%03zu/", i);
      prefix = buf;
    }
    for (auto& [name, content] : per_run[i]) all[prefix + name] = std::move(content);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = std::string(kToolName);
  manifest["version"] = std::string(kToolVersion);
  manifest["command"] = "pipeline";
  manifest["rng"] = std::string(kRngAlgorithm);
  manifest["input"] = {{"path", options.input.string()}, {"sha256", sha256_hex(input_bytes)}};
  manifest["schema"] = {{"path", options.schema ? options.schema->string() : std::string()},
                        {"definition", nlohmann::json::parse(schema->to_json_text())}};
  manifest["seed"] = options.run.seed;
  manifest["config"] = config_json(options);
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& [name, content] : all) {
    outputs.push_back({{"path", name}, {"sha256", sha256_hex(content)}});
  }
  manifest["outputs"] = outputs;
  all["manifest.json"] = manifest.dump(2) + "\n";
  return all;
}

PipelineOptions options_from_manifest(std::string_view manifest_json) {
  PipelineOptions o;
  try {
    const auto m = nlohmann::json::parse(manifest_json);
    if (m.at("command").get<std::string>() != "pipeline") {
      throw std::invalid_argument("manifest is not from a pipeline run");
    }
    o.input = m.at("input").at("path").get<std::string>();
    const std::string schema_path = m.at("schema").at("path").get<std::string>();
    if (!schema_path.empty()) o.schema = schema_path;
    const auto& c = m.at("config");
    o.run.seed = c.at("seed").get<std::uint64_t>();
    o.run.window_size = c.at("window_size").get<std::size_t>();
    const std::string action = c.at("drift_action").get<std::string>();
    if (action == "record") {
      o.run.drift_action = DriftAction::Record;
    } else if (action == "reset-tree") {
      o.run.drift_action = DriftAction::ResetTree;
    } else {
      throw std::invalid_argument("manifest: unknown drift action '" + action + "'");
    }
    o.run.adwin_delta = c.at("adwin_delta").get<double>();
    o.run.smote.percent = c.at("smote").at("percent").get<unsigned>();
    o.run.smote.k = c.at("smote").at("k").get<std::size_t>();
    const std::string norm = c.at("smote").at("normalization").get<std::string>();
    if (norm == "minmax") {
      o.run.smote.normalization = DistanceNormalization::MinMax;
    } else if (norm == "none") {
      o.run.smote.normalization = DistanceNormalization::None;
    } else {
      throw std::invalid_argument("manifest: unknown normalization '" + norm + "'");
    }
    o.run.smote.seed = o.run.seed;
    o.run.split.delta = c.at("split").at("delta").get<double>();
    o.run.split.tau = c.at("split").at("tau").get<double>();
    o.run.split.grace_period = c.at("split").at("grace_period").get<std::size_t>();
    o.run.split.range = c.at("split").at("range").get<double>();
    o.run.split.candidate_thresholds = c.at("split").at("candidate_thresholds").get<std::size_t>();
    o.repeat = c.at("repeat").get<std::size_t>();
    o.jobs = c.at("jobs").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  return o;
}

}  // namespace buildstream
