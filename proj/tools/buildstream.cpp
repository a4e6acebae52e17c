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

// Command-line front end: gen, smote, pipeline, export-tree, replay.
//
// Exit codes: 0 ok, 1 usage (bad flags or configuration), 2 data error.
// Every flag can also be set through BUILDSTREAM_<FLAG> (upper case, dashes
// as underscores), e.g. BUILDSTREAM_SEED=7.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "buildstream/datagen.hpp"
#include "buildstream/errors.hpp"
#include "buildstream/evaluation.hpp"
#include "buildstream/hoeffding_tree.hpp"
#include "buildstream/pipeline.hpp"
#include "buildstream/smote.hpp"
#include "buildstream/stream.hpp"

namespace fs = std::filesystem;
using namespace buildstream;

namespace {

std::string env_name(const std::string& flag) {
  std::string out = "BUILDSTREAM_";
  for (char c : flag) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  auto* opt = app->add_option("--" + name, value, help)->envname(env_name(name));
  return opt->capture_default_str();
}

template <typename E>
CLI::Option* enum_flag(CLI::App* app, const std::string& name, E& value,
                       const std::map<std::string, E>& names, const std::string& help) {
  std::string current;
  for (const auto& [key, v] : names) {
    if (v == value) current = key;
  }
  return app
      ->add_option_function<std::string>(
          "--" + name, [&value, &names](const std::string& s) { value = names.at(s); }, help)
      ->envname(env_name(name))
      ->default_str(current)
      ->transform(CLI::IsMember(names, CLI::ignore_case));
}

const std::map<std::string, DistanceNormalization> kNormalizations{
    {"minmax", DistanceNormalization::MinMax}, {"none", DistanceNormalization::None}};
const std::map<std::string, DriftAction> kDriftActions{{"record", DriftAction::Record},
                                                       {"reset-tree", DriftAction::ResetTree}};

void add_split_flags(CLI::App* app, SplitConfig& split) {
  flag(app, "delta", split.delta, "Hoeffding split confidence complement")
      ->check(CLI::Range(0.0, 1.0));
  flag(app, "tau", split.tau, "tie threshold")->check(CLI::NonNegativeNumber);
  flag(app, "grace", split.grace_period, "instances between split checks per leaf")
      ->check(CLI::PositiveNumber);
  flag(app, "candidate-thresholds", split.candidate_thresholds,
       "split points tried per attribute")
      ->check(CLI::PositiveNumber);
}

void add_smote_flags(CLI::App* app, SmoteConfig& smote, const std::string& percent_flag) {
  flag(app, percent_flag, smote.percent, "oversampling amount, multiple of 100");
  flag(app, "k", smote.k, "nearest neighbours per seed")->check(CLI::PositiveNumber);
  enum_flag(app, "normalization", smote.normalization, kNormalizations,
            "distance scaling: minmax|none");
}

void write_text(const std::optional<fs::path>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  write_artifacts(path->parent_path().empty() ? fs::path(".") : path->parent_path(),
                  {{path->filename().string(), text}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build-outcome stream mining: SMOTE, Hoeffding tree, ADWIN, prequential runs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // gen ---------------------------------------------------------------------
  GenSpec gen;
  std::size_t gen_informative = gen.informative.size();
  std::optional<std::size_t> gen_shift;
  std::string gen_start = format_timestamp(gen.start);
  std::optional<fs::path> gen_output, gen_schema;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic build stream as CSV");
  flag(gen_cmd, "success", gen.success_count, "number of successful builds");
  flag(gen_cmd, "failure", gen.failure_count, "number of failed builds");
  flag(gen_cmd, "overlap", gen.overlap, "class mean separation in standard deviations");
  flag(gen_cmd, "informative", gen_informative, "number of informative leading features");
  flag(gen_cmd, "shift-point", gen_shift, "index where the class mix changes");
  flag(gen_cmd, "post-shift-success", gen.post_shift_success_probability,
       "success probability after the shift point");
  flag(gen_cmd, "seed", gen.seed, "random seed");
  flag(gen_cmd, "start", gen_start, "first build date, YYYY-MM-DDTHH:MM:SS");
  flag(gen_cmd, "step-seconds", gen.step_seconds, "seconds between builds");
  flag(gen_cmd, "output", gen_output, "output CSV (stdout when omitted)");
  flag(gen_cmd, "schema", gen_schema, "schema JSON (default: the 38 build metrics)");

  // smote -------------------------------------------------------------------
  SmoteConfig smote;
  fs::path smote_input;
  std::optional<fs::path> smote_output, smote_schema;
  int smote_passes = 2;
  auto* smote_cmd = app.add_subcommand("smote", "oversample a stream, emit CSV with provenance");
  flag(smote_cmd, "input", smote_input, "input CSV")->required();
  flag(smote_cmd, "output", smote_output, "output CSV (stdout when omitted)");
  flag(smote_cmd, "schema", smote_schema, "schema JSON");
  flag(smote_cmd, "seed", smote.seed, "random seed");
  flag(smote_cmd, "passes", smote_passes, "1: minority class once, 2: both classes in turn")
      ->check(CLI::Range(1, 2));
  add_smote_flags(smote_cmd, smote, "percent");

  // pipeline ----------------------------------------------------------------
  PipelineOptions pipe;
  fs::path pipe_out = ".";
  auto* pipe_cmd = app.add_subcommand("pipeline", "sort, oversample, run prequentially, export");
  flag(pipe_cmd, "input", pipe.input, "input CSV")->required();
  flag(pipe_cmd, "schema", pipe.schema, "schema JSON");
  flag(pipe_cmd, "out-dir", pipe_out, "directory for series.csv, summary.json, tree.dot, ...");
  flag(pipe_cmd, "seed", pipe.run.seed, "random seed");
  flag(pipe_cmd, "window", pipe.run.window_size, "window for windowed metrics")
      ->check(CLI::PositiveNumber);
  enum_flag(pipe_cmd, "drift-action", pipe.run.drift_action, kDriftActions, "record|reset-tree");
  flag(pipe_cmd, "adwin-delta", pipe.run.adwin_delta, "ADWIN confidence")
      ->check(CLI::Range(0.0, 1.0));
  flag(pipe_cmd, "repeat", pipe.repeat, "seed-varied repetitions")->check(CLI::PositiveNumber);
  flag(pipe_cmd, "jobs", pipe.jobs, "repetitions run in parallel")->check(CLI::PositiveNumber);
  add_split_flags(pipe_cmd, pipe.run.split);
  add_smote_flags(pipe_cmd, pipe.run.smote, "smote-percent");

  // export-tree -------------------------------------------------------------
  RunConfig tree_cfg;
  tree_cfg.smote.percent = 0;
  fs::path tree_input;
  std::optional<fs::path> tree_schema, tree_dot, tree_stats;
  auto* tree_cmd = app.add_subcommand("export-tree", "train on a stream and emit the tree as DOT");
  flag(tree_cmd, "input", tree_input, "input CSV")->required();
  flag(tree_cmd, "schema", tree_schema, "schema JSON");
  flag(tree_cmd, "seed", tree_cfg.seed, "random seed (used when oversampling)");
  flag(tree_cmd, "dot", tree_dot, "DOT output (stdout when omitted)");
  flag(tree_cmd, "stats", tree_stats, "tree stats JSON output (stdout when omitted)");
  add_split_flags(tree_cmd, tree_cfg.split);
  add_smote_flags(tree_cmd, tree_cfg.smote, "smote-percent");

  // replay ------------------------------------------------------------------
  fs::path replay_manifest;
  fs::path replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a pipeline manifest and verify outputs");
  flag(replay_cmd, "manifest", replay_manifest, "manifest.json of an earlier run")
      ->required()
      ;
  flag(replay_cmd, "out-dir", replay_out, "directory to write the reproduced outputs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) {
      gen.informative = first_features(gen_informative);
      gen.shift_point = gen_shift;
      gen.start = parse_timestamp(gen_start);
      const auto stream = generate_stream(gen, load_schema(gen_schema));
      write_text(gen_output, write_stream(stream));
    } else if (*smote_cmd) {
      smote.validate();
      const auto schema = load_schema(smote_schema);
      const auto input = sort_by_date(parse_stream(read_file(smote_input), schema));
      LabeledStream out = input;
      if (smote.percent > 0) {
        if (smote_passes == 2) {
          out = double_smote(input, smote.percent, smote);
        } else {
          const ClassCounts& c = input.class_counts();
          const ClassLabel minority =
              c.success < c.failure ? ClassLabel::Success : ClassLabel::Failure;
          Rng rng(derive_seed(smote.seed, 1));
          out = sort_by_date(smote_pass(input, minority, smote, rng, "s1"));
        }
      }
      write_text(smote_output, write_stream(out, WriteOptions{true}));
    } else if (*pipe_cmd) {
      write_artifacts(pipe_out, pipeline_artifacts(pipe));
    } else if (*tree_cmd) {
      const auto schema = load_schema(tree_schema);
      const auto input = parse_stream(read_file(tree_input), schema);
      const PipelineResult result = run_once(input, tree_cfg);
      write_text(tree_dot, result.artifacts.at("tree.dot"));
      write_text(tree_stats, result.artifacts.at("tree_stats.json"));
    } else if (*replay_cmd) {
      const std::string text = read_file(replay_manifest);
      const PipelineOptions options = options_from_manifest(text);
      const Artifacts artifacts = pipeline_artifacts(options);
      if (artifacts.at("manifest.json") != text) {
        std::cerr << "replay: outputs differ from the manifest\n";
        return 2;
      }
      write_artifacts(replay_out, artifacts);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
