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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "buildstream/pipeline.hpp"
#include "buildstream/stream.hpp"

namespace fs = std::filesystem;
using namespace buildstream;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("buildstream-cli-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(BUILDSTREAM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t data_rows(const std::string& csv_path) {
  return parse_stream(read_file(csv_path), std::make_shared<const StreamSchema>(StreamSchema::build_metrics()))
      .size();
}

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("gen writes a parseable default stream") {
  TempDir tmp;
  REQUIRE(run("gen --seed 3 --output " + (tmp / "b.csv")) == 0);
  const auto s = parse_stream(read_file(tmp / "b.csv"),
                              std::make_shared<const StreamSchema>(StreamSchema::build_metrics()));
  CHECK(s.size() == 199);
  CHECK(s.class_counts() == ClassCounts{127, 72});
}

TEST_CASE("smote subcommand") {
  TempDir tmp;
  REQUIRE(run("gen --seed 3 --output " + (tmp / "b.csv")) == 0);
  REQUIRE(run("smote --input " + (tmp / "b.csv") + " --percent 900 --output " + (tmp / "o.csv")) == 0);
  const auto s = parse_stream(read_file(tmp / "o.csv"),
                              std::make_shared<const StreamSchema>(StreamSchema::build_metrics()));
  CHECK(s.class_counts() == ClassCounts{1270, 720});
  REQUIRE(run("smote --passes 1 --input " + (tmp / "b.csv") + " --percent 100 --output " +
              (tmp / "p.csv")) == 0);
  CHECK(data_rows(tmp / "p.csv") == 199 + 72);
}

TEST_CASE("pipeline on 199 rows gives 1990 series rows, and 199 without smote") {
  TempDir tmp;
  REQUIRE(run("gen --seed 5 --output " + (tmp / "b.csv")) == 0);
  REQUIRE(run("pipeline --input " + (tmp / "b.csv") +
              " --smote-percent 900 --grace 200 --tau 0.05 --seed 7 --out-dir " + (tmp / "a")) == 0);
  CHECK(line_count(tmp / "a/series.csv") == 1991);
  for (const char* f : {"summary.json", "tree.dot", "tree_stats.json", "manifest.json"}) {
    CHECK(fs::exists(tmp.path / "a" / f));
  }
  REQUIRE(run("pipeline --input " + (tmp / "b.csv") + " --smote-percent 0 --out-dir " + (tmp / "z")) == 0);
  CHECK(line_count(tmp / "z/series.csv") == 200);
}

TEST_CASE("same command twice gives byte-identical outputs and replay reproduces them") {
  TempDir tmp;
  REQUIRE(run("gen --seed 5 --output " + (tmp / "b.csv")) == 0);
  const std::string args = "pipeline --input " + (tmp / "b.csv") + " --seed 11 --out-dir ";
  REQUIRE(run(args + (tmp / "a")) == 0);
  REQUIRE(run(args + (tmp / "b")) == 0);
  REQUIRE(run("replay --manifest " + (tmp / "a/manifest.json") + " --out-dir " + (tmp / "c")) == 0);
  for (const char* f : {"series.csv", "summary.json", "tree.dot", "tree_stats.json", "manifest.json"}) {
    const std::string a = read_file(tmp.path / "a" / f);
    CHECK(a == read_file(tmp.path / "b" / f));
    CHECK(a == read_file(tmp.path / "c" / f));
  }
}

TEST_CASE("repeat writes one directory per seed") {
  TempDir tmp;
  REQUIRE(run("gen --seed 5 --output " + (tmp / "b.csv")) == 0);
  REQUIRE(run("pipeline --input " + (tmp / "b.csv") + " --repeat 3 --jobs 2 --smote-percent 100 --out-dir " +
              (tmp / "r")) == 0);
  for (const char* d : {"rep-000", "rep-001", "rep-002"}) CHECK(fs::exists(tmp.path / "r" / d / "series.csv"));
  const std::string manifest = read_file(tmp.path / "r/manifest.json");
  CHECK(manifest.find("rep-002/series.csv") != std::string::npos);
}

TEST_CASE("export-tree") {
  TempDir tmp;
  REQUIRE(run("gen --seed 5 --success 600 --failure 400 --overlap 3 --output " + (tmp / "b.csv")) == 0);
  REQUIRE(run("export-tree --input " + (tmp / "b.csv") + " --dot " + (tmp / "t.dot") + " --stats " +
              (tmp / "t.json")) == 0);
  CHECK(read_file(tmp / "t.dot").rfind("digraph", 0) == 0);
  CHECK(read_file(tmp / "t.json").find("\"depth\"") != std::string::npos);
}

TEST_CASE("exit codes and no partial outputs") {
  TempDir tmp;
  REQUIRE(run("gen --seed 5 --output " + (tmp / "b.csv")) == 0);
  CHECK(run("") == 1);
  CHECK(run("pipeline") == 1);
  CHECK(run("pipeline --input " + (tmp / "b.csv") + " --bogus 1") == 1);
  CHECK(run("pipeline --input " + (tmp / "b.csv") + " --grace 0") == 1);
  CHECK(run("pipeline --input " + (tmp / "b.csv") + " --smote-percent 150 --out-dir " + (tmp / "x")) == 1);
  CHECK_FALSE(fs::exists(tmp.path / "x"));

  CHECK(run("pipeline --input " + (tmp / "missing.csv") + " --out-dir " + (tmp / "y")) == 2);
  {
    std::ofstream bad(tmp / "bad.csv");
    bad << "id,date,outcome\nx,2010-01-01T00:00:00,success\n";
  }
  CHECK(run("pipeline --input " + (tmp / "bad.csv") + " --out-dir " + (tmp / "y")) == 2);
  CHECK_FALSE(fs::exists(tmp.path / "y" / "series.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "y" / "manifest.json"));
}

TEST_CASE("flags can come from the environment") {
  TempDir tmp;
  const std::string cmd =
      "BUILDSTREAM_SEED=4 " + std::string(BUILDSTREAM_CLI) + " gen --output " + (tmp / "e.csv");
  REQUIRE(std::system(cmd.c_str()) == 0);
  REQUIRE(run("gen --seed 4 --output " + (tmp / "f.csv")) == 0);
  REQUIRE(run("gen --seed 5 --output " + (tmp / "g.csv")) == 0);
  CHECK(read_file(tmp / "e.csv") == read_file(tmp / "f.csv"));
  CHECK(read_file(tmp / "e.csv") != read_file(tmp / "g.csv"));
}
