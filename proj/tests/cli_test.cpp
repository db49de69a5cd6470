/*
 * Copyright 2026 The neurosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "neurosim/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "neurosim/errors.hpp"

namespace neurosim::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "neurosim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("neurosim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  fs::path dir_;
};

constexpr const char* kHiddenLayer = R"(
[topology]
kind = shared_bus
t_bus = 1

[workload]
layers = 1,2,1
t_comp = 5
)";

TEST(ParseValueList, Forms) {
  EXPECT_EQ(parse_value_list("2..5"), (std::vector<std::int64_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_value_list("2..9:3"), (std::vector<std::int64_t>{2, 5, 8}));
  EXPECT_EQ(parse_value_list("1,2,4"), (std::vector<std::int64_t>{1, 2, 4}));
  EXPECT_TRUE(parse_value_list("").empty());
  EXPECT_THROW(parse_value_list("1,x"), Error);
  EXPECT_THROW(parse_value_list("5..2"), Error);
}

TEST(ParseConfig, ReadsSections) {
  std::istringstream in(R"(
[topology]
kind = empa
clusters = 2
rows = 3
cols = 3
t_hop = 2
remap = 1:5

[workload]
layers = 1,2,1
time_model = grid
period = 10

[sweep]
parameter = clusters
values = 2..4

[output]
format = structured-records
)");
  const auto cfg = parse_config(in);
  EXPECT_EQ(cfg.experiment.topology.kind, TopologyKind::kEmpa);
  EXPECT_EQ(cfg.experiment.topology.geometry.clusters, 2);
  EXPECT_EQ(cfg.experiment.topology.latencies.hop, 2);
  ASSERT_EQ(cfg.experiment.topology.remaps.size(), 1u);
  EXPECT_EQ(cfg.experiment.topology.remaps[0].second, 5);
  EXPECT_EQ(std::get<TimeGrid>(cfg.experiment.workload.time_model).period, 10);
  EXPECT_EQ(cfg.sweep_parameter, SweepParameter::kClusters);
  EXPECT_EQ(cfg.sweep_values.size(), 3u);
  EXPECT_EQ(cfg.format, DatasetFormat::kRecords);
}

TEST(ParseConfig, RejectsBadInput) {
  for (const char* text : {"[topology]\nkind = ring\n[workload]\nlayers = 1,1\n",
                           "[topology]\nkind = direct\n[workload]\nlayers = 1,1\nspeed = 3\n",
                           "[topology]\nkind = direct\n[workload]\nlayers = 1,1\nt_comp = 2.5\n",
                           "[topology]\nkind = direct\n",
                           "[extras]\nx = 1\n",
                           "[topology\nkind = direct\n"}) {
    std::istringstream in(text);
    try {
      parse_config(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig) << text;
    }
  }
}

TEST_F(CliTest, RunWritesOneRow) {
  const auto config = write("run.ini", kHiddenLayer);
  const auto r = invoke({"run", "--config", config});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], kDatasetHeader);
  EXPECT_EQ(rows[1].rfind("run,13,", 0), 0u) << rows[1];
}

TEST_F(CliTest, RunWritesTrace) {
  const auto config = write("run.ini", kHiddenLayer);
  const auto trace = (dir_ / "trace.jsonl").string();
  const auto data = (dir_ / "data.csv").string();
  const auto r = invoke({"run", "--config", config, "--out", data, "--trace", trace});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto records = lines(slurp(trace));
  ASSERT_FALSE(records.empty());
  EXPECT_EQ(records[0], R"({"time":0,"kind":"Stimulus","subject":0,"object":-1,"duration":0})");
  EXPECT_EQ(lines(slurp(data)).size(), 2u);
}

TEST_F(CliTest, MalformedConfigIsUsageError) {
  const auto config = write("bad.ini", "[topology]\nkind = shared_bus\nt_bus = fast\n[workload]\nlayers = 1,1\n");
  const auto r = invoke({"run", "--config", config});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("error[config]: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  EXPECT_EQ(invoke({"run"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", (dir_ / "absent.ini").string()}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
}

TEST_F(CliTest, UnplaceableWorkloadIsRuntimeError) {
  const auto small = write("small.ini",
                           "[topology]\nkind = shared_bus\nnodes = 2\n[workload]\nlayers = 1,2,1\n");
  const auto r = invoke({"run", "--config", small});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_EQ(r.err.rfind("error[capacity]: ", 0), 0u) << r.err;
}

TEST_F(CliTest, SweepWritesOneRowPerValue) {
  const auto config = write("sweep.ini", std::string(kHiddenLayer) + "[sweep]\nparameter = hidden_width\nvalues = 1..8\n");
  const auto r = invoke({"sweep", "--config", config, "--jobs", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[1].rfind("1,12,", 0), 0u);
  EXPECT_EQ(rows[8].rfind("8,19,", 0), 0u);
}

TEST_F(CliTest, SweepErrors) {
  const auto unknown = write("u.ini", std::string(kHiddenLayer) + "[sweep]\nparameter = width\nvalues = 1..8\n");
  EXPECT_EQ(invoke({"sweep", "--config", unknown}).code, kExitUsage);
  const auto empty = write("e.ini", std::string(kHiddenLayer) + "[sweep]\nparameter = hidden_width\nvalues =\n");
  EXPECT_EQ(invoke({"sweep", "--config", empty}).code, kExitUsage);
  const auto none = write("n.ini", kHiddenLayer);
  EXPECT_EQ(invoke({"sweep", "--config", none}).code, kExitUsage);
  const auto bad_value = write("b.ini", std::string(kHiddenLayer) + "[sweep]\nparameter = clusters\nvalues = 1..3\n");
  EXPECT_EQ(invoke({"sweep", "--config", bad_value}).code, kExitUsage);
}

TEST_F(CliTest, RecordsFormat) {
  const auto config = write("run.ini", kHiddenLayer);
  const auto r = invoke({"run", "--config", config, "--format", "structured-records"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind(R"({"param":"run","total_time":13,)", 0), 0u) << r.out;
  EXPECT_EQ(invoke({"run", "--config", config, "--format", "xml"}).code, kExitUsage);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const auto config = write("sweep.ini", std::string(kHiddenLayer) + "[sweep]\nparameter = t_bus\nvalues = 1..6\n");
  std::string first_data, first_trace;
  for (int i = 0; i < 2; ++i) {
    const auto data = (dir_ / ("d" + std::to_string(i))).string();
    const auto trace = (dir_ / ("t" + std::to_string(i))).string();
    ASSERT_EQ(invoke({"sweep", "--config", config, "--out", data, "--trace", trace, "--jobs", "4"}).code,
              kExitOk);
    if (i == 0) {
      first_data = slurp(data);
      first_trace = slurp(trace);
    } else {
      EXPECT_EQ(slurp(data), first_data);
      EXPECT_EQ(slurp(trace), first_trace);
    }
  }
  EXPECT_NE(first_trace.find(R"({"sweep":"t_bus","value":3})"), std::string::npos);
}

TEST(CliModel, IdealScalingIsLinear) {
  const auto r = invoke({"model", "--s", "0", "--c", "0", "--n-max", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "n,speedup1,speedup2,efficiency,payload_perf");
  EXPECT_EQ(rows[8], "8,8,8,1,8");
}

TEST(CliModel, SecondOrderPeaksAtTen) {
  const auto r = invoke({"model", "--s", "0", "--c", "0.01", "--n-max", "40"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  double best = 0.0;
  int best_n = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream row(rows[i]);
    std::string n, s1, s2;
    std::getline(row, n, ',');
    std::getline(row, s1, ',');
    std::getline(row, s2, ',');
    if (std::stod(s2) > best) {
      best = std::stod(s2);
      best_n = std::stoi(n);
    }
  }
  EXPECT_EQ(best_n, 10);
}

TEST(CliModel, PresetsAndErrors) {
  const auto r = invoke({"model", "--preset", "all", "--n-max", "1000000000", "--points", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out)[0], "profile,n,speedup1,speedup2,efficiency,payload_perf");
  EXPECT_EQ(invoke({"model", "--preset", "quantum"}).code, kExitUsage);
  EXPECT_EQ(invoke({"model", "--s", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"model", "--s", "0.1", "--n-min", "0"}).code, kExitUsage);
}

TEST(CliModel, EfficiencySurface) {
  const auto r = invoke({"model", "--surface", "0.001,0.01", "--n-max", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  EXPECT_EQ(rows[0], "s,n,efficiency");
  EXPECT_EQ(rows.size(), 9u);
}

TEST(CliExtrapolate, MixedPrecision) {
  const auto r = invoke({"extrapolate", "--perf-a", "148.6", "--width-a", "64", "--perf-b", "445",
                         "--width-b", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].rfind("housekeeping_share=", 0), 0u);
  const double fp0 = std::stod(rows[1].substr(rows[1].find('=') + 1));
  EXPECT_NEAR(fp0, 1327.85, 0.01);
}

TEST(CliExtrapolate, Errors) {
  const auto same = invoke({"extrapolate", "--perf-a", "100", "--width-a", "64", "--perf-b", "100",
                            "--width-b", "16"});
  EXPECT_EQ(same.code, kExitUsage);
  EXPECT_EQ(same.err.rfind("error[no-speedup]: ", 0), 0u) << same.err;
  const auto ideal = invoke({"extrapolate", "--perf-a", "100", "--width-a", "64", "--perf-b", "400",
                             "--width-b", "16"});
  EXPECT_EQ(ideal.code, kExitUsage);
  EXPECT_EQ(ideal.err.rfind("error[zero-housekeeping]: ", 0), 0u) << ideal.err;
  EXPECT_EQ(invoke({"extrapolate", "--perf-a", "100"}).code, kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

}  // namespace
}  // namespace neurosim::cli
