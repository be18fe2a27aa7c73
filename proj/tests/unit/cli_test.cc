// Copyright 2026 The artconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.h"

namespace artconv::cli {
namespace {

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "artconv");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return Dispatch(static_cast<int>(argv.size()), argv.data());
}

TEST(CliTest, HelpListsEverySubcommand) {
  ::testing::internal::CaptureStdout();
  const int code = RunCli({"--help"});
  const std::string out = ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(code, kExitOk);
  for (const char* sub : {"synth", "features", "pairs", "train", "eval", "analyze", "gradcheck"}) {
    EXPECT_NE(out.find(sub), std::string::npos) << sub;
  }
}

TEST(CliTest, UsageErrors) {
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(RunCli({"--no-such-flag"}), kExitUsage);
  EXPECT_EQ(RunCli({"synth"}), kExitUsage);  // missing --out
  EXPECT_EQ(RunCli({"frobnicate"}), kExitUsage);
  ::testing::internal::GetCapturedStderr();
}

TEST(CliTest, DataErrorsExitTwo) {
  testing::TempDir dir;
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(RunCli({"features", "--manifest", (dir.path() / "missing.json").string(), "--out",
                 (dir.path() / "f").string()}),
            kExitData);
  ::testing::internal::GetCapturedStderr();
}

TEST(CliTest, GradcheckPasses) {
  testing::TempDir dir;
  const auto out = dir.path() / "gc.json";
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(RunCli({"gradcheck", "--dims", "5,4,3", "--out", out.string()}), kExitOk);
  ::testing::internal::GetCapturedStderr();
  std::ifstream in(out);
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_LT(j["max_relative_error"].get<double>(), 1e-4);
}

TEST(CliTest, SyntheticPipelineEndToEnd) {
  testing::TempDir dir;
  const std::string d = dir.path().string();
  const std::string manifest = d + "/corpus/manifest.json";
  ::testing::internal::CaptureStderr();
  ASSERT_EQ(RunCli({"--threads", "2", "synth", "--out", d + "/corpus", "--seed", "3", "--speakers",
                 "2", "--sentences", "8"}),
            kExitOk);
  ASSERT_EQ(RunCli({"features", "--manifest", manifest, "--out", d + "/feat", "--no-cmvn"}),
            kExitOk);
  ASSERT_EQ(RunCli({"pairs", "--manifest", manifest, "--split", "train", "--out", d + "/train.json"}),
            kExitOk);
  ASSERT_EQ(RunCli({"pairs", "--manifest", manifest, "--split", "validation", "--out",
                 d + "/val.json"}),
            kExitOk);
  ASSERT_EQ(RunCli({"pairs", "--manifest", manifest, "--condition", "interactive", "--baseline",
                 "--out", d + "/inter.json"}),
            kExitOk);
  ASSERT_EQ(RunCli({"train", "--manifest", manifest, "--features", d + "/feat", "--pairs",
                 d + "/train.json", "--val-pairs", d + "/val.json", "--epochs", "2", "--dims",
                 "39,6,6", "--out", d + "/model"}),
            kExitOk);
  ASSERT_EQ(RunCli({"eval", "--model", d + "/model/model.artm", "--pairs", d + "/val.json",
                 "--manifest", manifest, "--features", d + "/feat", "--report",
                 d + "/eval.json"}),
            kExitOk);
  ASSERT_EQ(RunCli({"analyze", "--model", d + "/model/model.artm", "--manifest", manifest,
                 "--features", d + "/feat", "--out", d + "/analysis"}),
            kExitOk);
  ::testing::internal::GetCapturedStderr();

  for (const char* f : {"model/model.artm", "model/final.artm", "model/history.json",
                        "model/config.json", "eval.json", "eval.config.json",
                        "analysis/report.json", "analysis/similarity_distributions.csv",
                        "analysis/speaker_scores.csv", "feat/config.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  }
  std::ifstream in(dir.path() / "model/history.json");
  const nlohmann::json history = nlohmann::json::parse(in);
  EXPECT_EQ(history["epochs"].size(), 2u);
  std::ifstream ev(dir.path() / "eval.json");
  const nlohmann::json report = nlohmann::json::parse(ev);
  EXPECT_TRUE(report.contains("accuracy"));
}

}  // namespace
}  // namespace artconv::cli
