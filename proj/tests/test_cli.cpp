// Copyright 2026 The qcvv Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "qcvv/data_io.hpp"
#include "qcvv/model_io.hpp"
#include "qcvv/model_pack.hpp"
#include "qcvv/results_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  int code = qcvv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    root = fs::temp_directory_path() / ("qcvv_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(root);
  }
  void TearDown() override { fs::remove_all(root); }
  std::string at(const std::string &rel) const { return (root / rel).string(); }

  fs::path root;
};

}  // namespace

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  auto r = cli({"rb", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--out"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"design", "gst", "--pack", "smq1Q_XYI"}).code, 1);  // --out missing
  EXPECT_EQ(cli({"design", "gst", "--pack", "smq1Q_XYI", "--out", at("d"), "--bogus"}).code, 1);
  EXPECT_EQ(cli({"fit", at("nowhere")}).code, 1);
  EXPECT_EQ(cli({"design", "gst", "--pack", "nope", "--out", at("d")}).code, 1);
}

TEST_F(CliTest, FiducialProblemsExitTwo) {
  auto r = cli({"design", "gst", "--pack", "smq1Q_Xpi2_rpe", "--out", at("d")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, GstPipeline) {
  ASSERT_EQ(cli({"design", "gst", "--pack", "smq1Q_XYI", "--max-length", "4", "--out", at("g")}).code, 0);
  EXPECT_TRUE(fs::exists(at("g/edesign/design.txt")));
  EXPECT_TRUE(fs::exists(at("g/data/dataset.txt")));
  // Template has no counts yet.
  EXPECT_EQ(cli({"fit", at("g")}).code, 1);

  auto s = cli({"simulate", at("g"), "--pack", "smq1Q_XYI", "--depolarize", "0.01", "--shots", "1000",
                "--seed", "4"});
  ASSERT_EQ(s.code, 0) << s.err;
  auto pd = qcvv::load_data_from_dir(at("g"));
  ASSERT_TRUE(pd.counts.has_value());
  EXPECT_EQ(pd.counts->size(), pd.design.size());

  auto f = cli({"fit", at("g"), "--estimators", "TP,Target", "--out", at("res")});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_NE(f.out.find("TP"), std::string::npos);
  auto res = qcvv::load_results(at("res"));
  EXPECT_EQ(res.estimates.size(), 2u);

  auto rep = cli({"report", "--gst", at("res"), "--out", at("r.html"), "--title", "run"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  std::ifstream in(at("r.html"));
  std::string html((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(html.find("Gate set tomography"), std::string::npos);
}

TEST_F(CliTest, TestModelCommand) {
  ASSERT_EQ(cli({"design", "gst", "--pack", "smq1Q_XYI", "--max-length", "2", "--out", at("g")}).code, 0);
  ASSERT_EQ(cli({"simulate", at("g"), "--pack", "smq1Q_XYI", "--seed", "1"}).code, 0);
  std::ofstream(at("m.txt")) << qcvv::model_to_string(qcvv::target_model_pack("smq1Q_XYI").target);
  auto r = cli({"test-model", at("g"), "--model", at("m.txt")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(cli({"test-model", at("g"), "--model", at("missing.txt")}).code, 1);
}

TEST_F(CliTest, RbAndRpePipelines) {
  ASSERT_EQ(cli({"design", "rb", "--qubits", "1", "--depths", "0,2,8,32", "--k", "10", "--seed", "3", "--out",
                 at("rb")})
                .code,
            0);
  ASSERT_EQ(cli({"simulate", at("rb"), "--depolarize", "0.01", "--shots", "200", "--seed", "5"}).code, 0);
  auto r = cli({"rb", at("rb"), "--out", at("rb.tbl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r"), std::string::npos);
  auto t = qcvv::load_table(at("rb.tbl"));
  EXPECT_EQ(t.rows.size(), 4u);

  ASSERT_EQ(cli({"design", "rpe", "--max-length", "32", "--out", at("rpe")}).code, 0);
  ASSERT_EQ(cli({"simulate", at("rpe"), "--pack", "smq1Q_Xpi2_rpe", "--shots", "500", "--seed", "2"}).code, 0);
  auto p = cli({"rpe", at("rpe")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("theta"), std::string::npos);
}

TEST_F(CliTest, DriftAndCompare) {
  ASSERT_EQ(cli({"design", "gst", "--pack", "smq1Q_XYI", "--max-length", "1", "--out", at("g")}).code, 0);
  ASSERT_EQ(cli({"simulate", at("g"), "--pack", "smq1Q_XYI", "--seed", "1", "--out", at("a")}).code, 0);
  ASSERT_EQ(cli({"simulate", at("g"), "--pack", "smq1Q_XYI", "--seed", "2", "--out", at("b")}).code, 0);
  auto c = cli({"compare", at("a"), at("b"), "--worst", "3"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(cli({"compare", at("a")}).code, 1);

  ASSERT_EQ(cli({"simulate", at("g"), "--pack", "smq1Q_XYI", "--shots", "1", "--passes", "64", "--seed", "3",
                 "--out", at("ts")})
                .code,
            0);
  auto d = cli({"drift", at("ts")});
  ASSERT_EQ(d.code, 0) << d.err;

  auto rep = cli({"report", "--drift", at("ts"), "--compare", at("a"), at("b"), "--out", at("r.html")});
  ASSERT_EQ(rep.code, 0) << rep.err;
}

TEST_F(CliTest, EmptyReport) {
  auto r = cli({"report", "--out", at("empty.html")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(at("empty.html"));
  std::string html((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(html.find("No results are available."), std::string::npos);
}
