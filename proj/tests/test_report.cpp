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
#include <numbers>
#include <random>

#include "qcvv/forward_sim.hpp"
#include "qcvv/report.hpp"

using namespace qcvv;
namespace fs = std::filesystem;

namespace {

std::size_t count(const std::string &s, const std::string &needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

Matrix x_rotation(double theta) {
  CMatrix U(2, 2);
  const std::complex<double> i(0, 1);
  U << std::cos(theta / 2), -i * std::sin(theta / 2), -i * std::sin(theta / 2), std::cos(theta / 2);
  return unitary_to_ptm(U);
}

struct GstFixture {
  ModelPack pack = target_model_pack("smq1Q_XYI");
  GstDesign design = make_gst_design(pack, 4);
  ModelEstimateResults results;

  explicit GstFixture(const GateSetModel &truth, long shots = 1000) {
    auto ds = simulate_dataset(truth, design.all_circuits(), shots, 17);
    results = run_long_sequence_gst(design, ds, pack.target, {"TP", "Target"});
  }
};

}  // namespace

TEST(Report, EmptyInputsSayNothingAvailable) {
  std::string html = render_report({}, {});
  EXPECT_NE(html.find("No results are available."), std::string::npos);
  EXPECT_EQ(html.rfind("<!DOCTYPE html>", 0), 0u);
  EXPECT_NE(html.find("</html>"), std::string::npos);
}

TEST(Report, DeterministicAndSelfContained) {
  GstFixture f(depolarize(target_model_pack("smq1Q_XYI").target, 0.01, 0.0));
  ReportInputs in;
  in.gst = f.results;
  ReportSpec spec;
  spec.title = "t <&> \"q\"";
  std::string a = render_report(in, spec), b = render_report(in, spec);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("t &lt;&amp;&gt; &quot;q&quot;"), std::string::npos);
  for (const char *bad : {"src=", "href=", "<link", "@import", "url(", "<script"})
    EXPECT_EQ(a.find(bad), std::string::npos) << bad;
  EXPECT_NE(a.find("Gate set tomography"), std::string::npos);
  EXPECT_NE(a.find("Gxpi2:0"), std::string::npos);
}

TEST(Report, BoxGridShapeAndThresholds) {
  GstFixture f(depolarize(target_model_pack("smq1Q_XYI").target, 0.01, 0.0));
  auto grids = make_box_grids(f.design, summary_model(f.results.estimates.at("TP")), f.results.dataset);
  EXPECT_EQ(grids.size(), f.design.blocks.size());
  for (const auto &g : grids) {
    ASSERT_EQ(g.cells.size(), f.design.meas_fiducials.size());
    for (const auto &row : g.cells) {
      ASSERT_EQ(row.size(), f.design.prep_fiducials.size());
      for (const auto &c : row) {
        EXPECT_EQ(c.dof, 1);
        EXPECT_NEAR(c.threshold, 3.841458820694124, 1e-9);  // scipy chi2.ppf(0.95, 1)
        EXPECT_EQ(c.cls == CellClass::kRed, c.two_delta_logl > c.threshold);
      }
    }
  }
}

TEST(Report, OverRotationShowsRedCellsAgainstTarget) {
  auto pk = target_model_pack("smq1Q_XYI");
  const double five_degrees = 5.0 * std::numbers::pi / 180.0;
  auto truth = replace_op(pk.target, GateLabel{"Gxpi2", {"0"}},
                          make_full_tp(x_rotation(std::numbers::pi / 2 + five_degrees)));
  GstFixture f(truth, 10000);
  auto target_grids = make_box_grids(f.design, f.pack.target, f.results.dataset);
  auto fit_grids = make_box_grids(f.design, summary_model(f.results.estimates.at("TP")), f.results.dataset);
  auto reds = [](const std::vector<BoxGrid> &gs) {
    std::size_t n = 0, total = 0;
    for (const auto &g : gs)
      for (const auto &row : g.cells)
        for (const auto &c : row) {
          n += c.cls == CellClass::kRed;
          ++total;
        }
    return std::make_pair(n, total);
  };
  auto [t_red, t_total] = reds(target_grids);
  auto f_red = reds(fit_grids).first;
  EXPECT_GT(t_red, t_total / 4);
  EXPECT_LT(f_red, t_red / 4 + 1);

  ReportInputs in;
  in.gst = f.results;
  std::string html = render_report(in, {});
  EXPECT_GT(count(html, "class=\"red\""), 0u);
}

TEST(Report, GateSummaryForDepolarizedGates) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto s = gate_summary(depolarize(pk.target, 0.07, 0.0), pk.target);
  ASSERT_EQ(s.size(), 3u);
  for (const auto &g : s) {
    EXPECT_NEAR(g.infidelity, 0.0525, 1e-14);
    EXPECT_NEAR(g.trace_distance, 0.0525, 1e-12);
  }
}

TEST(Report, AllSections) {
  ReportInputs in;
  RbResults rb;
  rb.depths = {0, 1, 2};
  rb.mean_success = {0.99, 0.98, 0.97};
  rb.std_success = {0.01, 0.01, 0.01};
  rb.samples = {5, 5, 5};
  rb.fit = {0.5, 0.49, 0.98, 0.0, 0.001};
  rb.r = 0.01;
  rb.fit_ok = true;
  in.rb = rb;
  RpeResults rpe;
  rpe.theta = 1.5808;
  rpe.generations = {RpeGeneration{0, 1, 0.5, 0.5, 1.58, 1.58, true}};
  in.rpe = rpe;
  StabilityReport drift;
  in.drift = drift;
  ComparisonReport cmp;
  in.comparison = cmp;
  std::string html = render_report(in, {});
  for (const char *h : {"Randomized benchmarking", "Robust phase estimation", "Drift detection", "Dataset comparison"})
    EXPECT_NE(html.find(h), std::string::npos) << h;
  EXPECT_EQ(html.find("No results are available."), std::string::npos);
}

TEST(Report, WriteFailsOnBadPath) {
  EXPECT_THROW(write_report({}, {}, "/nonexistent_dir_qcvv/x/report.html"), DataError);
  std::random_device rd;
  fs::path p = fs::temp_directory_path() / ("qcvv_report_" + std::to_string(rd()) + ".html");
  write_report({}, {}, p.string());
  std::ifstream in(p);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  fs::remove(p);
  EXPECT_EQ(text, render_report({}, {}));
}
