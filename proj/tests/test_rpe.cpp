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

#include <cmath>
#include <numbers>

#include "qcvv/forward_sim.hpp"
#include "qcvv/gst.hpp"
#include "qcvv/rpe.hpp"

using namespace qcvv;

namespace {

const double kPi = std::numbers::pi;

Matrix x_rotation(double theta) {
  CMatrix U(2, 2);
  const std::complex<double> i(0, 1);
  U << std::cos(theta / 2), -i * std::sin(theta / 2), -i * std::sin(theta / 2), std::cos(theta / 2);
  return unitary_to_ptm(U);
}

GateSetModel rpe_model(double theta, double depol = 0.0) {
  auto pk = target_model_pack("smq1Q_Xpi2_rpe");
  Matrix g = depolarizing_ptm(1, depol) * x_rotation(theta);
  return replace_op(pk.target, GateLabel{"Gxpi2", {"0"}}, make_full_tp(g));
}

std::vector<Circuit> all_circuits(const RpeDesign &d) {
  std::vector<Circuit> out = d.cos_circuits;
  out.insert(out.end(), d.sin_circuits.begin(), d.sin_circuits.end());
  return out;
}

}  // namespace

TEST(RpeDesign, GenerationsAndCircuits) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 64);
  EXPECT_EQ(d.lengths, (std::vector<long>{1, 2, 4, 8, 16, 32, 64}));
  ASSERT_EQ(d.cos_circuits.size(), 7u);
  ASSERT_EQ(d.sin_circuits.size(), 7u);
  EXPECT_EQ(d.cos_circuits[2].str(), "[Gxpi2:0][Gxpi2:0][Gxpi2:0][Gxpi2:0]@(0)");
  EXPECT_EQ(d.sin_circuits[0].str(), "[Gypi2:0][Gzpi2:0][Gxpi2:0]@(0)");
  auto back = rpe_design_from_experiment(to_experiment_design(d));
  EXPECT_EQ(back.lengths, d.lengths);
  EXPECT_EQ(back.cos_circuits, d.cos_circuits);
  EXPECT_EQ(back.sin_circuits, d.sin_circuits);
}

TEST(RpeDesign, CosineProbabilitiesMatchClosedForm) {
  // numpy oracle: P(0 | Gx^L) = cos^2(L pi / 4)
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 64);
  auto m = target_model_pack("smq1Q_Xpi2_rpe").target;
  for (std::size_t g = 0; g < d.lengths.size(); ++g) {
    double c = std::cos(double(d.lengths[g]) * kPi / 4);
    EXPECT_NEAR(probs(m, d.cos_circuits[g]).at("0"), c * c, 1e-13);
  }
}

TEST(Rpe, ExactProbabilitiesRecoverAngle) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 1024);
  for (double eps : {0.01, -0.01, 0.003, 0.0, 0.2}) {
    double theta = kPi / 2 + eps;
    auto ds = exact_dataset(rpe_model(theta), all_circuits(d));
    auto r = run_rpe(d, ds);
    EXPECT_NEAR(r.theta, theta, 1e-6) << eps;
    EXPECT_FALSE(r.truncated);
    EXPECT_EQ(r.last_generation, int(d.lengths.size()) - 1);
  }
}

TEST(Rpe, DepolarizationDoesNotBiasAngle) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 256);
  auto ds = exact_dataset(rpe_model(kPi / 2 + 0.01, 0.002), all_circuits(d));
  EXPECT_NEAR(run_rpe(d, ds).theta, kPi / 2 + 0.01, 1e-6);
}

TEST(Rpe, FiniteShotPrecisionBound) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 64);
  const double theta = kPi / 2 + 0.01;
  auto m = rpe_model(theta);
  int ok = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    auto ds = simulate_dataset(m, all_circuits(d), 200, std::uint64_t(1000 + t));
    if (std::abs(run_rpe(d, ds).theta - theta) <= kPi / (2 * 64)) ++ok;
  }
  EXPECT_GE(ok, 90);
}

TEST(Rpe, InconsistentDataTruncates) {
  // Garbage at the longest generation: flipping its quadratures sends the
  // phase far from the prediction.
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 16);
  auto good = exact_dataset(rpe_model(kPi / 2 + 0.01), all_circuits(d));
  DataSet bad(good.outcomes());
  for (const auto &c : good.circuits()) {
    auto n = good.counts(c);
    if (c == d.cos_circuits.back() || c == d.sin_circuits.back()) std::swap(n[0], n[1]);
    bad.add(c, n);
  }
  auto r = run_rpe(d, bad);
  EXPECT_TRUE(r.truncated);
  EXPECT_LT(r.last_generation, int(d.lengths.size()) - 1);
  EXPECT_FALSE(r.generations.back().consistent);
  EXPECT_NEAR(r.theta, kPi / 2 + 0.01, kPi / (2 * 8));
}

TEST(Rpe, MissingCircuitIsAnError) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 4);
  DataSet empty({"0", "1"});
  EXPECT_THROW(run_rpe(d, empty), std::exception);
}

TEST(Rpe, FormattedOutputListsGenerations) {
  auto d = make_rpe_design(target_model_pack("smq1Q_Xpi2_rpe"), 8);
  auto r = run_rpe(d, exact_dataset(rpe_model(kPi / 2), all_circuits(d)));
  std::string s = format_rpe_results(r);
  EXPECT_NE(s.find("theta"), std::string::npos) << s;
}
