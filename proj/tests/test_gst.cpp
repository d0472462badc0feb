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
#include <random>

#include "gen.hpp"
#include "qcvv/forward_sim.hpp"
#include "qcvv/gauge.hpp"
#include "qcvv/gst.hpp"
#include "qcvv/model_io.hpp"
#include "qcvv/results_io.hpp"

using namespace qcvv;
namespace fs = std::filesystem;

namespace {

double max_prob_gap(const GateSetModel &a, const GateSetModel &b, const std::vector<Circuit> &cs) {
  EvalTree t(cs);
  return (bulk_probs(a, t) - bulk_probs(b, t)).cwiseAbs().maxCoeff();
}

double max_element_gap(const GateSetModel &a, const GateSetModel &b) {
  double gap = (a.prep().vec - b.prep().vec).cwiseAbs().maxCoeff();
  for (std::size_t e = 0; e < a.povm().effects.size(); ++e)
    gap = std::max(gap, (a.povm().effects[e] - b.povm().effects[e]).cwiseAbs().maxCoeff());
  for (const auto &[l, op] : a.ops()) gap = std::max(gap, (a.dense_op(l) - b.dense_op(l)).cwiseAbs().maxCoeff());
  return gap;
}

GateSetModel noisy_truth(testgen::Rng &rng) {
  auto m = set_parameterization(depolarize(target_model_pack("smq1Q_XYI").target, 0.01, 0.01),
                                ModelParam::kFullTP);
  Vector v = m.to_vector();
  for (Index i = 0; i < v.size(); ++i) v[i] += testgen::uniform_real(rng, -0.005, 0.005);
  m.from_vector(v);
  return m;
}

}  // namespace

TEST(GstDesign, ListSizesForXYI) {
  auto d = make_gst_design(target_model_pack("smq1Q_XYI"), 64);
  EXPECT_EQ(d.max_lengths, (std::vector<int>{1, 2, 4, 8, 16, 32, 64}));
  std::vector<std::size_t> sizes;
  for (const auto &l : d.circuit_lists) sizes.push_back(l.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{92, 168, 441, 817, 1201, 1585, 1969}));
  EXPECT_EQ(d.lgst_circuits.size(), 92u);
}

TEST(GstDesign, ListsAreNestedAndDistinct) {
  auto d = make_gst_design(target_model_pack("smq1Q_XYZI"), 16);
  for (std::size_t i = 0; i < d.circuit_lists.size(); ++i) {
    std::set<Circuit> s(d.circuit_lists[i].begin(), d.circuit_lists[i].end());
    EXPECT_EQ(s.size(), d.circuit_lists[i].size());
    if (i == 0) continue;
    for (const auto &c : d.circuit_lists[i - 1]) EXPECT_TRUE(s.count(c)) << c.str();
  }
}

TEST(GstDesign, BlocksMatchFiducialPairs) {
  auto d = make_gst_design(target_model_pack("smq1Q_XYI"), 4);
  ASSERT_FALSE(d.blocks.empty());
  for (const auto &b : d.blocks) {
    ASSERT_EQ(b.circuits.size(), d.meas_fiducials.size());
    for (std::size_t i = 0; i < b.circuits.size(); ++i) {
      ASSERT_EQ(b.circuits[i].size(), d.prep_fiducials.size());
      for (std::size_t j = 0; j < b.circuits[i].size(); ++j)
        EXPECT_EQ(b.circuits[i][j], d.prep_fiducials[j] + repeat(b.germ, b.power) + d.meas_fiducials[i]);
    }
    EXPECT_LE(int(b.germ.depth()) * b.power, b.max_length);
  }
}

TEST(GstDesign, ExperimentDesignRoundTrip) {
  auto d = make_gst_design(target_model_pack("smq1Q_XYI"), 8);
  auto e = to_experiment_design(d);
  EXPECT_EQ(e.type(), "gst");
  EXPECT_EQ(e.size(), d.all_circuits().size());
  auto back = gst_design_from_experiment(e);
  EXPECT_EQ(back.pack, d.pack);
  EXPECT_EQ(back.germs, d.germs);
  EXPECT_EQ(back.max_lengths, d.max_lengths);
  EXPECT_EQ(back.circuit_lists, d.circuit_lists);
  EXPECT_EQ(back.lgst_circuits, d.lgst_circuits);
}

TEST(Completeness, DeficientFiducialsRejected) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto rep = check_informational_completeness(pk.target, pk.prep_fiducials, pk.meas_fiducials);
  EXPECT_EQ(rep.prep_rank, 4);
  EXPECT_EQ(rep.meas_rank, 4);
  std::vector<Circuit> two(pk.prep_fiducials.begin(), pk.prep_fiducials.begin() + 2);
  EXPECT_THROW(check_informational_completeness(pk.target, two, pk.meas_fiducials), FiducialError);
  EXPECT_THROW(make_gst_design(target_model_pack("smq1Q_Xpi2_rpe"), 4), FiducialError);
}

TEST(Nongauge, CountsForPacks) {
  auto tp = [](const char *n) {
    return nongauge_params(set_parameterization(target_model_pack(n).target, ModelParam::kFullTP));
  };
  EXPECT_EQ(tp("smq1Q_XYI"), 31);
  EXPECT_EQ(tp("smq1Q_XYZI"), 43);
}

TEST(Lgst, ExactOnExactData) {
  testgen::Rng rng(77);
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 4);
  for (int trial = 0; trial < 5; ++trial) {
    auto truth = noisy_truth(rng);
    auto ds = exact_dataset(truth, d.lgst_circuits);
    auto est = run_lgst(d, ds, pk.target);
    EXPECT_LT(max_prob_gap(est, truth, d.all_circuits()), 1e-9);
    // Undo the residual gauge freedom and compare elements directly.
    auto aligned = gauge_optimize(est, truth);
    EXPECT_LT(max_element_gap(aligned, truth), 1e-9);
  }
}

TEST(Gauge, OptimizationRecoversRandomGauge) {
  testgen::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto truth = noisy_truth(rng);
    auto moved = gauge_transform(truth, testgen::tp_gauge(rng, 4, 0.2));
    auto r = gauge_optimize_full(moved, truth);
    EXPECT_LT(max_element_gap(r.model, truth), 1e-6);
    EXPECT_LT(r.objective, 1e-12);
    for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1] + 1e-15);
  }
}

TEST(Gauge, ObjectiveZeroAtTarget) {
  auto t = set_parameterization(target_model_pack("smq1Q_XYI").target, ModelParam::kFullTP);
  EXPECT_EQ(gauge_objective(t, t, Matrix::Identity(4, 4)), 0.0);
}

TEST(LongSequence, ExactDataGivesZeroDeviance) {
  testgen::Rng rng(5);
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 4);
  auto truth = noisy_truth(rng);
  auto ds = exact_dataset(truth, d.all_circuits());
  auto res = run_long_sequence_gst(d, ds, pk.target, {"TP"});
  const auto &est = res.estimates.at("TP");
  ASSERT_EQ(est.fits.size(), d.max_lengths.size());
  ASSERT_TRUE(est.models.count("final"));
  ASSERT_TRUE(est.models.count("stdgaugeopt"));
  EXPECT_LT(max_prob_gap(est.models.at("final"), truth, d.all_circuits()), 1e-6);
  EXPECT_LT(max_element_gap(gauge_optimize(est.models.at("final"), truth), truth), 1e-6);
  for (const auto &f : est.fits) {
    EXPECT_LT(std::abs(f.two_delta_logl), 1e-6);
    EXPECT_EQ(f.n_nongauge, 31);
    for (std::size_t i = 1; i < f.objective_history.size(); ++i)
      EXPECT_LE(f.objective_history[i], f.objective_history[i - 1] * (1 + 1e-12) + 1e-12);
  }
}

TEST(LongSequence, TargetEstimatorIsNotFitted) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 2);
  auto ds = exact_dataset(pk.target, d.all_circuits());
  auto res = run_long_sequence_gst(d, ds, pk.target, {"Target"});
  const auto &est = res.estimates.at("Target");
  const auto &fin = est.models.at("final");
  EXPECT_EQ(fin.num_params(), 0);  // held fixed
  for (const auto &[l, op] : pk.target.ops()) EXPECT_EQ(fin.dense_op(l), pk.target.dense_op(l));
  EXPECT_EQ(fin.prep().vec, pk.target.prep().vec);
}

TEST(LongSequence, EstimatorListParsing) {
  EXPECT_EQ(parse_estimator_list("TP,CPTP,Target"), (std::vector<std::string>{"TP", "CPTP", "Target"}));
  EXPECT_THROW(parse_estimator_list(""), std::exception);
}

TEST(Deviance, StableTermMatchesDirectFormula) {
  for (double x : {0.3, 0.5, 0.9}) {
    for (double d : {-0.5, -1e-2, -1e-3, -5e-4, 1e-4, 9e-4, 2e-3, 0.4}) {
      double f = x * (1 + d);
      // extended-precision reference; the plain double formula cancels
      long double F = f, X = x;
      double ref = double(F * std::log(F / X) + X - F);
      EXPECT_NEAR(kl_term(f, x), ref, 1e-9 * std::abs(ref) + 1e-19) << x << " " << d;
    }
    EXPECT_EQ(kl_term(0.0, x), x);
    EXPECT_EQ(kl_term(x, x), 0.0);
  }
  // 2 dlogL for a two-outcome binomial: 2 sum n log(f/p)
  CountTable t{{Circuit::empty({"0"})}, Matrix(1, 2), Vector(1)};
  t.counts << 30, 70;
  t.totals << 100;
  Matrix p(1, 2);
  p << 0.4, 0.6;
  double expect = 2 * (30 * std::log(0.3 / 0.4) + 70 * std::log(0.7 / 0.6));
  EXPECT_NEAR(per_circuit_two_delta_logl(p, t)[0], expect, 1e-12);
}

TEST(Wilks, DeterministicCircuitsCarryNoDof) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 2);
  const auto &cs = d.all_circuits();
  auto ds = simulate_dataset(pk.target, cs, 100, 2);
  auto w = wilks_stats(pk.target, ds, cs, Index(0));
  Matrix p = bulk_probs(pk.target, EvalTree(cs));
  double free = 0;
  for (Index i = 0; i < p.rows(); ++i) free += (p.row(i).array() > kProbClip).count() - 1;
  EXPECT_EQ(w.k, free);
  EXPECT_LT(w.k, double(cs.size()));  // some circuits are deterministic
  EXPECT_NEAR(w.nsigma, (w.two_delta_logl - w.k) / std::sqrt(2 * w.k), 1e-12);
}

TEST(ModelTest, WrongModelHasLargeNsigma) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 8);
  auto truth = depolarize(pk.target, 0.05, 0.0);
  auto ds = simulate_dataset(truth, d.all_circuits(), 1000, 1);
  auto right = run_model_test(truth, d, ds);
  auto wrong = run_model_test(pk.target, d, ds);
  EXPECT_LT(std::abs(right.estimates.begin()->second.fits.back().nsigma), 5.0);
  EXPECT_GT(wrong.estimates.begin()->second.fits.back().nsigma, 50.0);
}

TEST(Results, SaveLoadRoundTrip) {
  auto pk = target_model_pack("smq1Q_XYI");
  auto d = make_gst_design(pk, 2);
  auto truth = depolarize(pk.target, 0.02, 0.0);
  auto ds = simulate_dataset(truth, d.all_circuits(), 500, 3);
  auto res = run_long_sequence_gst(d, ds, pk.target, {"TP", "Target"});
  std::random_device rd;
  fs::path dir = fs::temp_directory_path() / ("qcvv_results_" + std::to_string(rd()));
  save_results(res, dir.string());
  auto back = load_results(dir.string());
  fs::remove_all(dir);
  EXPECT_EQ(back.dataset, res.dataset);
  EXPECT_EQ(back.max_lengths, res.max_lengths);
  EXPECT_EQ(back.circuit_lists, res.circuit_lists);
  EXPECT_EQ(model_to_string(back.target), model_to_string(res.target));
  ASSERT_EQ(back.estimates.size(), 2u);
  for (const auto &[name, est] : res.estimates) {
    const auto &b = back.estimates.at(name);
    ASSERT_EQ(b.models.size(), est.models.size());
    for (const auto &[k, m] : est.models) EXPECT_EQ(model_to_string(b.models.at(k)), model_to_string(m));
    ASSERT_EQ(b.fits.size(), est.fits.size());
    for (std::size_t i = 0; i < est.fits.size(); ++i) {
      EXPECT_EQ(b.fits[i].nsigma, est.fits[i].nsigma);
      EXPECT_EQ(b.fits[i].two_delta_logl, est.fits[i].two_delta_logl);
      EXPECT_EQ(b.fits[i].n_circuits, est.fits[i].n_circuits);
    }
  }
}

TEST(Results, TableRoundTrip) {
  Table t{{"a", "b"}, {{"1", "x"}, {"2.5", "y"}}};
  std::ostringstream out;
  write_table(t, out);
  std::istringstream in(out.str());
  auto back = read_table(in);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.number(1, "a"), 2.5);
  EXPECT_THROW(back.column("c"), std::exception);
}
