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

#include "gen.hpp"
#include "qcvv/forward_sim.hpp"
#include "qcvv/metrics.hpp"
#include "qcvv/model.hpp"
#include "qcvv/model_io.hpp"
#include "qcvv/model_pack.hpp"

using namespace qcvv;

namespace {

const GateLabel kGx{"Gxpi2", {"0"}};
const GateLabel kGy{"Gypi2", {"0"}};

Matrix x_ptm() {
  Matrix m(4, 4);
  m << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  return m;
}

GateSetModel jitter(const GateSetModel &m, testgen::Rng &rng, double scale) {
  GateSetModel out = m;
  Vector v = m.to_vector();
  for (Index i = 0; i < v.size(); ++i) v[i] += testgen::uniform_real(rng, -scale, scale);
  out.from_vector(v);
  return out;
}

}  // namespace

TEST(ModelPack, XYIGatesAndSpam) {
  auto pk = target_model_pack("smq1Q_XYI");
  const auto &m = pk.target;
  EXPECT_EQ(m.ops().size(), 3u);
  EXPECT_TRUE(m.has_op(GateSetModel::idle_label()));
  EXPECT_TRUE(m.has_op(kGx));
  EXPECT_TRUE(m.has_op(kGy));
  EXPECT_EQ(m.dense_op(kGx), x_ptm());
  Vector rho(4);
  rho << 1, 0, 0, 1;
  rho /= std::sqrt(2.0);
  EXPECT_LT((m.prep().vec - rho).norm(), 1e-15);
  EXPECT_LT((m.povm().effects[0] - rho).norm(), 1e-15);
  EXPECT_NEAR(probs(m, Circuit::empty({"0"})).at("0"), 1.0, 1e-15);
}

TEST(ModelPack, CnotSquaresToIdentity) {
  auto pk = target_model_pack("smq2Q_XYICNOT");
  GateLabel cnot{"Gcnot", {"0", "1"}};
  ASSERT_TRUE(pk.target.has_op(cnot));
  Matrix c = pk.target.dense_op(cnot);
  ASSERT_EQ(c.rows(), 16);
  EXPECT_EQ(c * c, Matrix::Identity(16, 16));
  // nonzero pattern from the numpy oracle
  EXPECT_EQ(c(2, 14), 1.0);
  EXPECT_EQ(c(7, 10), -1.0);
  EXPECT_EQ(c(10, 7), -1.0);
  EXPECT_EQ(c(6, 11), 1.0);
}

TEST(ModelPack, UnknownName) { EXPECT_THROW(target_model_pack("smq9Q"), ModelError); }

TEST(ModelPack, AllPacksLoad) {
  for (const auto &name : model_pack_names()) {
    auto pk = target_model_pack(name);
    EXPECT_FALSE(pk.prep_fiducials.empty()) << name;
    EXPECT_FALSE(pk.germs.empty()) << name;
  }
}

TEST(Depolarize, DiagonalAction) {
  auto m = target_model_pack("smq1Q_XYI").target;
  auto d = depolarize(m, 0.07, 0.0);
  Matrix expect = Vector((Vector(4) << 1, 0.93, 0.93, 0.93).finished()).asDiagonal();
  EXPECT_LT((d.dense_op(GateSetModel::idle_label()) - expect).norm(), 1e-15);
  EXPECT_LT((d.dense_op(kGx) - expect * x_ptm()).norm(), 1e-15);
  auto same = depolarize(m, 0.0, 0.0);
  EXPECT_EQ(same.to_vector(), m.to_vector());
  EXPECT_THROW(depolarize(m, 1.5, 0.0), ModelError);
  EXPECT_THROW(depolarize(m, 0.0, -0.1), ModelError);
}

TEST(Metrics, DepolarizedIdentity) {
  Matrix g = depolarizing_ptm(1, 0.07);
  Matrix id = Matrix::Identity(4, 4);
  EXPECT_NEAR(entanglement_infidelity(g, id), 0.0525, 1e-15);
  EXPECT_NEAR(jamiolkowski_trace_distance(g, id), 0.0525, 1e-14);  // scipy oracle
  EXPECT_EQ(entanglement_infidelity(id, id), 0.0);
}

TEST(Metrics, InfidelityAffineInRate) {
  Matrix x = x_ptm();
  double a = entanglement_infidelity(depolarizing_ptm(1, 0.0) * x, x);
  double b = entanglement_infidelity(depolarizing_ptm(1, 0.1) * x, x);
  double c = entanglement_infidelity(depolarizing_ptm(1, 0.2) * x, x);
  EXPECT_NEAR(c - b, b - a, 1e-15);
}

TEST(Metrics, InfidelityInvariantUnderOrthogonalConjugation) {
  testgen::Rng rng(11);
  auto m = target_model_pack("smq1Q_XYI").target;
  for (int i = 0; i < 100; ++i) {
    auto noisy = jitter(depolarize(m, 0.05, 0.0), rng, 0.02);
    Matrix g = noisy.dense_op(kGx), ideal = m.dense_op(kGx);
    CMatrix U = standard_unitary(i % 2 ? "Gypi2" : "Gzpi2");
    Matrix Q = unitary_to_ptm(U);
    double before = entanglement_infidelity(g, ideal);
    double after = entanglement_infidelity(Q.transpose() * g * Q, Q.transpose() * ideal * Q);
    ASSERT_NEAR(before, after, 1e-14);
  }
}

TEST(CustomOp, PerfectAtOrigin) {
  auto op = custom_xpi2_op(0.0, 0.0);
  EXPECT_EQ(op->num_params(), 2);
  EXPECT_EQ(op->dense(), x_ptm());
  EXPECT_EQ(op->dense(), standard_ptm("Gxpi2"));
}

TEST(CustomOp, FormulaValues) {
  auto op = custom_xpi2_op(0.1, 0.0);
  EXPECT_NEAR(op->dense()(1, 1), 0.9, 1e-15);
  EXPECT_NEAR(op->dense()(3, 2), 0.9, 1e-15);
  EXPECT_NEAR(op->dense()(2, 2), 0.0, 1e-15);
  auto r = custom_xpi2_op(0.0, 0.02);
  // oracle: b = cos(0.02), c = +sin(0.02) from the literal formula
  EXPECT_NEAR(r->dense()(3, 2), 0.9998000066665778, 1e-15);
  EXPECT_NEAR(r->dense()(2, 2), 0.019998666693333, 1e-15);
  EXPECT_NEAR(r->dense()(2, 3), -0.9998000066665778, 1e-15);
}

TEST(CustomOp, CannotBeGaugeTransformed) {
  auto m = replace_op(target_model_pack("smq1Q_XYI").target, kGx, custom_xpi2_op(0.0, 0.0));
  testgen::Rng rng(3);
  EXPECT_THROW(gauge_transform(m, testgen::tp_gauge(rng, 4, 0.1)), GaugeError);
}

TEST(Parameterization, FullTPCounts) {
  auto m = set_parameterization(target_model_pack("smq1Q_XYI").target, ModelParam::kFullTP);
  for (const auto &[l, op] : m.ops()) EXPECT_EQ(op->num_params(), 12);
  EXPECT_EQ(m.num_params(), 3 * 12 + 3 + 4);
  auto again = set_parameterization(m, ModelParam::kFullTP);
  EXPECT_EQ(again.to_vector(), m.to_vector());
  EXPECT_EQ(model_to_string(again), model_to_string(m));
}

TEST(Parameterization, StaticReplacementDropsParams) {
  auto m = target_model_pack("smq1Q_XYZI").target;
  GateLabel gz{"Gzpi2", {"0"}};
  ASSERT_TRUE(m.has_op(gz));
  auto r = replace_op(m, gz, make_static(m.dense_op(gz)));
  EXPECT_EQ(r.num_params(), m.num_params() - 12);
  EXPECT_EQ(r.dense_op(gz), m.dense_op(gz));
}

TEST(Parameterization, RejectsNonTPAsTP) {
  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 1) = 0.1;
  EXPECT_THROW(make_full_tp(bad), ModelError);
}

TEST(Parameterization, CPTPProjectsNonCPInput) {
  Matrix g = x_ptm();
  g(1, 1) = 1.2;  // not CP
  ASSERT_FALSE(is_cptp(g));
  auto op = make_cptp(g);
  EXPECT_TRUE(is_cptp(op->dense(), 1e-10));
  auto *cp = dynamic_cast<const CPTPOp *>(op.get());
  ASSERT_NE(cp, nullptr);
  EXPECT_GT(cp->projection_distance(), 0.0);
}

TEST(ParameterProperty, VectorRoundTripEveryKind) {
  testgen::Rng rng(5);
  auto base = depolarize(target_model_pack("smq1Q_XYI").target, 0.03, 0.01);
  for (auto kind : {ModelParam::kFullTP, ModelParam::kCPTP, ModelParam::kStatic}) {
    auto m = set_parameterization(base, kind);
    for (int i = 0; i < 20; ++i) {
      Vector v = m.to_vector();
      for (Index k = 0; k < v.size(); ++k) v[k] += testgen::uniform_real(rng, -0.01, 0.01);
      m.from_vector(v);
      ASSERT_EQ(m.to_vector(), v);
      auto copy = m;
      copy.from_vector(m.to_vector());
      for (const auto &[l, op] : m.ops()) ASSERT_EQ(copy.dense_op(l), m.dense_op(l));
    }
  }
  auto custom = replace_op(base, kGx, custom_xpi2_op(0.05, 0.02));
  Vector v = custom.to_vector();
  custom.from_vector(v);
  EXPECT_EQ(custom.to_vector(), v);
}

TEST(ParameterProperty, CPTPChoiStaysPositive) {
  testgen::Rng rng(9);
  auto m = set_parameterization(target_model_pack("smq1Q_XYI").target, ModelParam::kCPTP);
  for (int i = 0; i < 200; ++i) {
    Vector v = m.to_vector();
    for (Index k = 0; k < v.size(); ++k) v[k] = testgen::uniform_real(rng, -1.0, 1.0);
    auto w = m;
    try {
      w.from_vector(v);
    } catch (const ModelError &) {
      continue;  // singular normalization: outside the domain
    }
    for (const auto &[l, op] : w.ops()) {
      ASSERT_GE(choi_eigenvalues(op->dense()).minCoeff(), -1e-10);
      ASSERT_NEAR(op->dense()(0, 0), 1.0, 1e-12);
    }
  }
}

TEST(ParameterProperty, TPProbabilitiesSumToOne) {
  testgen::Rng rng(13);
  auto base = target_model_pack("smq1Q_XYI").target;
  for (int i = 0; i < 50; ++i) {
    auto m = jitter(base, rng, 0.05);
    Circuit c = testgen::circuit(rng, {"0"}, 10);
    Circuit mapped = c;
    std::vector<Layer> layers;
    for (int k = 0; k < int(c.depth()); ++k) {
      int pick = testgen::uniform(rng, 0, 2);
      Layer l;
      if (pick == 1) l.labels.push_back(kGx);
      if (pick == 2) l.labels.push_back(kGy);
      layers.push_back(l);
    }
    auto p = probs_vector(m, Circuit(layers, {"0"}));
    ASSERT_NEAR(p.sum(), 1.0, 1e-12);
  }
}

TEST(Gauge, TransformPreservesProbabilities) {
  testgen::Rng rng(17);
  auto m = depolarize(target_model_pack("smq1Q_XYI").target, 0.02, 0.01);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix S = testgen::tp_gauge(rng, 4, 0.2);
    auto t = gauge_transform(m, S);
    for (int i = 0; i < 50; ++i) {
      std::vector<Layer> layers;
      int depth = testgen::uniform(rng, 0, 12);
      for (int k = 0; k < depth; ++k) {
        int pick = testgen::uniform(rng, 0, 2);
        Layer l;
        if (pick == 1) l.labels.push_back(kGx);
        if (pick == 2) l.labels.push_back(kGy);
        layers.push_back(l);
      }
      Circuit c(layers, {"0"});
      ASSERT_LT((probs_vector(m, c) - probs_vector(t, c)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  auto same = gauge_transform(m, Matrix::Identity(4, 4));
  for (const auto &[l, op] : m.ops()) EXPECT_LT((same.dense_op(l) - m.dense_op(l)).norm(), 1e-15);
}

TEST(Gauge, RejectsBadGaugeMatrices) {
  auto m = target_model_pack("smq1Q_XYI").target;
  Matrix singular = Matrix::Identity(4, 4);
  singular(3, 3) = 0.0;
  EXPECT_THROW(gauge_transform(m, singular), GaugeError);
  Matrix not_tp = Matrix::Identity(4, 4);
  not_tp(0, 1) = 0.5;
  EXPECT_THROW(gauge_transform(m, not_tp), GaugeError);
  auto st = set_parameterization(m, ModelParam::kStatic);
  testgen::Rng rng(1);
  EXPECT_THROW(gauge_transform(st, testgen::tp_gauge(rng, 4, 0.1)), GaugeError);
}

TEST(LocalNoise, TwoQubitPerfectModel) {
  auto m = build_localnoise_model(2, {"Gxpi2", "Gypi2", "Gcnot"});
  EXPECT_NEAR(probs(m, Circuit::empty({"0", "1"})).at("00"), 1.0, 1e-15);
  EXPECT_EQ(m.povm().outcomes, (std::vector<std::string>{"00", "01", "10", "11"}));
}

TEST(LocalNoise, ThreeQubitCnotEmbedding) {
  auto m = build_localnoise_model(3, {"Gcnot"}, {{"Gcnot", {{0, 1}}}});
  GateLabel cnot{"Gcnot", {"0", "1"}};
  Matrix layer = m.layer_matrix(Layer{{cnot}});
  CMatrix c = standard_unitary("Gcnot");
  CMatrix U = CMatrix::Zero(8, 8);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) U.block(2 * i, 2 * j, 2, 2) = c(i, j) * CMatrix::Identity(2, 2);
  EXPECT_LT((layer - unitary_to_ptm(U)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(m.check_circuit(parse_circuit("[Gcnot:1:2]@(0,1,2)")), ModelError);
}

TEST(LocalNoise, FourQubitsOutOfScope) {
  EXPECT_THROW(build_localnoise_model(4, {"Gxpi2"}), ModelError);
  EXPECT_THROW(build_localnoise_model(1, {"Gfoo"}), ModelError);
}

TEST(ModelIO, ByteExactRoundTrip) {
  testgen::Rng rng(23);
  for (const auto &name : model_pack_names()) {
    auto base = target_model_pack(name).target;
    for (auto kind : {ModelParam::kFullTP, ModelParam::kCPTP, ModelParam::kStatic}) {
      auto m = set_parameterization(depolarize(base, 0.013, 0.004), kind);
      if (kind == ModelParam::kFullTP) m = jitter(m, rng, 1e-3);
      std::string text = model_to_string(m);
      auto back = model_from_string(text);
      ASSERT_EQ(model_to_string(back), text) << name;
      ASSERT_EQ(back.to_vector(), m.to_vector()) << name;
    }
  }
  auto custom = replace_op(target_model_pack("smq1Q_XYI").target, kGx, custom_xpi2_op(0.05, 0.02));
  auto back = model_from_string(model_to_string(custom));
  EXPECT_EQ(back.op(kGx)->kind(), OpKind::kDepolOverrotation);
  EXPECT_EQ(back.dense_op(kGx), custom.dense_op(kGx));
}

TEST(ModelIO, RejectsMalformedText) {
  EXPECT_THROW(model_from_string("model lines=0\nbogus\n"), ModelError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  testgen::Rng rng(29);
  for (int i = 0; i < 1000; ++i) {
    double x = std::ldexp(testgen::uniform_real(rng, -1.0, 1.0), testgen::uniform(rng, -60, 60));
    ASSERT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_THROW(parse_double("1.0x"), std::invalid_argument);
}
