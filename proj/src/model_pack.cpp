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

#include "qcvv/model_pack.hpp"

namespace qcvv {

namespace {

// Single-qubit word such as "GxGy" or "Gi" over line `q`, with Gi an empty
// layer. Names map x -> Gxpi2, y -> Gypi2, z -> Gzpi2.
std::vector<Layer> word(const std::string &w, const LineLabel &q) {
  std::vector<Layer> out;
  for (std::size_t i = 0; i + 1 < w.size(); i += 2) {
    char g = w[i + 1];
    if (g == 'i') {
      out.push_back(Layer{});
      continue;
    }
    std::string name = g == 'x' ? "Gxpi2" : g == 'y' ? "Gypi2" : "Gzpi2";
    out.push_back(Layer{{GateLabel{name, {q}}}});
  }
  return out;
}

Circuit circuit_1q(const std::string &w) { return Circuit(word(w, "0"), {"0"}); }

std::vector<Circuit> circuits_1q(const std::vector<std::string> &words) {
  std::vector<Circuit> out;
  for (const auto &w : words) out.push_back(circuit_1q(w));
  return out;
}

GateSetModel one_qubit_target(const std::vector<std::string> &gates, bool idle) {
  GateSetModel m({"0"});
  if (idle) m.set_op(GateSetModel::idle_label(), make_full_tp(Matrix::Identity(4, 4)));
  for (const auto &g : gates) m.set_op(GateLabel{g, {"0"}}, make_full_tp(standard_ptm(g)));
  return m;
}

const std::vector<std::string> kFid1Q = {"", "Gx", "Gy", "GxGx", "GxGxGx", "GyGyGy"};

ModelPack smq1q_xyi() {
  ModelPack p;
  p.name = "smq1Q_XYI";
  p.target = one_qubit_target({"Gxpi2", "Gypi2"}, true);
  p.prep_fiducials = circuits_1q(kFid1Q);
  p.meas_fiducials = circuits_1q(kFid1Q);
  p.germs = circuits_1q({"Gi", "Gx", "Gy", "GxGy", "GxGyGi", "GxGiGy", "GxGiGi", "GyGiGi",
                         "GxGxGiGy", "GxGyGyGi", "GxGxGyGxGyGy"});
  return p;
}

ModelPack smq1q_xyzi() {
  ModelPack p;
  p.name = "smq1Q_XYZI";
  p.target = one_qubit_target({"Gxpi2", "Gypi2", "Gzpi2"}, true);
  p.prep_fiducials = circuits_1q(kFid1Q);
  p.meas_fiducials = circuits_1q(kFid1Q);
  p.germs = circuits_1q({"Gi", "Gx", "Gy", "Gz", "GxGy", "GxGz", "GxGyGi", "GxGiGy", "GxGiGi",
                         "GyGiGi", "GxGxGiGy", "GxGyGyGi", "GxGxGyGxGyGy", "GxGyGz"});
  return p;
}

// Gxpi2 is the gate under test; Gypi2 and Gzpi2 are frame rotations used to
// prepare the +y state for the sine family.
ModelPack smq1q_xpi2_rpe() {
  ModelPack p;
  p.name = "smq1Q_Xpi2_rpe";
  p.target = one_qubit_target({"Gxpi2", "Gypi2", "Gzpi2"}, false);
  p.prep_fiducials = circuits_1q({"", "GyGz"});
  p.meas_fiducials = circuits_1q({""});
  p.germs = circuits_1q({"Gx"});
  return p;
}

ModelPack smq2q_xyicnot() {
  ModelPack p;
  p.name = "smq2Q_XYICNOT";
  std::vector<LineLabel> lines{"0", "1"};
  GateSetModel m(lines);
  m.set_op(GateSetModel::idle_label(), make_full_tp(Matrix::Identity(16, 16)));
  for (const auto &q : lines)
    for (std::string g : {"Gxpi2", "Gypi2"}) {
      std::vector<int> pos{q == "0" ? 0 : 1};
      m.set_op(GateLabel{g, {q}}, make_full_tp(embed_ptm(standard_ptm(g), pos, 2)));
    }
  m.set_op(GateLabel{"Gcnot", {"0", "1"}}, make_full_tp(standard_ptm("Gcnot")));
  p.target = m;

  auto pair = [&](const std::vector<std::string> &a) {
    std::vector<Circuit> out;
    for (const auto &w0 : a)
      for (const auto &w1 : a) {
        auto l0 = word(w0, "0"), l1 = word(w1, "1");
        l0.insert(l0.end(), l1.begin(), l1.end());
        out.emplace_back(std::move(l0), lines);
      }
    return out;
  };
  p.prep_fiducials = pair({"", "Gx", "Gy", "GxGx"});
  p.meas_fiducials = pair({"", "Gx", "Gy"});

  auto g2 = [&](std::vector<Layer> layers) { return Circuit(std::move(layers), lines); };
  Layer cnot{{GateLabel{"Gcnot", {"0", "1"}}}};
  auto x = [](const LineLabel &q) { return Layer{{GateLabel{"Gxpi2", {q}}}}; };
  auto y = [](const LineLabel &q) { return Layer{{GateLabel{"Gypi2", {q}}}}; };
  p.germs = {g2({Layer{}}),         g2({x("0")}),          g2({y("0")}),
             g2({x("1")}),          g2({y("1")}),          g2({cnot}),
             g2({x("0"), y("0")}),  g2({x("1"), y("1")}),  g2({x("0"), x("1")}),
             g2({x("0"), cnot}),    g2({y("1"), cnot}),    g2({x("0"), y("1"), cnot}),
             g2({y("0"), x("1"), cnot, Layer{}})};
  return p;
}

}  // namespace

std::vector<std::string> model_pack_names() {
  return {"smq1Q_XYI", "smq1Q_XYZI", "smq1Q_Xpi2_rpe", "smq2Q_XYICNOT"};
}

ModelPack target_model_pack(const std::string &name) {
  if (name == "smq1Q_XYI") return smq1q_xyi();
  if (name == "smq1Q_XYZI") return smq1q_xyzi();
  if (name == "smq1Q_Xpi2_rpe") return smq1q_xpi2_rpe();
  if (name == "smq2Q_XYICNOT") return smq2q_xyicnot();
  throw ModelError("unknown model pack '" + name + "'");
}

}  // namespace qcvv
