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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcvv/gst.hpp"
#include "qcvv/rb.hpp"
#include "qcvv/rpe.hpp"
#include "qcvv/stability.hpp"

namespace qcvv {

struct ReportSpec {
  std::string title = "qcvv report";
  bool model_matrices = true;
  std::size_t worst_circuits = 10;
};

struct ReportInputs {
  std::optional<ModelEstimateResults> gst;
  std::optional<RbResults> rb;
  std::optional<RpeResults> rpe;
  std::optional<StabilityReport> drift;
  std::optional<ComparisonReport> comparison;
};

enum class CellClass { kGray, kRed };

struct BoxCell {
  Circuit circuit;
  double two_delta_logl = 0.0;
  int dof = 1;
  double threshold = 0.0;  // 95th percentile of chi-square(dof)
  CellClass cls = CellClass::kGray;
};

struct BoxGrid {
  Circuit germ;
  int max_length = 0;
  int power = 0;
  std::vector<std::vector<BoxCell>> cells;  // [meas fiducial][prep fiducial]
};

std::vector<BoxGrid> make_box_grids(const GstDesign &design, const GateSetModel &model,
                                    const DataSet &ds);

// Model shown for an estimate: "stdgaugeopt" when present, else "final".
const GateSetModel &summary_model(const Estimate &e);

struct GateSummary {
  std::string gate;
  double infidelity = 0.0;
  double trace_distance = 0.0;
};
std::vector<GateSummary> gate_summary(const GateSetModel &m, const GateSetModel &target);

std::string render_report(const ReportInputs &in, const ReportSpec &spec);
void write_report(const ReportInputs &in, const ReportSpec &spec, const std::string &path);

}  // namespace qcvv
