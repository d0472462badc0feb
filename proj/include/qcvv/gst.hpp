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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcvv/dataset.hpp"
#include "qcvv/design.hpp"
#include "qcvv/gauge.hpp"
#include "qcvv/likelihood.hpp"
#include "qcvv/model.hpp"
#include "qcvv/model_pack.hpp"
#include "qcvv/optimize.hpp"

namespace qcvv {

class FiducialError : public ModelError {
 public:
  using ModelError::ModelError;
};

// One germ-power block: circuits[i][j] = prep_fid[j] + germ^power + meas_fid[i].
// Kept un-deduplicated so a report can lay it out as a grid.
struct GermBlock {
  Circuit germ;
  int max_length = 0;
  int power = 0;
  std::vector<std::vector<Circuit>> circuits;
};

struct GstDesign {
  std::string pack;
  std::vector<LineLabel> lines;
  std::vector<Circuit> prep_fiducials;
  std::vector<Circuit> meas_fiducials;
  std::vector<Circuit> germs;
  std::vector<GateLabel> gates;  // gates probed by the LGST subset
  std::vector<int> max_lengths;
  std::vector<Circuit> lgst_circuits;
  std::vector<std::vector<Circuit>> circuit_lists;  // nested, one per max length
  std::vector<GermBlock> blocks;

  const std::vector<Circuit> &all_circuits() const { return circuit_lists.back(); }
};

Circuit gate_circuit(const GateLabel &g, const std::vector<LineLabel> &lines);

GstDesign make_gst_design(const ModelPack &pack, int max_max_length);
GstDesign make_gst_design(const GateSetModel &target, const std::vector<Circuit> &prep_fiducials,
                          const std::vector<Circuit> &meas_fiducials,
                          const std::vector<Circuit> &germs, int max_max_length,
                          const std::string &pack_name = "custom");

ExperimentDesign to_experiment_design(const GstDesign &d);
GstDesign gst_design_from_experiment(const ExperimentDesign &e);

struct CompletenessReport {
  Index prep_rank = 0;
  Index meas_rank = 0;
  Index required = 0;
  Vector prep_singular_values;
  Vector meas_singular_values;
  double prep_min_sv() const { return prep_singular_values[prep_singular_values.size() - 1]; }
  double meas_min_sv() const { return meas_singular_values[meas_singular_values.size() - 1]; }
};

// Throws FiducialError naming the deficient side.
CompletenessReport check_informational_completeness(const GateSetModel &m,
                                                    const std::vector<Circuit> &prep_fiducials,
                                                    const std::vector<Circuit> &meas_fiducials);

Matrix circuit_ptm(const GateSetModel &m, const Circuit &c);

// Counts n = round(p * 2^50): frequencies reproduce probabilities to ~1e-15.
inline constexpr long kExactShots = 1L << 50;
DataSet exact_dataset(const GateSetModel &m, const std::vector<Circuit> &circuits);

GateSetModel run_lgst(const GstDesign &design, const DataSet &ds, const GateSetModel &target);

struct FitRecord {
  int max_length = 0;
  std::size_t n_circuits = 0;
  double two_delta_logl = 0.0;
  double k = 0.0;
  double nsigma = 0.0;
  double chi2 = 0.0;
  Index n_nongauge = 0;
  int iterations = 0;
  bool converged = true;
  std::string message;
  std::vector<double> objective_history;  // 2*cost of the logL stage per accepted step
};

struct Estimate {
  std::string name;
  std::map<std::string, GateSetModel> models;  // "target", "seed", "final", "stdgaugeopt"
  std::vector<GateSetModel> per_length;
  std::vector<FitRecord> fits;
};

struct ModelEstimateResults {
  ExperimentDesign design;
  std::vector<int> max_lengths;
  std::vector<std::vector<Circuit>> circuit_lists;
  DataSet dataset;
  GateSetModel target;
  std::map<std::string, Estimate> estimates;
};

struct GstOptions {
  bool gauge_opt = true;
  GaugeOptWeights weights;
  int max_iter = 100;
  double cptp_seed_depolarization = 1e-3;
};

// Estimator names: "TP", "CPTP", "Target"; any other name fits `initial`
// with its own parameterization, starting from `initial` itself.
ModelEstimateResults run_long_sequence_gst(const GstDesign &design, const DataSet &ds,
                                           const GateSetModel &initial,
                                           const std::vector<std::string> &estimators,
                                           const GstOptions &opts = {});

ModelEstimateResults run_model_test(const GateSetModel &model, const GstDesign &design,
                                    const DataSet &ds, const std::string &name = "ModelTest");

struct FitOutcome {
  GateSetModel model;
  LMResult lm;
};

// chi2 stage followed by a logL stage on `circuits`.
FitOutcome fit_model(const GateSetModel &start, const DataSet &ds,
                     const std::vector<Circuit> &circuits, int max_iter = 100);

std::vector<std::string> parse_estimator_list(const std::string &s);

}  // namespace qcvv
