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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcvv/clifford.hpp"
#include "qcvv/dataset.hpp"
#include "qcvv/design.hpp"
#include "qcvv/model.hpp"

namespace qcvv {

struct RbSample {
  int depth = 0;
  int sample = 0;
  std::vector<std::size_t> cliffords;  // depth+1 random elements, then the inverse
  Circuit circuit;
  std::string target;  // ideal outcome bitstring
};

struct RbDesign {
  ProcessorSpec spec;
  std::vector<int> depths;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<RbSample> samples;
};

RbDesign make_clifford_rb_design(const ProcessorSpec &spec, const std::vector<int> &depths, int k,
                                 std::uint64_t seed);

// Unique circuits; a circuit drawn several times carries uses=<depth>:<count>,...
ExperimentDesign to_experiment_design(const RbDesign &d);

// Processor description stored in an rb design's attributes.
ProcessorSpec rb_spec_from_experiment(const ExperimentDesign &d);

// Shots per design circuit scaled by its multiplicity.
std::vector<long> design_shots(const ExperimentDesign &d, long shots_per_sample);

// Noise-free model of the processor's native gates.
GateSetModel rb_target_model(const ProcessorSpec &spec);

DataSet simulate_design(const GateSetModel &m, const ExperimentDesign &d, long shots_per_sample,
                        std::uint64_t seed);

double rb_error_rate(double p, int n_qubits);

struct DecayFit {
  double A = 0.0, B = 0.0, p = 1.0;
  double rss = 0.0;
  double p_stderr = 0.0;
};

// Bounded least squares of y ~ A + B p^m with A in [0,1], B in [-1,1], p in [0,1].
DecayFit fit_decay(const std::vector<double> &m, const std::vector<double> &y);

struct RbResults {
  int n_qubits = 1;
  std::vector<int> depths;
  std::vector<double> mean_success;
  std::vector<double> std_success;
  std::vector<int> samples;
  DecayFit fit;
  double r = 0.0;
  bool fit_ok = false;
  std::string message;
};

RbResults fit_rb_decay(const DataSet &ds, const ExperimentDesign &design);

struct VolumetricGrid {
  std::vector<int> widths;
  std::vector<int> depths;
  std::vector<std::vector<std::optional<double>>> cells;  // [width][depth]
  std::vector<std::optional<int>> frontier;               // largest passing depth per width
  double threshold = 2.0 / 3.0;
};

VolumetricGrid collate_volumetric(const std::map<std::pair<int, int>, double> &results,
                                  double threshold = 2.0 / 3.0);

}  // namespace qcvv
