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

#include <string>
#include <vector>

#include "qcvv/dataset.hpp"
#include "qcvv/design.hpp"
#include "qcvv/model_pack.hpp"

namespace qcvv {

// Per generation g (L = 2^g): a cosine circuit prep_fid[0] + germ^L and a
// sine circuit prep_fid[1] + germ^L, both measured after meas_fid[0].
struct RpeDesign {
  std::string pack;
  std::vector<long> lengths;
  std::vector<Circuit> cos_circuits;
  std::vector<Circuit> sin_circuits;
};

RpeDesign make_rpe_design(const ModelPack &pack, int max_max_length);
ExperimentDesign to_experiment_design(const RpeDesign &d);
RpeDesign rpe_design_from_experiment(const ExperimentDesign &e);

struct RpeGeneration {
  int generation = 0;
  long length = 1;
  double p_cos = 0.0;
  double p_sin = 0.0;
  double phase = 0.0;  // atan2 of the two quadratures, i.e. L*theta mod 2pi
  double theta = 0.0;  // unwrapped estimate after this generation
  bool consistent = true;
};

struct RpeResults {
  std::vector<RpeGeneration> generations;
  double theta = 0.0;  // in (-pi, pi]
  int last_generation = 0;
  bool truncated = false;
};

RpeResults run_rpe(const RpeDesign &design, const DataSet &ds, const std::string &outcome = "0");

std::string format_rpe_results(const RpeResults &r);

}  // namespace qcvv
