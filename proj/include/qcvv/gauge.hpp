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

#include <vector>

#include "qcvv/model.hpp"

namespace qcvv {

struct GaugeOptWeights {
  double gates = 1.0;
  double spam = 0.1;
};

struct GaugeOptResult {
  GateSetModel model;
  Matrix S;
  double objective = 0.0;
  std::vector<double> history;  // objective per accepted iteration
  int iterations = 0;
  /// Fraction of the optimal step kept to stay inside the CPTP set (1 for
  /// unconstrained parameterizations).
  double step_fraction = 1.0;
};

/// sum_g w_g |S^-1 G S - T_g|_F^2 + w_spam (|S^-1 rho - rho_T|^2 + sum_e |S^T E - E_T|^2)
double gauge_objective(const GateSetModel &m, const GateSetModel &target, const Matrix &S,
                       const GaugeOptWeights &w = {});

/// Minimizes gauge_objective over TP gauge matrices S = I + X (first row of
/// X zero) starting from the identity. Throws GaugeError when an element
/// cannot be transformed or S becomes singular after a jittered restart.
GaugeOptResult gauge_optimize_full(const GateSetModel &m, const GateSetModel &target,
                                   const GaugeOptWeights &w = {});
GateSetModel gauge_optimize(const GateSetModel &m, const GateSetModel &target,
                            const GaugeOptWeights &w = {});

}  // namespace qcvv
