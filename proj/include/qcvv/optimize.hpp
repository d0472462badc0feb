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

#include <functional>
#include <string>
#include <vector>

#include "qcvv/basis.hpp"

namespace qcvv {

struct LMOptions {
  int max_iter = 200;
  double ftol = 1e-12;   // relative decrease of the cost on an accepted step
  double gtol = 1e-10;   // max |J^T r|
  double xtol = 1e-14;   // relative step size
  double lambda0 = 1e-3;
  // Converged when the last `stall_window` accepted steps together lowered
  // the cost by at most stall_rtol * cost; 0 disables.
  int stall_window = 10;
  double stall_rtol = 1e-6;
};

struct LMResult {
  Vector x;
  double cost = 0.0;  // 0.5 * |r|^2
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> history;  // cost after each accepted step, starting at x0
  double grad_norm = 0.0;
};

using ResidualFn = std::function<Vector(const Vector &)>;
using JacobianFn = std::function<Matrix(const Vector &)>;

/// Damped Gauss-Newton on 0.5*|r(x)|^2 with damping lambda * max(diag(J^T J)) * I.
/// A residual function that throws marks the trial point as rejected.
LMResult levenberg_marquardt(const ResidualFn &residual, const JacobianFn &jacobian, Vector x0,
                             const LMOptions &opts = {});

/// Numerical rank with relative tolerance tol * sigma_max.
Index numerical_rank(const Matrix &m, double tol = 1e-7);

}  // namespace qcvv
