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

#include "qcvv/optimize.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qcvv {

LMResult levenberg_marquardt(const ResidualFn &residual, const JacobianFn &jacobian, Vector x0,
                             const LMOptions &opts) {
  LMResult res;
  res.x = std::move(x0);
  Vector r = residual(res.x);
  res.cost = 0.5 * r.squaredNorm();
  res.history.push_back(res.cost);
  double lambda = opts.lambda0;
  double nu = 2.0;
  Matrix J = jacobian(res.x);
  Index n = res.x.size();
  if (n == 0) {
    res.converged = true;
    res.message = "no parameters";
    return res;
  }
  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it + 1;
    Vector g = J.transpose() * r;
    res.grad_norm = g.cwiseAbs().maxCoeff();
    if (res.grad_norm <= opts.gtol) {
      res.converged = true;
      res.message = "gradient tolerance reached";
      return res;
    }
    Matrix H = J.transpose() * J;
    // Uniform damping. Per-parameter (Marquardt) scaling leaves parameters
    // whose Jacobian column is nearly zero undamped, and a Cholesky-factored
    // channel near a rank-deficient Choi matrix has many of those.
    double scale = std::max(H.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      Matrix A = H;
      A.diagonal().array() += lambda * scale;
      Eigen::LDLT<Matrix> ldlt(A);
      Vector step = ldlt.solve(-g);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        lambda *= nu;
        nu *= 2;
        continue;
      }
      if (step.norm() <= opts.xtol * (res.x.norm() + opts.xtol)) {
        res.converged = true;
        res.message = "step tolerance reached";
        return res;
      }
      Vector x_new = res.x + step;
      Vector r_new;
      double cost_new = std::numeric_limits<double>::infinity();
      try {
        r_new = residual(x_new);
        if (r_new.allFinite()) cost_new = 0.5 * r_new.squaredNorm();
      } catch (const std::exception &) {
      }
      double predicted = -(step.dot(g) + 0.5 * step.dot(H * step));
      if (cost_new < res.cost) {
        double rho = predicted > 0 ? (res.cost - cost_new) / predicted : 1.0;
        double rel = (res.cost - cost_new) / std::max(res.cost, 1e-300);
        res.x = std::move(x_new);
        r = std::move(r_new);
        res.cost = cost_new;
        res.history.push_back(cost_new);
        lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;
        accepted = true;
        if (rel <= opts.ftol) {
          res.converged = true;
          res.message = "relative cost tolerance reached";
          return res;
        }
        std::size_t h = res.history.size();
        if (opts.stall_window > 0 && h > std::size_t(opts.stall_window)) {
          double before = res.history[h - 1 - std::size_t(opts.stall_window)];
          if (before - res.cost <= opts.stall_rtol * std::max(res.cost, 1e-300)) {
            res.converged = true;
            res.message = "stalled: cost change below tolerance over " +
                          std::to_string(opts.stall_window) + " steps";
            return res;
          }
        }
      } else {
        lambda *= nu;
        nu *= 2;
      }
    }
    if (!accepted) {
      res.converged = true;
      res.message = "no further decrease possible";
      return res;
    }
    J = jacobian(res.x);
  }
  res.message = "maximum iterations reached";
  return res;
}

Index numerical_rank(const Matrix &m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

}  // namespace qcvv
