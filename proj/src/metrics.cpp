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

#include "qcvv/metrics.hpp"

#include <stdexcept>

namespace qcvv {

namespace {

void check_dims(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("superoperator dimension mismatch");
}

}  // namespace

double entanglement_infidelity(const Matrix &g, const Matrix &ideal) {
  check_dims(g, ideal);
  double d2 = double(g.rows());
  return 1.0 - (ideal.transpose() * g).trace() / d2;
}

double jamiolkowski_trace_distance(const Matrix &a, const Matrix &b) {
  check_dims(a, b);
  CMatrix diff = ptm_to_choi(a) - ptm_to_choi(b);
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  double d = std::sqrt(double(a.rows()));
  return 0.5 * es.eigenvalues().cwiseAbs().sum() / d;
}

double frobenius_distance(const Matrix &a, const Matrix &b) {
  check_dims(a, b);
  return (a - b).norm();
}

}  // namespace qcvv
