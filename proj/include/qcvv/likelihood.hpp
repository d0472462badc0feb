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
#include <vector>

#include "qcvv/dataset.hpp"
#include "qcvv/model.hpp"

namespace qcvv {

/// Probability floor used inside likelihood code only.
inline constexpr double kProbClip = 1e-6;

/// Counts of `circuits` rearranged into the model's outcome order.
struct CountTable {
  std::vector<Circuit> circuits;
  Matrix counts;  // circuits x outcomes
  Vector totals;
};

CountTable make_count_table(const DataSet &ds, const std::vector<Circuit> &circuits,
                            const std::vector<std::string> &outcomes);

/// f log(f/x) + x - f without cancellation near f = x (x when f = 0).
double kl_term(double f, double x);

/// sum N log max(p, clip)
double logl(const Matrix &p, const CountTable &t);
/// sum N log f with 0 log 0 = 0
double logl_max(const CountTable &t);
/// sum N (p - f)^2 / (q (1 - q)), q = p clipped to [clip, 1 - clip]
double chi2(const Matrix &p, const CountTable &t);

/// Signed residuals whose squares sum to 2 * (logl_max - logl) for p above
/// the clip; below it each term continues as a convex quadratic.
void logl_residuals(const Matrix &p, const CountTable &t, Vector &r, Vector &dr_dp);
void chi2_residuals(const Matrix &p, const CountTable &t, Vector &r, Vector &dr_dp);

double logl(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits);
double two_delta_logl(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits);
double chi2(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits);

/// rank([dE/dparams | dE/dgauge]) - rank(dE/dgauge) over the flattened model
/// elements, with TP gauge generators and tolerance 1e-7 * sigma_max.
Index nongauge_params(const GateSetModel &m);

struct WilksStats {
  double two_delta_logl = 0.0;
  double k = 0.0;
  double nsigma = 0.0;
  Index n_nongauge = 0;
  double chi2 = 0.0;
};

/// Nsigma = (2 dlogL - k) / sqrt(2k), k = sum_s (K_s - 1) - nongauge params,
/// where K_s counts only outcomes with model probability above kProbClip.
/// Throws ModelError when k <= 0.
WilksStats wilks_stats(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits,
                       std::optional<Index> n_nongauge = std::nullopt);
double two_delta_logl_nsigma(const GateSetModel &m, const DataSet &ds,
                             const std::vector<Circuit> &circuits);
/// Whole dataset.
double two_delta_logl_nsigma(const GateSetModel &m, const DataSet &ds);

/// Per-circuit 2 dlogL contributions.
Vector per_circuit_two_delta_logl(const Matrix &p, const CountTable &t);

}  // namespace qcvv
