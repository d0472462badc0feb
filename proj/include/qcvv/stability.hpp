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

namespace qcvv {

struct CircuitComparison {
  Circuit circuit;
  double g_stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double nsigma = 0.0;  // (G - dof) / sqrt(2 dof), 0 when dof = 0
  bool significant = false;
};

struct ComparisonReport {
  std::vector<CircuitComparison> circuits;  // order of the first dataset
  double alpha = 0.05;
  double total_g = 0.0;
  int total_dof = 0;
  double global_p_value = 1.0;
  std::size_t n_significant = 0;
};

// Log-likelihood-ratio homogeneity test per shared circuit, Benjamini-Hochberg
// at level alpha across circuits.
ComparisonReport compare_datasets(const std::vector<DataSet> &datasets, double alpha = 0.05);

std::vector<CircuitComparison> get_worst_circuits(const ComparisonReport &r, std::size_t n);

std::string format_comparison(const ComparisonReport &r, std::size_t worst);

// Upper tail of the chi-square law with `dof` degrees of freedom.
double chi2_sf(double x, double dof);

struct DriftOutcome {
  int outcome = 0;
  double pooled = 0.0;
  bool skipped = false;  // pooled frequency 0 or 1
  std::vector<double> power;  // DCT power at indices 1..T-1
  std::vector<int> significant;  // DCT indices
  std::vector<double> trajectory;  // p-hat(t), clipped to [0,1]
};

struct CircuitDrift {
  Circuit circuit;
  bool detected = false;
  std::vector<DriftOutcome> outcomes;
  // strongest significant DCT index and its frequency in cycles per record (index/2)
  int dominant_index = 0;
  double dominant_frequency = 0.0;
  double max_power = 0.0;
};

struct StabilityReport {
  std::vector<CircuitDrift> circuits;
  double alpha = 0.05;
  double power_threshold = 0.0;
  std::size_t n_tests = 0;
  std::size_t n_detected = 0;
};

StabilityReport run_stability_analysis(const TimeSeriesDataSet &ts, double alpha = 0.05);

// Orthonormal DCT-II and its inverse.
std::vector<double> dct2(const std::vector<double> &x);
std::vector<double> idct2(const std::vector<double> &c);

std::string format_stability(const StabilityReport &r);

}  // namespace qcvv
