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

// Seeded random generators for property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "qcvv/circuit.hpp"
#include "qcvv/dataset.hpp"
#include "qcvv/model.hpp"

namespace qcvv::testgen {

using Rng = std::mt19937_64;

inline int uniform(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::string gate_name(Rng &rng) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  static const std::vector<std::string> common = {"Gxpi2", "Gypi2", "Gzpi2", "Gcnot", "Gi", "Gxmpi2"};
  if (uniform(rng, 0, 2) > 0) return common[std::size_t(uniform(rng, 0, int(common.size()) - 1))];
  std::string s = "G";
  int n = uniform(rng, 1, 6);
  for (int i = 0; i < n; ++i) s += alphabet[std::size_t(uniform(rng, 0, int(alphabet.size()) - 1))];
  return s;
}

inline std::vector<LineLabel> line_set(Rng &rng) {
  static const std::vector<LineLabel> pool = {"0", "1", "2", "3", "10", "Q1", "Q2", "a_b"};
  std::vector<LineLabel> lines = pool;
  std::shuffle(lines.begin(), lines.end(), rng);
  lines.resize(std::size_t(uniform(rng, 1, 4)));
  std::sort(lines.begin(), lines.end(), line_label_less);
  return lines;
}

inline Circuit circuit(Rng &rng, std::vector<LineLabel> lines = {}, int max_depth = 8) {
  if (lines.empty()) lines = line_set(rng);
  int depth = uniform(rng, 0, max_depth);
  std::vector<Layer> layers;
  for (int d = 0; d < depth; ++d) {
    std::vector<LineLabel> free = lines;
    std::shuffle(free.begin(), free.end(), rng);
    Layer layer;
    while (!free.empty() && uniform(rng, 0, 3) > 0) {
      int arity = std::min<int>(int(free.size()), uniform(rng, 1, 2));
      GateLabel g{gate_name(rng), {}};
      for (int k = 0; k < arity; ++k) {
        g.targets.push_back(free.back());
        free.pop_back();
      }
      layer.labels.push_back(std::move(g));
    }
    layers.push_back(std::move(layer));
  }
  return Circuit(std::move(layers), std::move(lines));
}

// Random dataset over a fixed alphabet with distinct circuits.
inline DataSet dataset(Rng &rng, const std::vector<std::string> &outcomes, int n_circuits) {
  DataSet ds(outcomes);
  std::vector<LineLabel> lines = {"0"};
  if (outcomes.front().size() == 2) lines = {"0", "1"};
  int attempts = 0;
  while (int(ds.size()) < n_circuits && attempts++ < 100 * n_circuits) {
    Circuit c = circuit(rng, lines, 6);
    if (ds.contains(c)) continue;
    std::vector<long> counts;
    for (std::size_t o = 0; o < outcomes.size(); ++o) {
      long v = uniform(rng, 0, 4) == 0 ? 0 : long(uniform(rng, 0, 100000));
      if (uniform(rng, 0, 20) == 0) v = (1L << 40) + uniform(rng, 0, 1000);
      counts.push_back(v);
    }
    ds.add(c, std::move(counts));
  }
  return ds;
}

// Random TP gauge matrix: identity plus a small perturbation of rows 1.., well
// conditioned for the sizes used in tests.
inline Matrix tp_gauge(Rng &rng, Index dim, double scale = 0.3) {
  Matrix S = Matrix::Identity(dim, dim);
  for (Index i = 1; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) S(i, j) += uniform_real(rng, -scale, scale);
  return S;
}

}  // namespace qcvv::testgen
