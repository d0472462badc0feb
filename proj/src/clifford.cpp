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

#include "qcvv/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "qcvv/operators.hpp"

namespace qcvv {

std::vector<LineLabel> ProcessorSpec::lines() const {
  std::vector<LineLabel> out;
  for (int q = 0; q < n_qubits; ++q) out.push_back(std::to_string(q));
  return out;
}

ProcessorSpec default_processor_spec(int n_qubits) {
  ProcessorSpec s;
  s.n_qubits = n_qubits;
  s.gates = {"Gxpi2", "Gxmpi2", "Gypi2", "Gympi2"};
  if (n_qubits == 2) {
    s.gates.push_back("Gcnot");
    s.pairs = {{0, 1}};
  }
  return s;
}

std::size_t clifford_group_order(int n_qubits) {
  if (n_qubits == 1) return 24;
  if (n_qubits == 2) return 11520;
  throw ModelError("Clifford RB supports 1 or 2 qubits");
}

Matrix native_layer_ptm(const Layer &layer, int n_qubits) {
  Index D = superop_dim(n_qubits);
  Matrix M = Matrix::Identity(D, D);
  for (const auto &g : layer.labels) {
    if (!is_standard_gate(g.name)) throw ModelError("unknown native gate '" + g.name + "'");
    std::vector<int> pos;
    for (const auto &t : g.targets) pos.push_back(std::stoi(t));
    if (int(pos.size()) != standard_gate_qubits(g.name))
      throw ModelError("gate " + g.str() + " has the wrong number of targets");
    M = embed_ptm(standard_ptm(g.name), pos, n_qubits) * M;
  }
  return M;
}

std::string CliffordGroup::key(const Matrix &ptm) {
  std::string k(std::size_t(ptm.size()), '0');
  for (Index i = 0; i < ptm.size(); ++i) {
    double v = ptm.data()[i];
    if (std::abs(v) < 1e-6)
      k[std::size_t(i)] = '0';
    else if (std::abs(v - 1.0) < 1e-6)
      k[std::size_t(i)] = '+';
    else if (std::abs(v + 1.0) < 1e-6)
      k[std::size_t(i)] = '-';
    else
      throw ModelError("native gate set contains a non-Clifford operation");
  }
  return k;
}

CliffordGroup::CliffordGroup(const ProcessorSpec &spec) : n_(spec.n_qubits) {
  std::size_t order = clifford_group_order(n_);
  auto lines = spec.lines();
  std::vector<Layer> gens;
  for (const auto &name : spec.gates) {
    if (!is_standard_gate(name)) throw ModelError("unknown native gate '" + name + "'");
    int k = standard_gate_qubits(name);
    if (k == 1) {
      for (const auto &q : lines) gens.push_back(Layer{{GateLabel{name, {q}}}});
    } else if (k == 2 && n_ == 2) {
      for (auto [a, b] : spec.pairs) {
        if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b)
          throw ModelError("invalid qubit pair for " + name);
        gens.push_back(Layer{{GateLabel{name, {lines[std::size_t(a)], lines[std::size_t(b)]}}}});
      }
    }
  }
  std::vector<Matrix> gen_ptms;
  for (const auto &g : gens) gen_ptms.push_back(native_layer_ptm(g, n_));

  Index D = superop_dim(n_);
  std::unordered_map<std::string, std::size_t> seen;
  ptms_.push_back(Matrix::Identity(D, D));
  words_.push_back({});
  seen.emplace(key(ptms_[0]), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Matrix next = gen_ptms[g] * ptms_[cur];
      auto [it, fresh] = seen.emplace(key(next), ptms_.size());
      if (!fresh) continue;
      ptms_.push_back(next);
      auto w = words_[cur];
      w.push_back(gens[g]);
      words_.push_back(std::move(w));
      queue.push_back(ptms_.size() - 1);
      if (ptms_.size() > order) throw ModelError("native gates generate more than the Clifford group");
    }
  }
  if (ptms_.size() != order)
    throw ModelError("native gates generate " + std::to_string(ptms_.size()) + " of the " +
                     std::to_string(order) + " Clifford elements; cannot compile RB circuits");
  for (const auto &[k, v] : seen) index_.emplace_back(k, v);
  std::sort(index_.begin(), index_.end());
}

std::size_t CliffordGroup::index_of(const Matrix &ptm) const {
  auto k = key(ptm);
  auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(k, std::size_t(0)));
  if (it == index_.end() || it->first != k) throw ModelError("matrix is not a Clifford element");
  return it->second;
}

std::size_t CliffordGroup::compose(std::size_t a, std::size_t b) const {
  return index_of(ptms_[b] * ptms_[a]);
}

std::size_t CliffordGroup::inverse(std::size_t i) const {
  return index_of(ptms_[i].transpose());
}

double CliffordGroup::mean_word_length() const {
  double s = 0.0;
  for (const auto &w : words_) s += double(w.size());
  return s / double(words_.size());
}

}  // namespace qcvv
