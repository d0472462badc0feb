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
#include <utility>
#include <vector>

#include "qcvv/basis.hpp"
#include "qcvv/circuit.hpp"

namespace qcvv {

struct ProcessorSpec {
  int n_qubits = 1;
  std::vector<std::string> gates;              // native gate names
  std::vector<std::pair<int, int>> pairs;      // allowed two-qubit (control, target) pairs
  std::vector<LineLabel> lines() const;
};

ProcessorSpec default_processor_spec(int n_qubits);

// Clifford group (modulo phase) enumerated by breadth-first search over the
// native layers, so every element carries a shortest native word.
class CliffordGroup {
 public:
  explicit CliffordGroup(const ProcessorSpec &spec);

  std::size_t size() const { return ptms_.size(); }
  int num_qubits() const { return n_; }
  const Matrix &ptm(std::size_t i) const { return ptms_[i]; }
  const std::vector<Layer> &word(std::size_t i) const { return words_[i]; }
  std::size_t index_of(const Matrix &ptm) const;
  // Element equal to applying a then b.
  std::size_t compose(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t i) const;
  double mean_word_length() const;

 private:
  int n_;
  std::vector<Matrix> ptms_;
  std::vector<std::vector<Layer>> words_;
  std::vector<std::pair<std::string, std::size_t>> index_;  // sorted key -> element
  static std::string key(const Matrix &ptm);
};

std::size_t clifford_group_order(int n_qubits);

// Native-gate PTM on the full register for one layer.
Matrix native_layer_ptm(const Layer &layer, int n_qubits);

}  // namespace qcvv
