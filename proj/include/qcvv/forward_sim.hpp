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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcvv/model.hpp"

namespace qcvv {

class DataSet;

using OutcomeDistribution = std::map<std::string, double>;

/// p(o) = E_o^T * L_T ... L_1 * rho, propagating the state layer by layer.
OutcomeDistribution probs(const GateSetModel &m, const Circuit &c);
/// Same, in the model's outcome order.
Vector probs_vector(const GateSetModel &m, const Circuit &c);

/// Shared-subcircuit structure over a circuit list.
///
/// Two views are kept. The prefix view is a trie of layer prefixes; each
/// node is one layer applied to its parent's state, so evaluating it repeats
/// exactly the arithmetic of probs(). The product view decomposes every
/// circuit as A + u^k + B around its longest periodic run, builds u^k by
/// repeated squaring, and memoizes every node by its layer sequence.
class EvalTree {
 public:
  struct PrefixNode {
    int parent;  // -1: prep
    int layer;   // index into layers()
  };
  /// Leaf when left < 0 (the matrix of `layer`); otherwise right * left, i.e.
  /// `left` happens first.
  struct ProductNode {
    int left = -1;
    int right = -1;
    int layer = -1;
    std::size_t length = 0;  // layers covered
  };

  EvalTree() = default;
  explicit EvalTree(const std::vector<Circuit> &circuits);

  const std::vector<Circuit> &circuits() const { return circuits_; }
  const std::vector<Layer> &layers() const { return layers_; }
  const std::vector<PrefixNode> &prefix_nodes() const { return prefix_; }
  const std::vector<ProductNode> &product_nodes() const { return product_; }
  /// -1 for a circuit with no layers.
  int prefix_node_of(std::size_t circuit) const { return circuit_prefix_[circuit]; }
  int product_node_of(std::size_t circuit) const { return circuit_product_[circuit]; }
  /// Layer-id sequence of a circuit.
  const std::vector<int> &layer_ids(std::size_t circuit) const { return circuit_layers_[circuit]; }

  std::size_t num_product_nodes() const { return product_.size(); }
  std::size_t total_layers() const;

  /// Expands a product node back into layer ids (for checking).
  std::vector<int> expand(int product_node) const;

 private:
  int product_for(const std::vector<int> &seq);
  int power_node(const std::vector<int> &unit, std::size_t k);
  int combine(int first, int second);

  std::vector<Circuit> circuits_;
  std::vector<Layer> layers_;
  std::vector<std::vector<int>> circuit_layers_;
  std::vector<PrefixNode> prefix_;
  std::vector<int> circuit_prefix_;
  std::vector<ProductNode> product_;
  std::vector<int> circuit_product_;
  std::map<std::vector<int>, int> product_memo_;
};

EvalTree build_eval_tree(const std::vector<Circuit> &circuits);

enum class EvalStrategy { kAuto, kPrefix, kProduct };

/// circuits x outcomes, columns in the model's outcome order. The prefix
/// strategy is bit-identical to probs(); the product strategy agrees to
/// rounding. kAuto picks whichever needs fewer flops.
Matrix bulk_probs(const GateSetModel &m, const EvalTree &tree,
                  EvalStrategy strategy = EvalStrategy::kAuto);

/// Row (circuit * n_outcomes + outcome), one column per model parameter.
Matrix bulk_dprobs(const GateSetModel &m, const EvalTree &tree);

/// Straightforward per-circuit product of dense layer matrices; reference
/// implementation used for timing comparisons.
Matrix naive_bulk_probs(const GateSetModel &m, const std::vector<Circuit> &circuits);

/// Multinomial counts with a seeded generator; N = 0 gives all-zero rows.
DataSet simulate_dataset(const GateSetModel &m, const std::vector<Circuit> &circuits,
                         long shots, std::uint64_t seed);

/// Same draws from an explicit probability table (rows aligned to circuits).
DataSet sample_counts(const std::vector<std::string> &outcomes, const std::vector<Circuit> &circuits,
                      const Matrix &p, long shots, std::uint64_t seed);
DataSet sample_counts(const std::vector<std::string> &outcomes, const std::vector<Circuit> &circuits,
                      const Matrix &p, const std::vector<long> &shots, std::uint64_t seed);

}  // namespace qcvv
