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

#include <map>
#include <string>
#include <vector>

#include "qcvv/circuit.hpp"
#include "qcvv/operators.hpp"

namespace qcvv {

enum class SpamKind { kFullTP, kStatic };

/// Prep vector. Full-TP pins element 0 to 1/sqrt(d); the rest are params.
struct Prep {
  Vector vec;
  SpamKind kind = SpamKind::kFullTP;

  Index num_params() const { return kind == SpamKind::kStatic ? 0 : vec.size() - 1; }
};

/// Effects in outcome order. Full-TP: every effect but the last is free; the
/// last is identity minus the others, so outcome probabilities sum to one.
struct Povm {
  std::vector<std::string> outcomes;
  std::vector<Vector> effects;
  SpamKind kind = SpamKind::kFullTP;

  Index num_params() const;
};

/// Parameterization requested through set_parameterization().
enum class ModelParam { kFullTP, kCPTP, kStatic };
ModelParam parse_model_param(const std::string &name);
std::string model_param_name(ModelParam p);

struct ParamBlock {
  std::string element;  // "rho0", "Mdefault", or a gate label string
  Index offset = 0;
  Index count = 0;
};

/// Gate-set model over an ordered list of lines (at most 3 qubits).
///
/// Operations are keyed by GateLabel. The idle op applied to empty layers is
/// keyed by idle_label() (empty name); without one an empty layer is the
/// identity. A layer with labels is the product of its element ops in label
/// order; ops smaller than the register are tensor-embedded at the lines of
/// their targets, full-register ops are applied as-is.
class GateSetModel {
 public:
  GateSetModel() = default;
  explicit GateSetModel(std::vector<LineLabel> lines);

  static GateLabel idle_label() { return GateLabel{}; }

  int num_qubits() const { return int(lines_.size()); }
  Index dim() const { return superop_dim(num_qubits()); }
  const std::vector<LineLabel> &lines() const { return lines_; }

  Prep &prep() { return prep_; }
  const Prep &prep() const { return prep_; }
  Povm &povm() { return povm_; }
  const Povm &povm() const { return povm_; }

  const std::map<GateLabel, ParameterizedOp> &ops() const { return ops_; }
  bool has_op(const GateLabel &l) const { return ops_.count(l) > 0; }
  const ParameterizedOp &op(const GateLabel &l) const;
  /// Inserts or replaces; the op must be 1- or 2-qubit sized for its targets
  /// or span the whole register.
  void set_op(const GateLabel &l, ParameterizedOp op);

  Index num_params() const;
  Vector to_vector() const;
  void from_vector(const Vector &v);
  std::vector<ParamBlock> param_blocks() const;

  /// Register positions of `label`'s targets (empty for full-register ops).
  std::vector<int> embed_positions(const GateLabel &label) const;

  /// Dense PTM of one layer on the full register.
  Matrix layer_matrix(const Layer &layer) const;

  /// Throws ModelError when a circuit references lines the model lacks or
  /// gates it does not define.
  void check_circuit(const Circuit &c) const;

  /// Dense snapshot of every gate op on the full register (for metrics).
  Matrix dense_op(const GateLabel &l) const;

  /// True when every element op is full-register (so a d^2 x d^2 gauge
  /// matrix acts on all of them).
  bool is_dense_gateset() const;

 private:
  std::vector<LineLabel> lines_;
  Prep prep_;
  Povm povm_;
  std::map<GateLabel, ParameterizedOp> ops_;
};

/// Label text used for elements: "[]" for idle, "Gxpi2:0" otherwise.
std::string element_name(const GateLabel &l);
GateLabel parse_element_name(const std::string &s);

GateSetModel set_parameterization(const GateSetModel &m, ModelParam kind);
GateSetModel replace_op(const GateSetModel &m, const GateLabel &label, ParameterizedOp op);

/// Left-composes each gate with diag(1, 1-op_noise, ...) and shrinks SPAM
/// vectors toward the maximally mixed state by spam_noise.
GateSetModel depolarize(const GateSetModel &m, double op_noise, double spam_noise);

/// G -> S^-1 G S, rho -> S^-1 rho, E^T -> E^T S. Throws GaugeError when S is
/// singular, not TP, or an element cannot be transformed.
GateSetModel gauge_transform(const GateSetModel &m, const Matrix &S);

/// Builds an n-qubit model (n <= 3) from standard gate names. `availability`
/// maps a gate name to the target tuples where it exists; gates missing from
/// it are available on every qubit (1-qubit gates) or every ordered pair
/// allowed by `geometry` ("line" or "full", 2-qubit gates).
GateSetModel build_localnoise_model(int n_qubits, const std::vector<std::string> &gate_names,
                                    const std::map<std::string, std::vector<std::vector<int>>>
                                        &availability = {},
                                    const std::string &geometry = "line");

}  // namespace qcvv
