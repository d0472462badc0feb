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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcvv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Superoperators live in the normalized Pauli basis: element k of an n-qubit
// basis is P_{k_0} (x) ... (x) P_{k_{n-1}} / 2^{n/2} with P in (I, X, Y, Z) and
// qubit 0 as the most significant base-4 digit. Every basis element has unit
// Frobenius norm, so <E, rho> inner products are probabilities directly.

/// 4 -> 1, 16 -> 2, 64 -> 3. Throws for anything else.
int qubits_for_superop_dim(Index dim);
inline Index superop_dim(int n_qubits) { return Index(1) << (2 * n_qubits); }

const CMatrix &pauli_basis_element(int n_qubits, Index k);

Vector density_to_vec(const CMatrix &rho);
CMatrix vec_to_density(const Vector &v);

/// R_jk = Tr(B_j U B_k U^dagger).
Matrix unitary_to_ptm(const CMatrix &U);
Matrix kraus_to_ptm(std::span<const CMatrix> kraus);

/// Choi matrix J = sum_ab |a><b| (x) Phi(|a><b|); trace d, TP iff Tr_out J = I.
CMatrix ptm_to_choi(const Matrix &ptm);
Matrix choi_to_ptm(const CMatrix &choi);

/// Ascending Choi eigenvalues.
Vector choi_eigenvalues(const Matrix &ptm);

/// |b><b| for a computational-basis bitstring (qubit 0 first).
Vector computational_effect(const std::string &bits);
/// |0...0><0...0|
Vector zero_state(int n_qubits);
/// Identity covector (sqrt(d), 0, ..., 0).
Vector identity_vec(int n_qubits);
std::vector<std::string> bitstrings(int n_qubits);

/// diag(1, f, f, ...)
Matrix depolarizing_ptm(int n_qubits, double rate);

/// Places a k-qubit superoperator at `positions` (indices into 0..n-1) of an
/// n-qubit register, identity elsewhere.
Matrix embed_ptm(const Matrix &op, std::span<const int> positions, int n_total);

/// Inverse of embed_ptm for gradients: contracts an n-qubit gradient onto the
/// k-qubit operator entries.
Matrix contract_embedded_gradient(const Matrix &grad, std::span<const int> positions,
                                  int n_total);

/// Unitaries of the standard gate names (Gxpi2, Gxmpi2, Gypi2, Gympi2, Gzpi2,
/// Gzmpi2, Gi, Gcnot, Gcphase, Gswap). Throws std::invalid_argument for other
/// names.
CMatrix standard_unitary(const std::string &name);
int standard_gate_qubits(const std::string &name);
bool is_standard_gate(const std::string &name);

/// PTM of a standard gate with entries within 1e-12 of {-1, 0, 1} snapped.
Matrix standard_ptm(const std::string &name);

}  // namespace qcvv
