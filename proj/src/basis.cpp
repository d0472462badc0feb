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

#include "qcvv/basis.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qcvv {

namespace {

using cd = std::complex<double>;

CMatrix pauli(int k) {
  CMatrix p(2, 2);
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, cd(0, -1), cd(0, 1), 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<CMatrix> build_basis(int n) {
  std::vector<CMatrix> out;
  Index dim = superop_dim(n);
  double norm = std::pow(2.0, -0.5 * n);
  for (Index k = 0; k < dim; ++k) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      int digit = int((k >> (2 * (n - 1 - q))) & 3);
      m = kron(m, pauli(digit));
    }
    out.push_back(m * norm);
  }
  return out;
}

const std::vector<CMatrix> &basis(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<CMatrix>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_basis(n)).first;
  return it->second;
}

double snap(double x) {
  for (double t : {-1.0, 0.0, 1.0})
    if (std::abs(x - t) < 1e-12) return t;
  return x;
}

}  // namespace

int qubits_for_superop_dim(Index dim) {
  switch (dim) {
    case 1: return 0;
    case 4: return 1;
    case 16: return 2;
    case 64: return 3;
    default: throw std::invalid_argument("unsupported superoperator dimension " +
                                         std::to_string(dim));
  }
}

const CMatrix &pauli_basis_element(int n_qubits, Index k) { return basis(n_qubits)[k]; }

Vector density_to_vec(const CMatrix &rho) {
  int n = 0;
  while ((Index(1) << n) < rho.rows()) ++n;
  const auto &b = basis(n);
  Vector v(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) v[k] = (b[k] * rho).trace().real();
  return v;
}

CMatrix vec_to_density(const Vector &v) {
  int n = qubits_for_superop_dim(v.size());
  const auto &b = basis(n);
  Index d = Index(1) << n;
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < b.size(); ++k) rho += v[k] * b[k];
  return rho;
}

Matrix kraus_to_ptm(std::span<const CMatrix> kraus) {
  int n = 0;
  while ((Index(1) << n) < kraus.front().rows()) ++n;
  const auto &b = basis(n);
  Index dim = Index(b.size());
  Matrix r(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    CMatrix out = CMatrix::Zero(b[k].rows(), b[k].cols());
    for (const auto &K : kraus) out += K * b[k] * K.adjoint();
    for (Index j = 0; j < dim; ++j) r(j, k) = (b[j] * out).trace().real();
  }
  return r;
}

Matrix unitary_to_ptm(const CMatrix &U) {
  std::vector<CMatrix> k{U};
  return kraus_to_ptm(k);
}

CMatrix ptm_to_choi(const Matrix &ptm) {
  int n = qubits_for_superop_dim(ptm.rows());
  const auto &b = basis(n);
  Index d = Index(1) << n;
  Index dim = ptm.rows();
  // Phi(B_k) in the computational basis.
  std::vector<CMatrix> image(dim, CMatrix::Zero(d, d));
  for (Index k = 0; k < dim; ++k)
    for (Index j = 0; j < dim; ++j)
      if (ptm(j, k) != 0.0) image[k] += ptm(j, k) * b[j];
  CMatrix J = CMatrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index c = 0; c < d; ++c) {
      // |a><c| = sum_k <c|B_k|a> B_k
      CMatrix block = CMatrix::Zero(d, d);
      for (Index k = 0; k < dim; ++k) block += b[k](c, a) * image[k];
      J.block(a * d, c * d, d, d) = block;
    }
  return J;
}

Matrix choi_to_ptm(const CMatrix &choi) {
  Index d = 1;
  while (d * d < choi.rows()) ++d;
  int n = 0;
  while ((Index(1) << n) < d) ++n;
  const auto &b = basis(n);
  Index dim = d * d;
  Matrix r(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    CMatrix out = CMatrix::Zero(d, d);
    for (Index a = 0; a < d; ++a)
      for (Index c = 0; c < d; ++c) {
        cd coeff = b[k](a, c);
        if (coeff != cd(0)) out += coeff * choi.block(a * d, c * d, d, d);
      }
    for (Index j = 0; j < dim; ++j) r(j, k) = (b[j] * out).trace().real();
  }
  return r;
}

Vector choi_eigenvalues(const Matrix &ptm) {
  CMatrix J = ptm_to_choi(ptm);
  CMatrix H = 0.5 * (J + J.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Vector computational_effect(const std::string &bits) {
  int n = int(bits.size());
  Vector v = Vector::Ones(1);
  double h = 1.0 / std::sqrt(2.0);
  for (char c : bits) {
    Vector q(4);
    q << h, 0, 0, (c == '0' ? h : -h);
    Vector next(v.size() * 4);
    for (Index i = 0; i < v.size(); ++i) next.segment(i * 4, 4) = v[i] * q;
    v = next;
  }
  (void)n;
  return v;
}

Vector zero_state(int n_qubits) { return computational_effect(std::string(n_qubits, '0')); }

Vector identity_vec(int n_qubits) {
  Vector v = Vector::Zero(superop_dim(n_qubits));
  v[0] = std::pow(2.0, 0.5 * n_qubits);
  return v;
}

std::vector<std::string> bitstrings(int n_qubits) {
  std::vector<std::string> out;
  for (Index i = 0; i < (Index(1) << n_qubits); ++i) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q)
      if ((i >> (n_qubits - 1 - q)) & 1) s[q] = '1';
    out.push_back(s);
  }
  return out;
}

Matrix depolarizing_ptm(int n_qubits, double rate) {
  Matrix m = Matrix::Identity(superop_dim(n_qubits), superop_dim(n_qubits)) * (1.0 - rate);
  m(0, 0) = 1.0;
  return m;
}

namespace {

// Splits a full-register Pauli index into (sub-register index, rest index).
struct EmbedMap {
  std::vector<Index> sub, rest;
};

EmbedMap embed_map(std::span<const int> positions, int n_total) {
  Index dim = superop_dim(n_total);
  EmbedMap m{std::vector<Index>(dim), std::vector<Index>(dim)};
  std::vector<bool> in_sub(n_total, false);
  for (int p : positions) in_sub[p] = true;
  for (Index idx = 0; idx < dim; ++idx) {
    Index s = 0, r = 0;
    for (int p : positions) s = s * 4 + ((idx >> (2 * (n_total - 1 - p))) & 3);
    for (int q = 0; q < n_total; ++q)
      if (!in_sub[q]) r = r * 4 + ((idx >> (2 * (n_total - 1 - q))) & 3);
    m.sub[idx] = s;
    m.rest[idx] = r;
  }
  return m;
}

}  // namespace

Matrix embed_ptm(const Matrix &op, std::span<const int> positions, int n_total) {
  if (op.rows() != superop_dim(int(positions.size())))
    throw std::invalid_argument("embed_ptm: operator size does not match target count");
  Index dim = superop_dim(n_total);
  auto m = embed_map(positions, n_total);
  Matrix out = Matrix::Zero(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c)
      if (m.rest[r] == m.rest[c]) out(r, c) = op(m.sub[r], m.sub[c]);
  return out;
}

Matrix contract_embedded_gradient(const Matrix &grad, std::span<const int> positions,
                                  int n_total) {
  Index dim = superop_dim(n_total);
  Index sub_dim = superop_dim(int(positions.size()));
  auto m = embed_map(positions, n_total);
  Matrix out = Matrix::Zero(sub_dim, sub_dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c)
      if (m.rest[r] == m.rest[c]) out(m.sub[r], m.sub[c]) += grad(r, c);
  return out;
}

CMatrix standard_unitary(const std::string &name) {
  const double h = std::cos(M_PI / 4);
  const cd i(0, 1);
  CMatrix u;
  auto rot = [&](int axis, double angle) {
    CMatrix m = std::cos(angle / 2) * pauli(0) - i * std::sin(angle / 2) * pauli(axis);
    return m;
  };
  if (name == "Gxpi2") return rot(1, M_PI / 2);
  if (name == "Gxmpi2") return rot(1, -M_PI / 2);
  if (name == "Gypi2") return rot(2, M_PI / 2);
  if (name == "Gympi2") return rot(2, -M_PI / 2);
  if (name == "Gzpi2") return rot(3, M_PI / 2);
  if (name == "Gzmpi2") return rot(3, -M_PI / 2);
  if (name == "Gxpi") return rot(1, M_PI);
  if (name == "Gypi") return rot(2, M_PI);
  if (name == "Gzpi") return rot(3, M_PI);
  if (name == "Gh") {
    u.resize(2, 2);
    u << h, h, h, -h;
    return u;
  }
  if (name == "Gi") return pauli(0);
  if (name == "Gcnot") {
    u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
    return u;
  }
  if (name == "Gcphase") {
    u = CMatrix::Identity(4, 4);
    u(3, 3) = -1;
    return u;
  }
  if (name == "Gswap") {
    u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 2) = u(2, 1) = u(3, 3) = 1;
    return u;
  }
  throw std::invalid_argument("unknown gate name '" + name + "'");
}

bool is_standard_gate(const std::string &name) {
  try {
    standard_unitary(name);
    return true;
  } catch (const std::invalid_argument &) {
    return false;
  }
}

int standard_gate_qubits(const std::string &name) {
  return standard_unitary(name).rows() == 2 ? 1 : 2;
}

Matrix standard_ptm(const std::string &name) {
  Matrix r = unitary_to_ptm(standard_unitary(name));
  return r.unaryExpr([](double x) { return snap(x); });
}

}  // namespace qcvv
