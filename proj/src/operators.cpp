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

#include "qcvv/operators.hpp"

#include <cmath>
#include <complex>

namespace qcvv {

namespace {

using cd = std::complex<double>;

constexpr double kTPTol = 1e-9;

CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

Index choi_side(Index choi_dim) {
  Index d = 1;
  while (d * d < choi_dim) ++d;
  return d;
}

CMatrix partial_trace_out(const CMatrix &J) {
  Index d = choi_side(J.rows());
  CMatrix out = CMatrix::Zero(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index i = 0; i < d; ++i) out(a, b) += J(a * d + i, b * d + i);
  return out;
}

CMatrix project_tp(const CMatrix &J) {
  Index d = choi_side(J.rows());
  CMatrix diff = partial_trace_out(J) - CMatrix::Identity(d, d);
  CMatrix out = J;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index i = 0; i < d; ++i) out(a * d + i, b * d + i) -= diff(a, b) / double(d);
  return out;
}

CMatrix project_psd(const CMatrix &J) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(J));
  Vector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::string op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::kFullTP: return "full_tp";
    case OpKind::kCPTP: return "cptp";
    case OpKind::kStatic: return "static";
    case OpKind::kDepolOverrotation: return "xpi2_depol_overrotation";
    case OpKind::kDepolarizeWrapper: return "depolarize_wrapper";
  }
  return "?";
}

OpKind parse_op_kind(const std::string &name) {
  if (name == "full_tp" || name == "full-TP" || name == "TP") return OpKind::kFullTP;
  if (name == "cptp" || name == "CPTP") return OpKind::kCPTP;
  if (name == "static") return OpKind::kStatic;
  if (name == "xpi2_depol_overrotation") return OpKind::kDepolOverrotation;
  if (name == "depolarize_wrapper") return OpKind::kDepolarizeWrapper;
  throw ModelError("unknown parameterization '" + name + "'");
}

Matrix Operator::dense_jacobian() const {
  Index n = num_params();
  Index size = dense().size();
  Matrix jac(size, n);
  auto probe = clone();
  Vector v = to_vector();
  const double h = 1e-6;
  for (Index k = 0; k < n; ++k) {
    Vector vp = v, vm = v;
    vp[k] += h;
    vm[k] -= h;
    probe->from_vector(vp);
    Matrix plus = probe->dense();
    probe->from_vector(vm);
    Matrix minus = probe->dense();
    Matrix diff = (plus - minus) / (2 * h);
    jac.col(k) = Eigen::Map<const Vector>(diff.data(), size);
  }
  return jac;
}

void Operator::transform(const Matrix &, const Matrix &) {
  throw GaugeError(op_kind_name(kind()) + " operation cannot be gauge transformed");
}

// --- FullTPOp --------------------------------------------------------------

FullTPOp::FullTPOp(const Matrix &dense) : dense_(dense) {
  if (dense.rows() != dense.cols()) throw ModelError("operation matrix must be square");
  qubits_for_superop_dim(dense.rows());
  Vector first = dense.row(0).transpose();
  Vector expect = Vector::Zero(dense.cols());
  expect[0] = 1.0;
  if ((first - expect).cwiseAbs().maxCoeff() > kTPTol)
    throw ModelError("matrix is not trace preserving; cannot parameterize as full_tp");
  dense_.row(0) = expect.transpose();
}

Vector FullTPOp::to_vector() const {
  Index D = dense_.rows();
  Vector v(num_params());
  Index k = 0;
  for (Index r = 1; r < D; ++r)
    for (Index c = 0; c < D; ++c) v[k++] = dense_(r, c);
  return v;
}

void FullTPOp::from_vector(const Vector &v) {
  if (v.size() != num_params()) throw ModelError("full_tp: wrong parameter count");
  Index D = dense_.rows();
  Index k = 0;
  for (Index r = 1; r < D; ++r)
    for (Index c = 0; c < D; ++c) dense_(r, c) = v[k++];
}

Matrix FullTPOp::dense_jacobian() const {
  Index D = dense_.rows();
  Matrix jac = Matrix::Zero(D * D, num_params());
  Index k = 0;
  for (Index r = 1; r < D; ++r)
    for (Index c = 0; c < D; ++c) jac(c * D + r, k++) = 1.0;
  return jac;
}

void FullTPOp::transform(const Matrix &S, const Matrix &S_inv) {
  Matrix next = S_inv * dense_ * S;
  Vector expect = Vector::Zero(next.cols());
  expect[0] = 1.0;
  if ((next.row(0).transpose() - expect).cwiseAbs().maxCoeff() > kTPTol)
    throw GaugeError("gauge transform is not trace preserving");
  next.row(0) = expect.transpose();
  dense_ = next;
}

// --- StaticOp --------------------------------------------------------------

void StaticOp::from_vector(const Vector &v) {
  if (v.size() != 0) throw ModelError("static: wrong parameter count");
}

// --- CPTPOp ----------------------------------------------------------------

CPTPOp::CPTPOp(const Matrix &dense) {
  qubits_for_superop_dim(dense.rows());
  Matrix target = dense;
  if (!is_cptp(dense)) {
    target = project_to_cptp(dense);
    projection_distance_ = (target - dense).norm();
  }
  set_from_choi(ptm_to_choi(target));
}

void CPTPOp::set_from_choi(const CMatrix &choi) {
  choi_dim_ = choi.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(choi));
  Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMatrix B = es.eigenvectors() * ev.asDiagonal();
  // B = L Q with L lower triangular: QR of B^dagger gives B^dagger = Q R.
  Eigen::HouseholderQR<CMatrix> qr(B.adjoint());
  CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < R.rows(); ++i) {
    double mag = std::abs(R(i, i));
    if (mag > 0) R.row(i) *= std::conj(R(i, i) / mag);
  }
  CMatrix L = R.adjoint();
  Index D = choi_dim_;
  params_.resize(D * D);
  Index k = 0;
  for (Index i = 0; i < D; ++i)
    for (Index j = 0; j <= i; ++j) {
      if (i == j) {
        params_[k++] = L(i, i).real();
      } else {
        params_[k++] = L(i, j).real();
        params_[k++] = L(i, j).imag();
      }
    }
  rebuild();
}

void CPTPOp::from_vector(const Vector &v) {
  if (v.size() != params_.size()) throw ModelError("cptp: wrong parameter count");
  params_ = v;
  rebuild();
}

void CPTPOp::rebuild() {
  Index D = choi_dim_;
  Index d = choi_side(D);
  CMatrix L = CMatrix::Zero(D, D);
  Index k = 0;
  for (Index i = 0; i < D; ++i)
    for (Index j = 0; j <= i; ++j) {
      if (i == j) {
        L(i, i) = params_[k++];
      } else {
        L(i, j) = cd(params_[k], params_[k + 1]);
        k += 2;
      }
    }
  std::vector<CMatrix> kraus;
  CMatrix M = CMatrix::Zero(d, d);
  for (Index col = 0; col < D; ++col) {
    if (L.col(col).squaredNorm() == 0.0) continue;
    CMatrix K(d, d);
    for (Index in = 0; in < d; ++in)
      for (Index out = 0; out < d; ++out) K(out, in) = L(in * d + out, col);
    M += K.adjoint() * K;
    kraus.push_back(std::move(K));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(M));
  if (kraus.empty() || es.eigenvalues().minCoeff() <= 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw ModelError("cptp: singular normalization (parameters outside the valid domain)");
  CMatrix inv_sqrt = es.operatorInverseSqrt();
  for (auto &K : kraus) K = K * inv_sqrt;
  dense_ = kraus_to_ptm(kraus);
}

void CPTPOp::transform(const Matrix &S, const Matrix &S_inv) {
  Matrix next = S_inv * dense_ * S;
  if (!is_cptp(next)) throw GaugeError("gauge transform leaves the CPTP set");
  set_from_choi(ptm_to_choi(next));
  projection_distance_ = 0.0;
}

// --- XPi2DepolOverrotationOp -------------------------------------------------

XPi2DepolOverrotationOp::XPi2DepolOverrotationOp(double depol, double over_rotation) {
  Vector v(2);
  v << depol, over_rotation;
  from_vector(v);
}

Vector XPi2DepolOverrotationOp::to_vector() const {
  Vector v(2);
  v << depol_, over_rotation_;
  return v;
}

void XPi2DepolOverrotationOp::from_vector(const Vector &v) {
  if (v.size() != 2) throw ModelError("xpi2_depol_overrotation: wrong parameter count");
  depol_ = v[0];
  over_rotation_ = v[1];
  double a = 1.0 - depol_;
  double b = a * std::cos(over_rotation_);
  double c = a * std::sin(over_rotation_);
  dense_ = Matrix::Zero(4, 4);
  dense_(0, 0) = 1.0;
  dense_(1, 1) = a;
  dense_(2, 2) = c;
  dense_(2, 3) = -b;
  dense_(3, 2) = b;
  dense_(3, 3) = c;
}

Matrix XPi2DepolOverrotationOp::dense_jacobian() const {
  Matrix jac = Matrix::Zero(16, 2);
  double a = 1.0 - depol_;
  double cs = std::cos(over_rotation_), sn = std::sin(over_rotation_);
  auto at = [](Index r, Index c) { return c * 4 + r; };
  jac(at(1, 1), 0) = -1.0;
  jac(at(2, 2), 0) = -sn;
  jac(at(3, 3), 0) = -sn;
  jac(at(2, 3), 0) = cs;
  jac(at(3, 2), 0) = -cs;
  jac(at(2, 2), 1) = a * cs;
  jac(at(3, 3), 1) = a * cs;
  jac(at(2, 3), 1) = a * sn;
  jac(at(3, 2), 1) = -a * sn;
  return jac;
}

void XPi2DepolOverrotationOp::transform(const Matrix &, const Matrix &) {
  throw GaugeError("xpi2_depol_overrotation operation cannot be transformed");
}

// --- DepolarizeWrapperOp -----------------------------------------------------

DepolarizeWrapperOp::DepolarizeWrapperOp(ParameterizedOp inner, double rate)
    : inner_(std::move(inner)), rate_(rate) {
  if (rate < 0.0 || rate > 1.0) throw ModelError("depolarization rate outside [0,1]");
  rebuild();
}

void DepolarizeWrapperOp::from_vector(const Vector &v) {
  inner_->from_vector(v);
  rebuild();
}

void DepolarizeWrapperOp::rebuild() {
  dense_ = inner_->dense();
  dense_.bottomRows(dense_.rows() - 1) *= (1.0 - rate_);
}

Matrix DepolarizeWrapperOp::dense_jacobian() const {
  Matrix jac = inner_->dense_jacobian();
  Index D = dense_.rows();
  for (Index k = 0; k < jac.cols(); ++k)
    for (Index c = 0; c < D; ++c)
      for (Index r = 1; r < D; ++r) jac(c * D + r, k) *= (1.0 - rate_);
  return jac;
}

void DepolarizeWrapperOp::transform(const Matrix &, const Matrix &) {
  throw GaugeError("depolarize_wrapper operation cannot be transformed");
}

// --- factories ---------------------------------------------------------------

ParameterizedOp make_full_tp(const Matrix &dense) {
  return ParameterizedOp(std::make_unique<FullTPOp>(dense));
}

ParameterizedOp make_static(const Matrix &dense) {
  return ParameterizedOp(std::make_unique<StaticOp>(dense));
}

ParameterizedOp make_cptp(const Matrix &dense) {
  return ParameterizedOp(std::make_unique<CPTPOp>(dense));
}

ParameterizedOp custom_xpi2_op(double depol, double over_rotation) {
  return ParameterizedOp(std::make_unique<XPi2DepolOverrotationOp>(depol, over_rotation));
}

ParameterizedOp convert_op(const ParameterizedOp &op, OpKind kind) {
  if (op->kind() == kind) return op;
  switch (kind) {
    case OpKind::kFullTP: return make_full_tp(op->dense());
    case OpKind::kCPTP: return make_cptp(op->dense());
    case OpKind::kStatic: return make_static(op->dense());
    default: throw ModelError("cannot convert an operation to " + op_kind_name(kind));
  }
}

bool is_cptp(const Matrix &ptm, double tol) {
  CMatrix J = ptm_to_choi(ptm);
  Index d = choi_side(J.rows());
  if ((partial_trace_out(J) - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(J), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix project_to_cptp(const Matrix &ptm, int max_iter, double tol) {
  // Dykstra's alternating projections between the TP affine space and the
  // PSD cone converge to the Frobenius-nearest point of the intersection.
  CMatrix x = hermitian_part(ptm_to_choi(ptm));
  CMatrix p = CMatrix::Zero(x.rows(), x.cols());
  CMatrix q = p;
  for (int it = 0; it < max_iter; ++it) {
    CMatrix y = project_tp(x + p);
    p = x + p - y;
    CMatrix x_next = project_psd(y + q);
    q = y + q - x_next;
    double change = (x_next - x).norm();
    x = x_next;
    if (change < tol) break;
  }
  // Final TP fix-up; the CPTP parameterization renormalizes any residue.
  return choi_to_ptm(project_tp(x));
}

}  // namespace qcvv
