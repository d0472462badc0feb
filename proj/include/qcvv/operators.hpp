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

#include <memory>
#include <stdexcept>
#include <string>

#include "qcvv/basis.hpp"

namespace qcvv {

enum class OpKind {
  kFullTP,
  kCPTP,
  kStatic,
  kDepolOverrotation,
  kDepolarizeWrapper,
};

/// Canonical parameterization names: "full_tp", "cptp", "static",
/// "xpi2_depol_overrotation", "depolarize_wrapper".
std::string op_kind_name(OpKind kind);
OpKind parse_op_kind(const std::string &name);

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that cannot represent a gauge-transformed version of itself.
class GaugeError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A superoperator (PTM in the normalized Pauli basis) that is a function of a
/// real parameter vector. Subclass this for custom gate models; only
/// num_params/to_vector/from_vector/dense/clone are mandatory.
class Operator {
 public:
  virtual ~Operator() = default;

  virtual std::unique_ptr<Operator> clone() const = 0;
  virtual OpKind kind() const = 0;
  virtual Index num_params() const = 0;
  virtual Vector to_vector() const = 0;
  virtual void from_vector(const Vector &v) = 0;
  virtual const Matrix &dense() const = 0;

  /// d vec(dense()) / d params with column-major vec. The default uses
  /// central differences through from_vector().
  virtual Matrix dense_jacobian() const;

  /// Replace this operator with S^-1 * op * S. The default refuses.
  virtual void transform(const Matrix &S, const Matrix &S_inv);

  Index dim() const { return dense().rows(); }
  int num_qubits() const { return qubits_for_superop_dim(dim()); }
};

/// Value-semantic owner of an Operator (copies clone).
class ParameterizedOp {
 public:
  ParameterizedOp() = default;
  explicit ParameterizedOp(std::unique_ptr<Operator> op) : op_(std::move(op)) {}
  ParameterizedOp(const ParameterizedOp &o) : op_(o.op_ ? o.op_->clone() : nullptr) {}
  ParameterizedOp(ParameterizedOp &&) noexcept = default;
  ParameterizedOp &operator=(const ParameterizedOp &o) {
    if (this != &o) op_ = o.op_ ? o.op_->clone() : nullptr;
    return *this;
  }
  ParameterizedOp &operator=(ParameterizedOp &&) noexcept = default;

  Operator *operator->() { return op_.get(); }
  const Operator *operator->() const { return op_.get(); }
  Operator &operator*() { return *op_; }
  const Operator &operator*() const { return *op_; }
  explicit operator bool() const { return bool(op_); }
  const Operator *get() const { return op_.get(); }

 private:
  std::unique_ptr<Operator> op_;
};

/// Rows 2..d^2 free, first row pinned to (1, 0, ..., 0). (d^2-1)*d^2 params.
class FullTPOp final : public Operator {
 public:
  /// Throws ModelError if the first row is not (1, 0, ..., 0) within 1e-9.
  explicit FullTPOp(const Matrix &dense);

  std::unique_ptr<Operator> clone() const override { return std::make_unique<FullTPOp>(*this); }
  OpKind kind() const override { return OpKind::kFullTP; }
  Index num_params() const override { return (dense_.rows() - 1) * dense_.cols(); }
  Vector to_vector() const override;
  void from_vector(const Vector &v) override;
  const Matrix &dense() const override { return dense_; }
  Matrix dense_jacobian() const override;
  void transform(const Matrix &S, const Matrix &S_inv) override;

 private:
  Matrix dense_;
};

/// Zero parameters; cannot be gauge transformed.
class StaticOp final : public Operator {
 public:
  explicit StaticOp(Matrix dense) : dense_(std::move(dense)) {}

  std::unique_ptr<Operator> clone() const override { return std::make_unique<StaticOp>(*this); }
  OpKind kind() const override { return OpKind::kStatic; }
  Index num_params() const override { return 0; }
  Vector to_vector() const override { return Vector(0); }
  void from_vector(const Vector &v) override;
  const Matrix &dense() const override { return dense_; }
  Matrix dense_jacobian() const override { return Matrix(dense_.size(), 0); }

 private:
  Matrix dense_;
};

/// Completely positive, trace-preserving map parameterized by a
/// lower-triangular factor L of the Choi matrix (real diagonal, complex
/// strict lower triangle; d^4 real parameters). The Kraus operators read off
/// the columns of L are renormalized by M^-1/2 with M = sum K^dagger K, so
/// every parameter vector with invertible M yields a CPTP map.
class CPTPOp final : public Operator {
 public:
  /// Projects `dense` onto the CPTP set (Frobenius-nearest) when it is not
  /// already CPTP; the distance moved is kept in projection_distance().
  explicit CPTPOp(const Matrix &dense);

  std::unique_ptr<Operator> clone() const override { return std::make_unique<CPTPOp>(*this); }
  OpKind kind() const override { return OpKind::kCPTP; }
  Index num_params() const override { return params_.size(); }
  Vector to_vector() const override { return params_; }
  void from_vector(const Vector &v) override;
  const Matrix &dense() const override { return dense_; }
  void transform(const Matrix &S, const Matrix &S_inv) override;

  double projection_distance() const { return projection_distance_; }

 private:
  void set_from_choi(const CMatrix &choi);
  void rebuild();

  Index choi_dim_ = 0;
  Vector params_;
  Matrix dense_;
  double projection_distance_ = 0.0;
};

/// Single-qubit X(pi/2) gate with a depolarization rate and an over-rotation:
///   theta = (pi/2 + over_rotation) / 2,  a = 1 - depol,
///   b = a * 2 cos(theta) sin(theta),     c = a * (sin^2 theta - cos^2 theta)
///   [[1,0,0,0],[0,a,0,0],[0,0,c,-b],[0,0,b,c]]
/// b and c are evaluated as a*cos(over_rotation) and a*sin(over_rotation),
/// which are the same expressions and exact at zero.
class XPi2DepolOverrotationOp final : public Operator {
 public:
  XPi2DepolOverrotationOp(double depol = 0.0, double over_rotation = 0.0);

  std::unique_ptr<Operator> clone() const override {
    return std::make_unique<XPi2DepolOverrotationOp>(*this);
  }
  OpKind kind() const override { return OpKind::kDepolOverrotation; }
  Index num_params() const override { return 2; }
  Vector to_vector() const override;
  void from_vector(const Vector &v) override;
  const Matrix &dense() const override { return dense_; }
  Matrix dense_jacobian() const override;
  void transform(const Matrix &, const Matrix &) override;

  double depol() const { return depol_; }
  double over_rotation() const { return over_rotation_; }

 private:
  double depol_ = 0.0, over_rotation_ = 0.0;
  Matrix dense_;
};

/// diag(1, 1-rate, ...) composed after an inner parameterized op; the rate is
/// fixed and the parameters are the inner op's.
class DepolarizeWrapperOp final : public Operator {
 public:
  DepolarizeWrapperOp(ParameterizedOp inner, double rate);

  std::unique_ptr<Operator> clone() const override {
    return std::make_unique<DepolarizeWrapperOp>(*this);
  }
  OpKind kind() const override { return OpKind::kDepolarizeWrapper; }
  Index num_params() const override { return inner_->num_params(); }
  Vector to_vector() const override { return inner_->to_vector(); }
  void from_vector(const Vector &v) override;
  const Matrix &dense() const override { return dense_; }
  Matrix dense_jacobian() const override;
  void transform(const Matrix &, const Matrix &) override;

  double rate() const { return rate_; }
  const ParameterizedOp &inner() const { return inner_; }

 private:
  void rebuild();

  ParameterizedOp inner_;
  double rate_;
  Matrix dense_;
};

ParameterizedOp make_full_tp(const Matrix &dense);
ParameterizedOp make_static(const Matrix &dense);
ParameterizedOp make_cptp(const Matrix &dense);

/// custom_xpi2_op: the 2-parameter depolarized, over-rotated X(pi/2).
ParameterizedOp custom_xpi2_op(double depol, double over_rotation);

/// Re-express `op` in `kind` (full_tp, cptp or static), keeping its dense
/// matrix. Same-kind conversion returns an identical copy.
ParameterizedOp convert_op(const ParameterizedOp &op, OpKind kind);

/// Frobenius-nearest CPTP map (alternating projections in Choi space).
/// Returns the projected PTM.
Matrix project_to_cptp(const Matrix &ptm, int max_iter = 2000, double tol = 1e-13);

bool is_cptp(const Matrix &ptm, double tol = 1e-9);

}  // namespace qcvv
