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

#include "qcvv/gauge.hpp"

#include <cmath>
#include <random>

#include "qcvv/optimize.hpp"

namespace qcvv {

namespace {

struct Elements {
  std::vector<Matrix> gates, targets;
  Vector rho, rho_t;
  std::vector<Vector> effects, effects_t;
};

Elements collect(const GateSetModel &m, const GateSetModel &target) {
  if (m.dim() != target.dim()) throw GaugeError("model and target dimensions differ");
  Elements e;
  for (const auto &[label, op] : m.ops()) {
    if (!target.has_op(label))
      throw GaugeError("target lacks operation " + element_name(label));
    e.gates.push_back(m.dense_op(label));
    e.targets.push_back(target.dense_op(label));
  }
  e.rho = m.prep().vec;
  e.rho_t = target.prep().vec;
  e.effects = m.povm().effects;
  e.effects_t = target.povm().effects;
  if (e.effects.size() != e.effects_t.size()) throw GaugeError("POVM sizes differ");
  return e;
}

Matrix gauge_matrix(const Vector &x, Index D) {
  Matrix S = Matrix::Identity(D, D);
  Index k = 0;
  for (Index i = 1; i < D; ++i)
    for (Index j = 0; j < D; ++j) S(i, j) += x[k++];
  return S;
}

Index residual_size(const Elements &e, Index D) {
  return Index(e.gates.size()) * D * D + D + Index(e.effects.size()) * D;
}

Vector residuals(const Elements &e, const Matrix &S, const GaugeOptWeights &w) {
  Index D = S.rows();
  Matrix A = S.inverse();
  Vector r(residual_size(e, D));
  Index off = 0;
  double sg = std::sqrt(w.gates), ss = std::sqrt(w.spam);
  for (std::size_t g = 0; g < e.gates.size(); ++g) {
    Matrix diff = A * e.gates[g] * S - e.targets[g];
    r.segment(off, D * D) = sg * Eigen::Map<const Vector>(diff.data(), D * D);
    off += D * D;
  }
  r.segment(off, D) = ss * (A * e.rho - e.rho_t);
  off += D;
  for (std::size_t k = 0; k < e.effects.size(); ++k) {
    r.segment(off, D) = ss * (S.transpose() * e.effects[k] - e.effects_t[k]);
    off += D;
  }
  return r;
}

Matrix jacobian(const Elements &e, const Matrix &S, const GaugeOptWeights &w) {
  Index D = S.rows();
  Matrix A = S.inverse();
  Index n = D * (D - 1);
  Matrix J = Matrix::Zero(residual_size(e, D), n);
  double sg = std::sqrt(w.gates), ss = std::sqrt(w.spam);
  Index off = 0;
  for (const auto &G : e.gates) {
    Matrix Gt = A * G * S;
    Matrix AG = A * G;
    Index col = 0;
    for (Index i = 1; i < D; ++i)
      for (Index j = 0; j < D; ++j, ++col) {
        // d(A G S) for dS = E_ij
        for (Index b = 0; b < D; ++b)
          for (Index a = 0; a < D; ++a) {
            double v = -A(a, i) * Gt(j, b);
            if (b == j) v += AG(a, i);
            J(off + b * D + a, col) = sg * v;
          }
      }
    off += D * D;
  }
  Vector Ar = A * e.rho;
  Index col = 0;
  for (Index i = 1; i < D; ++i)
    for (Index j = 0; j < D; ++j, ++col) {
      for (Index a = 0; a < D; ++a) J(off + a, col) = -ss * A(a, i) * Ar[j];
      for (std::size_t k = 0; k < e.effects.size(); ++k)
        J(off + D + Index(k) * D + j, col) = ss * e.effects[k][i];
    }
  return J;
}

void check_transformable(const GateSetModel &m) {
  for (const auto &[label, op] : m.ops())
    if (op->kind() != OpKind::kFullTP && op->kind() != OpKind::kCPTP)
      throw GaugeError("operation " + element_name(label) + " (" + op_kind_name(op->kind()) +
                       ") cannot be transformed; disable gauge optimization");
  if (m.prep().kind == SpamKind::kStatic || m.povm().kind == SpamKind::kStatic)
    throw GaugeError("static SPAM cannot be transformed; disable gauge optimization");
  if (!m.is_dense_gateset())
    throw GaugeError("gauge optimization needs full-register operations");
}

bool well_conditioned(const Matrix &S) {
  Eigen::JacobiSVD<Matrix> svd(S);
  const auto &s = svd.singularValues();
  return s.allFinite() && s[s.size() - 1] > 1e-10 * s[0];
}

}  // namespace

double gauge_objective(const GateSetModel &m, const GateSetModel &target, const Matrix &S,
                       const GaugeOptWeights &w) {
  return residuals(collect(m, target), S, w).squaredNorm();
}

GaugeOptResult gauge_optimize_full(const GateSetModel &m, const GateSetModel &target,
                                   const GaugeOptWeights &w) {
  check_transformable(m);
  Elements e = collect(m, target);
  Index D = m.dim();
  auto res_fn = [&](const Vector &x) {
    Matrix S = gauge_matrix(x, D);
    if (!well_conditioned(S)) throw GaugeError("singular gauge matrix");
    return residuals(e, S, w);
  };
  auto jac_fn = [&](const Vector &x) { return jacobian(e, gauge_matrix(x, D), w); };
  LMOptions opts;
  opts.max_iter = 500;
  opts.gtol = 1e-14;
  opts.ftol = 1e-15;
  Vector x0 = Vector::Zero(D * (D - 1));
  LMResult lm = levenberg_marquardt(res_fn, jac_fn, x0, opts);
  if (!well_conditioned(gauge_matrix(lm.x, D))) {
    std::mt19937_64 gen(12345);
    std::normal_distribution<double> jitter(0.0, 1e-3);
    for (Index i = 0; i < x0.size(); ++i) x0[i] = jitter(gen);
    lm = levenberg_marquardt(res_fn, jac_fn, x0, opts);
    if (!well_conditioned(gauge_matrix(lm.x, D)))
      throw GaugeError("gauge optimization reached a singular gauge matrix");
  }
  GaugeOptResult out;
  out.iterations = lm.iterations;
  for (double c : lm.history) out.history.push_back(2.0 * c);
  // CPTP elements refuse transforms that leave the CPTP set; back off along
  // the straight line from the identity until they accept.
  double t = 1.0;
  for (int attempt = 0; attempt < 40; ++attempt, t *= 0.5) {
    Matrix S = gauge_matrix(t * lm.x, D);
    try {
      out.model = gauge_transform(m, S);
      out.S = S;
      out.step_fraction = t;
      out.objective = residuals(e, S, w).squaredNorm();
      return out;
    } catch (const GaugeError &) {
      if (attempt == 39) throw;
    }
  }
  throw GaugeError("gauge optimization failed");
}

GateSetModel gauge_optimize(const GateSetModel &m, const GateSetModel &target,
                            const GaugeOptWeights &w) {
  return gauge_optimize_full(m, target, w).model;
}

}  // namespace qcvv
