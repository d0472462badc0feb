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

#include "qcvv/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "qcvv/forward_sim.hpp"
#include "qcvv/optimize.hpp"

namespace qcvv {

CountTable make_count_table(const DataSet &ds, const std::vector<Circuit> &circuits,
                            const std::vector<std::string> &outcomes) {
  std::vector<int> column(outcomes.size(), -1);
  for (std::size_t o = 0; o < outcomes.size(); ++o)
    for (std::size_t k = 0; k < ds.outcomes().size(); ++k)
      if (ds.outcomes()[k] == outcomes[o]) column[o] = int(k);
  for (std::size_t k = 0; k < ds.outcomes().size(); ++k) {
    bool known = false;
    for (int c : column) known |= (c == int(k));
    if (!known) throw DataError("dataset outcome '" + ds.outcomes()[k] + "' is not a model outcome");
  }
  CountTable t;
  t.circuits = circuits;
  t.counts = Matrix::Zero(Index(circuits.size()), Index(outcomes.size()));
  t.totals = Vector::Zero(Index(circuits.size()));
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    const auto &n = ds.counts(circuits[c]);
    for (std::size_t o = 0; o < outcomes.size(); ++o)
      if (column[o] >= 0) t.counts(Index(c), Index(o)) = double(n[column[o]]);
    t.totals[Index(c)] = t.counts.row(Index(c)).sum();
  }
  return t;
}

double kl_term(double f, double x) {
  if (f <= 0) return x;
  double d = f / x - 1.0;
  if (std::abs(d) < 1e-3) {
    // (1+d) log1p(d) - d, by series
    double d2 = d * d;
    return x * d2 * (0.5 - d / 6.0 + d2 / 12.0 - d2 * d / 20.0 + d2 * d2 / 30.0);
  }
  return x * ((1.0 + d) * std::log1p(d) - d);
}

double logl(const Matrix &p, const CountTable &t) {
  double s = 0.0;
  for (Index c = 0; c < t.counts.rows(); ++c)
    for (Index o = 0; o < t.counts.cols(); ++o) {
      double n = t.counts(c, o);
      if (n > 0) s += n * std::log(std::max(p(c, o), kProbClip));
    }
  return s;
}

double logl_max(const CountTable &t) {
  double s = 0.0;
  for (Index c = 0; c < t.counts.rows(); ++c)
    for (Index o = 0; o < t.counts.cols(); ++o) {
      double n = t.counts(c, o);
      if (n > 0) s += n * std::log(n / t.totals[c]);
    }
  return s;
}

double chi2(const Matrix &p, const CountTable &t) {
  double s = 0.0;
  for (Index c = 0; c < t.counts.rows(); ++c) {
    double N = t.totals[c];
    if (N <= 0) continue;
    for (Index o = 0; o < t.counts.cols(); ++o) {
      double f = t.counts(c, o) / N;
      double q = std::clamp(p(c, o), kProbClip, 1.0 - kProbClip);
      s += N * (p(c, o) - f) * (p(c, o) - f) / (q * (1.0 - q));
    }
  }
  return s;
}

void chi2_residuals(const Matrix &p, const CountTable &t, Vector &r, Vector &dr_dp) {
  Index C = t.counts.rows(), K = t.counts.cols();
  r.setZero(C * K);
  dr_dp.setZero(C * K);
  for (Index c = 0; c < C; ++c) {
    double N = t.totals[c];
    if (N <= 0) continue;
    double sN = std::sqrt(N);
    for (Index o = 0; o < K; ++o) {
      double f = t.counts(c, o) / N;
      double pv = p(c, o);
      bool clipped = pv < kProbClip || pv > 1.0 - kProbClip;
      double q = std::clamp(pv, kProbClip, 1.0 - kProbClip);
      double w = std::sqrt(q * (1.0 - q));
      Index i = c * K + o;
      r[i] = sN * (pv - f) / w;
      double dw = clipped ? 0.0 : (1.0 - 2.0 * q) / (2.0 * w);
      dr_dp[i] = sN * (1.0 / w - (pv - f) * dw / (w * w));
    }
  }
}

void logl_residuals(const Matrix &p, const CountTable &t, Vector &r, Vector &dr_dp) {
  Index C = t.counts.rows(), K = t.counts.cols();
  r.setZero(C * K);
  dr_dp.setZero(C * K);
  const double pc = kProbClip;
  for (Index c = 0; c < C; ++c) {
    double N = t.totals[c];
    if (N <= 0) continue;
    for (Index o = 0; o < K; ++o) {
      double f = t.counts(c, o) / N;
      double pv = p(c, o);
      double term, dterm;
      auto exact = [&](double x, double &v, double &dv) {
        v = N * kl_term(f, x);
        dv = N * (1.0 - f / x);
      };
      double t0, d0;
      exact(pc, t0, d0);
      double curv = std::max(N * f / (pc * pc), N / pc);
      // For f < pc the minimum sits inside the quadratic continuation; shift
      // it to zero so the signed root stays smooth through it.
      double pmin = f, tmin = 0.0;
      if (f < pc) {
        pmin = pc - d0 / curv;
        tmin = t0 - 0.5 * d0 * d0 / curv;
      }
      if (pv >= pc) {
        exact(pv, term, dterm);
      } else {
        double dx = pv - pc;
        term = t0 + d0 * dx + 0.5 * curv * dx * dx;
        dterm = d0 + curv * dx;
      }
      term = std::max(term - tmin, 0.0);
      double sign = pv >= pmin ? 1.0 : -1.0;
      double rv = sign * std::sqrt(2.0 * term);
      Index i = c * K + o;
      r[i] = rv;
      if (std::abs(rv) > 1e-10 * std::sqrt(N)) {
        dr_dp[i] = dterm / rv;
      } else {
        dr_dp[i] = f >= pc ? std::sqrt(N / f) : std::sqrt(curv);
      }
    }
  }
}

Vector per_circuit_two_delta_logl(const Matrix &p, const CountTable &t) {
  // Written as sum_o [f log(f/q) + p - f], which equals the usual sum f log(f/q)
  // when the model probabilities sum to one, but has no first-order
  // cancellation between outcomes.
  Vector out = Vector::Zero(t.counts.rows());
  for (Index c = 0; c < t.counts.rows(); ++c) {
    double N = t.totals[c];
    if (N <= 0) continue;
    double s = 0.0;
    for (Index o = 0; o < t.counts.cols(); ++o) {
      double n = t.counts(c, o), pv = p(c, o);
      if (n > 0) {
        double q = std::max(pv, kProbClip);
        s += kl_term(n / N, q) + (pv - q);
      } else {
        s += pv;
      }
    }
    out[c] = 2.0 * N * s;
  }
  return out;
}

namespace {

Matrix model_probs(const GateSetModel &m, const std::vector<Circuit> &circuits) {
  return bulk_probs(m, EvalTree(circuits));
}

}  // namespace

double logl(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits) {
  auto t = make_count_table(ds, circuits, m.povm().outcomes);
  return logl(model_probs(m, circuits), t);
}

double two_delta_logl(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits) {
  auto t = make_count_table(ds, circuits, m.povm().outcomes);
  return per_circuit_two_delta_logl(model_probs(m, circuits), t).sum();
}

double chi2(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits) {
  auto t = make_count_table(ds, circuits, m.povm().outcomes);
  return chi2(model_probs(m, circuits), t);
}

Index nongauge_params(const GateSetModel &m) {
  Index np = m.num_params();
  if (np == 0) return 0;
  Index D = m.dim();
  Index K = Index(m.povm().effects.size());
  Index n_ops = Index(m.ops().size());
  Index rows = D + K * D + n_ops * D * D;
  Index gauge_cols = D * (D - 1);
  Matrix J = Matrix::Zero(rows, np + gauge_cols);

  auto blocks = m.param_blocks();
  if (m.prep().kind == SpamKind::kFullTP)
    for (Index k = 0; k < D - 1; ++k) J(1 + k, blocks[0].offset + k) = 1.0;
  if (m.povm().kind == SpamKind::kFullTP)
    for (Index e = 0; e + 1 < K; ++e)
      for (Index k = 0; k < D; ++k) {
        J(D + e * D + k, blocks[1].offset + e * D + k) = 1.0;
        J(D + (K - 1) * D + k, blocks[1].offset + e * D + k) = -1.0;
      }
  Index row0 = D + K * D;
  std::size_t b = 2;
  std::vector<Matrix> dense;
  for (const auto &[label, op] : m.ops()) {
    const auto &blk = blocks[b++];
    dense.push_back(m.dense_op(label));
    if (blk.count > 0) {
      Matrix jac = op->dense_jacobian();
      bool embedded = op->dim() != D;
      auto pos = embedded ? m.embed_positions(label) : std::vector<int>{};
      for (Index k = 0; k < blk.count; ++k) {
        Matrix col = Eigen::Map<const Matrix>(jac.col(k).data(), op->dim(), op->dim());
        if (embedded) col = embed_ptm(col, pos, m.num_qubits());
        J.block(row0, blk.offset + k, D * D, 1) = Eigen::Map<const Vector>(col.data(), D * D);
      }
    }
    row0 += D * D;
  }

  Index g = np;
  const Vector &rho = m.prep().vec;
  for (Index i = 1; i < D; ++i)
    for (Index j = 0; j < D; ++j, ++g) {
      // X = E_ij
      for (Index a = 0; a < D; ++a) J(a, g) = a == i ? -rho[j] : 0.0;
      for (Index e = 0; e < K; ++e) J(D + e * D + j, g) = m.povm().effects[e][i];
      Index r0 = D + K * D;
      for (const auto &G : dense) {
        Matrix d = Matrix::Zero(D, D);
        d.col(j) += G.col(i);
        d.row(i) -= G.row(j);
        J.block(r0, g, D * D, 1) = Eigen::Map<const Vector>(d.data(), D * D);
        r0 += D * D;
      }
    }
  Matrix Jg = J.rightCols(gauge_cols);
  Index rank_all = numerical_rank(J);
  Index rank_gauge = numerical_rank(Jg);
  return rank_all - rank_gauge;
}

WilksStats wilks_stats(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits,
                       std::optional<Index> n_nongauge) {
  auto t = make_count_table(ds, circuits, m.povm().outcomes);
  Matrix p = model_probs(m, circuits);
  WilksStats w;
  // termwise: the two log-likelihoods cancel badly for large counts
  w.two_delta_logl = per_circuit_two_delta_logl(p, t).sum();
  w.chi2 = chi2(p, t);
  w.n_nongauge = n_nongauge ? *n_nongauge : nongauge_params(m);
  // A circuit contributes one dof per outcome the model can produce, minus
  // one; outcomes pinned at probability 0 are not free under the null.
  double dof = 0.0;
  for (Index c = 0; c < t.totals.size(); ++c) {
    if (t.totals[c] <= 0) continue;
    Index support = (p.row(c).array() > kProbClip).count();
    dof += double(std::max<Index>(support - 1, 0));
  }
  w.k = dof - double(w.n_nongauge);
  if (w.k <= 0)
    throw ModelError("Wilks statistic needs positive degrees of freedom (k = " +
                     std::to_string(long(w.k)) + "); add circuits or data");
  w.nsigma = (w.two_delta_logl - w.k) / std::sqrt(2.0 * w.k);
  return w;
}

double two_delta_logl_nsigma(const GateSetModel &m, const DataSet &ds,
                             const std::vector<Circuit> &circuits) {
  return wilks_stats(m, ds, circuits).nsigma;
}

double two_delta_logl_nsigma(const GateSetModel &m, const DataSet &ds) {
  return two_delta_logl_nsigma(m, ds, ds.circuits());
}

}  // namespace qcvv
