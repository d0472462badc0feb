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

#include "qcvv/model.hpp"

#include <algorithm>
#include <cmath>

namespace qcvv {

Index Povm::num_params() const {
  if (kind == SpamKind::kStatic || effects.empty()) return 0;
  return Index(effects.size() - 1) * effects.front().size();
}

ModelParam parse_model_param(const std::string &name) {
  if (name == "TP" || name == "full TP" || name == "full_tp" || name == "full-TP")
    return ModelParam::kFullTP;
  if (name == "CPTP" || name == "cptp") return ModelParam::kCPTP;
  if (name == "static" || name == "Target") return ModelParam::kStatic;
  throw ModelError("unknown parameterization '" + name + "'");
}

std::string model_param_name(ModelParam p) {
  switch (p) {
    case ModelParam::kFullTP: return "TP";
    case ModelParam::kCPTP: return "CPTP";
    case ModelParam::kStatic: return "static";
  }
  return "?";
}

std::string element_name(const GateLabel &l) { return l.name.empty() ? "[]" : l.str(); }

GateLabel parse_element_name(const std::string &s) {
  if (s == "[]") return GateLabel{};
  GateLabel l;
  std::size_t p = s.find(':');
  l.name = s.substr(0, p);
  while (p != std::string::npos) {
    std::size_t q = s.find(':', p + 1);
    l.targets.push_back(s.substr(p + 1, q == std::string::npos ? q : q - p - 1));
    p = q;
  }
  if (l.name.size() < 2 || l.name[0] != 'G') throw ModelError("bad element name '" + s + "'");
  return l;
}

GateSetModel::GateSetModel(std::vector<LineLabel> lines) : lines_(std::move(lines)) {
  if (lines_.empty() || lines_.size() > 3)
    throw ModelError("dense models support 1 to 3 qubits, got " + std::to_string(lines_.size()));
  int n = num_qubits();
  prep_.vec = zero_state(n);
  povm_.outcomes = bitstrings(n);
  for (const auto &b : povm_.outcomes) povm_.effects.push_back(computational_effect(b));
}

const ParameterizedOp &GateSetModel::op(const GateLabel &l) const {
  auto it = ops_.find(l);
  if (it == ops_.end()) throw ModelError("model has no operation " + element_name(l));
  return it->second;
}

std::vector<int> GateSetModel::embed_positions(const GateLabel &label) const {
  std::vector<int> pos;
  for (const auto &t : label.targets) {
    auto it = std::find(lines_.begin(), lines_.end(), t);
    if (it == lines_.end()) throw ModelError("target '" + t + "' is not a model line");
    pos.push_back(int(it - lines_.begin()));
  }
  return pos;
}

void GateSetModel::set_op(const GateLabel &l, ParameterizedOp op) {
  if (!op) throw ModelError("null operation for " + element_name(l));
  Index d = op->dim();
  if (d != dim()) {
    auto pos = embed_positions(l);
    if (pos.empty() || d != superop_dim(int(pos.size())))
      throw ModelError("dimension mismatch for " + element_name(l) + ": operation is " +
                       std::to_string(d) + "x" + std::to_string(d));
  } else if (!l.name.empty()) {
    embed_positions(l);
  }
  ops_[l] = std::move(op);
}

Index GateSetModel::num_params() const {
  Index n = prep_.num_params() + povm_.num_params();
  for (const auto &[l, op] : ops_) n += op->num_params();
  return n;
}

std::vector<ParamBlock> GateSetModel::param_blocks() const {
  std::vector<ParamBlock> out;
  Index off = 0;
  out.push_back({"rho0", off, prep_.num_params()});
  off += prep_.num_params();
  out.push_back({"Mdefault", off, povm_.num_params()});
  off += povm_.num_params();
  for (const auto &[l, op] : ops_) {
    out.push_back({element_name(l), off, op->num_params()});
    off += op->num_params();
  }
  return out;
}

Vector GateSetModel::to_vector() const {
  Vector v(num_params());
  Index off = 0;
  if (prep_.kind == SpamKind::kFullTP) {
    v.segment(off, prep_.vec.size() - 1) = prep_.vec.tail(prep_.vec.size() - 1);
    off += prep_.vec.size() - 1;
  }
  if (povm_.kind == SpamKind::kFullTP) {
    for (std::size_t e = 0; e + 1 < povm_.effects.size(); ++e) {
      v.segment(off, povm_.effects[e].size()) = povm_.effects[e];
      off += povm_.effects[e].size();
    }
  }
  for (const auto &[l, op] : ops_) {
    v.segment(off, op->num_params()) = op->to_vector();
    off += op->num_params();
  }
  return v;
}

void GateSetModel::from_vector(const Vector &v) {
  if (v.size() != num_params())
    throw ModelError("parameter vector has " + std::to_string(v.size()) + " entries, model has " +
                     std::to_string(num_params()));
  Index off = 0;
  if (prep_.kind == SpamKind::kFullTP) {
    prep_.vec.tail(prep_.vec.size() - 1) = v.segment(off, prep_.vec.size() - 1);
    off += prep_.vec.size() - 1;
  }
  if (povm_.kind == SpamKind::kFullTP && !povm_.effects.empty()) {
    Vector last = identity_vec(num_qubits());
    for (std::size_t e = 0; e + 1 < povm_.effects.size(); ++e) {
      povm_.effects[e] = v.segment(off, povm_.effects[e].size());
      off += povm_.effects[e].size();
      last -= povm_.effects[e];
    }
    povm_.effects.back() = last;
  }
  for (auto &[l, op] : ops_) {
    op->from_vector(v.segment(off, op->num_params()));
    off += op->num_params();
  }
}

Matrix GateSetModel::layer_matrix(const Layer &layer) const {
  if (layer.labels.empty()) {
    auto it = ops_.find(idle_label());
    return it == ops_.end() ? Matrix(Matrix::Identity(dim(), dim())) : it->second->dense();
  }
  Matrix out;
  for (const auto &label : layer.labels) {
    const auto &o = op(label);
    Matrix m;
    if (o->dim() == dim()) {
      m = o->dense();
    } else {
      auto pos = embed_positions(label);
      m = embed_ptm(o->dense(), pos, num_qubits());
    }
    out = out.size() == 0 ? m : Matrix(m * out);
  }
  return out;
}

void GateSetModel::check_circuit(const Circuit &c) const {
  for (const auto &line : c.lines())
    if (std::find(lines_.begin(), lines_.end(), line) == lines_.end())
      throw ModelError("circuit line '" + line + "' is not a model line in " + c.str());
  for (const auto &layer : c.layers()) {
    if (layer.labels.empty()) continue;
    for (const auto &label : layer.labels)
      if (!ops_.count(label))
        throw ModelError("unknown gate label " + label.str() + " in " + c.str());
  }
}

Matrix GateSetModel::dense_op(const GateLabel &l) const {
  const auto &o = op(l);
  if (o->dim() == dim()) return o->dense();
  return embed_ptm(o->dense(), embed_positions(l), num_qubits());
}

bool GateSetModel::is_dense_gateset() const {
  for (const auto &[l, op] : ops_)
    if (op->dim() != dim()) return false;
  return true;
}

GateSetModel set_parameterization(const GateSetModel &m, ModelParam kind) {
  GateSetModel out = m;
  OpKind ok = kind == ModelParam::kFullTP ? OpKind::kFullTP
              : kind == ModelParam::kCPTP ? OpKind::kCPTP
                                          : OpKind::kStatic;
  for (const auto &[l, op] : m.ops()) out.set_op(l, convert_op(op, ok));
  SpamKind sk = kind == ModelParam::kStatic ? SpamKind::kStatic : SpamKind::kFullTP;
  if (sk == SpamKind::kFullTP) {
    double expect = 1.0 / std::sqrt(double(Index(1) << m.num_qubits()));
    if (std::abs(m.prep().vec[0] - expect) > 1e-9)
      throw ModelError("prep is not trace one; cannot parameterize as TP");
    out.prep().vec[0] = expect;
    Vector sum = Vector::Zero(m.dim());
    for (const auto &e : m.povm().effects) sum += e;
    if ((sum - identity_vec(m.num_qubits())).cwiseAbs().maxCoeff() > 1e-9)
      throw ModelError("effects do not sum to the identity; cannot parameterize as TP");
  }
  out.prep().kind = sk;
  out.povm().kind = sk;
  return out;
}

GateSetModel replace_op(const GateSetModel &m, const GateLabel &label, ParameterizedOp op) {
  if (!m.has_op(label)) throw ModelError("model has no operation " + element_name(label));
  if (op->dim() != m.op(label)->dim())
    throw ModelError("dimension mismatch replacing " + element_name(label));
  GateSetModel out = m;
  out.set_op(label, std::move(op));
  return out;
}

GateSetModel depolarize(const GateSetModel &m, double op_noise, double spam_noise) {
  if (!(op_noise >= 0.0 && op_noise <= 1.0) || !(spam_noise >= 0.0 && spam_noise <= 1.0))
    throw ModelError("depolarization rates must lie in [0,1]");
  GateSetModel out = m;
  if (op_noise > 0.0) {
    for (const auto &[l, op] : m.ops()) {
      Matrix dense = op->dense();
      dense.bottomRows(dense.rows() - 1) *= (1.0 - op_noise);
      switch (op->kind()) {
        case OpKind::kFullTP: out.set_op(l, make_full_tp(dense)); break;
        case OpKind::kStatic: out.set_op(l, make_static(dense)); break;
        case OpKind::kCPTP: out.set_op(l, make_cptp(dense)); break;
        default:
          out.set_op(l, ParameterizedOp(std::make_unique<DepolarizeWrapperOp>(op, op_noise)));
      }
    }
  }
  if (spam_noise > 0.0) {
    auto &rho = out.prep().vec;
    rho.tail(rho.size() - 1) *= (1.0 - spam_noise);
    for (auto &e : out.povm().effects) e.tail(e.size() - 1) *= (1.0 - spam_noise);
  }
  return out;
}

GateSetModel gauge_transform(const GateSetModel &m, const Matrix &S) {
  if (S.rows() != m.dim() || S.cols() != m.dim())
    throw GaugeError("gauge matrix has the wrong dimension");
  Vector first = Vector::Zero(m.dim());
  first[0] = 1.0;
  if ((S.row(0).transpose() - first).cwiseAbs().maxCoeff() > 1e-12)
    throw GaugeError("gauge matrix must have first row (1, 0, ..., 0)");
  Eigen::FullPivLU<Matrix> lu(S);
  if (!lu.isInvertible()) throw GaugeError("gauge matrix is singular");
  Matrix S_inv = lu.inverse();
  S_inv.row(0) = first.transpose();
  if (!m.is_dense_gateset())
    throw GaugeError("gauge transforms need every operation to span the whole register");
  GateSetModel out = m;
  for (const auto &[l, op] : m.ops()) {
    ParameterizedOp next = op;
    next->transform(S, S_inv);
    out.set_op(l, std::move(next));
  }
  if (m.prep().kind == SpamKind::kStatic || m.povm().kind == SpamKind::kStatic)
    throw GaugeError("static SPAM cannot be transformed");
  out.prep().vec = S_inv * m.prep().vec;
  for (std::size_t e = 0; e < m.povm().effects.size(); ++e)
    out.povm().effects[e] = S.transpose() * m.povm().effects[e];
  // keep the completeness constraint exact
  Vector last = identity_vec(m.num_qubits());
  for (std::size_t e = 0; e + 1 < out.povm().effects.size(); ++e) last -= out.povm().effects[e];
  out.povm().effects.back() = last;
  return out;
}

GateSetModel build_localnoise_model(
    int n_qubits, const std::vector<std::string> &gate_names,
    const std::map<std::string, std::vector<std::vector<int>>> &availability,
    const std::string &geometry) {
  if (n_qubits < 1 || n_qubits > 3)
    throw ModelError("local-noise models are limited to 1..3 qubits (dense representation), got " +
                     std::to_string(n_qubits));
  if (geometry != "line" && geometry != "full")
    throw ModelError("unknown geometry '" + geometry + "'");
  std::vector<LineLabel> lines;
  for (int q = 0; q < n_qubits; ++q) lines.push_back(std::to_string(q));
  GateSetModel m(lines);
  auto connected = [&](int a, int b) { return geometry == "full" || std::abs(a - b) == 1; };
  for (const auto &name : gate_names) {
    if (!is_standard_gate(name)) throw ModelError("unknown gate name '" + name + "'");
    int k = standard_gate_qubits(name);
    std::vector<std::vector<int>> where;
    auto it = availability.find(name);
    if (it != availability.end()) {
      where = it->second;
    } else if (k == 1) {
      for (int q = 0; q < n_qubits; ++q) where.push_back({q});
    } else {
      for (int a = 0; a < n_qubits; ++a)
        for (int b = 0; b < n_qubits; ++b)
          if (a != b && connected(a, b)) where.push_back({a, b});
    }
    Matrix ptm = standard_ptm(name);
    for (const auto &t : where) {
      if (int(t.size()) != k)
        throw ModelError(name + " needs " + std::to_string(k) + " targets");
      for (int q : t)
        if (q < 0 || q >= n_qubits) throw ModelError(name + " target out of range");
      if (k == 2 && (t[0] == t[1] || !connected(t[0], t[1])))
        throw ModelError(name + " is unavailable on (" + std::to_string(t[0]) + "," +
                         std::to_string(t[1]) + ")");
      GateLabel l{name, {}};
      for (int q : t) l.targets.push_back(lines[q]);
      m.set_op(l, make_full_tp(ptm));
    }
  }
  return m;
}

}  // namespace qcvv
