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

#include "qcvv/forward_sim.hpp"

#include <algorithm>
#include <random>

#include "qcvv/dataset.hpp"

namespace qcvv {

OutcomeDistribution probs(const GateSetModel &m, const Circuit &c) {
  Vector p = probs_vector(m, c);
  OutcomeDistribution out;
  for (std::size_t o = 0; o < m.povm().outcomes.size(); ++o) out[m.povm().outcomes[o]] = p[Index(o)];
  return out;
}

Vector probs_vector(const GateSetModel &m, const Circuit &c) {
  m.check_circuit(c);
  Vector state = m.prep().vec;
  for (const auto &layer : c.layers()) {
    Matrix M = m.layer_matrix(layer);
    state = M * state;
  }
  const auto &effects = m.povm().effects;
  Vector p(Index(effects.size()));
  for (std::size_t o = 0; o < effects.size(); ++o) p[Index(o)] = effects[o].dot(state);
  return p;
}

// --- EvalTree -----------------------------------------------------------------

EvalTree::EvalTree(const std::vector<Circuit> &circuits) : circuits_(circuits) {
  std::map<Layer, int> layer_ids;
  std::map<std::pair<int, int>, int> children;
  for (const auto &c : circuits_) {
    std::vector<int> seq;
    seq.reserve(c.depth());
    int node = -1;
    for (const auto &layer : c.layers()) {
      auto [it, fresh] = layer_ids.emplace(layer, int(layers_.size()));
      if (fresh) layers_.push_back(layer);
      seq.push_back(it->second);
      auto [cit, cfresh] = children.emplace(std::make_pair(node, it->second), int(prefix_.size()));
      if (cfresh) prefix_.push_back({node, it->second});
      node = cit->second;
    }
    circuit_prefix_.push_back(node);
    circuit_layers_.push_back(std::move(seq));
  }
  for (const auto &seq : circuit_layers_)
    circuit_product_.push_back(seq.empty() ? -1 : product_for(seq));
  product_memo_.clear();
}

std::size_t EvalTree::total_layers() const {
  std::size_t n = 0;
  for (const auto &s : circuit_layers_) n += s.size();
  return n;
}

int EvalTree::combine(int first, int second) {
  ProductNode n;
  n.left = first;
  n.right = second;
  n.length = product_[first].length + product_[second].length;
  product_.push_back(n);
  return int(product_.size()) - 1;
}

namespace {

struct Run {
  std::size_t start = 0, period = 0, reps = 0;
};

// Longest stretch of the form u^k (k >= 2); ties go to the shorter period,
// then the earlier start.
Run best_run(const std::vector<int> &seq) {
  Run best;
  std::size_t n = seq.size();
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    std::size_t i = 0;
    while (i + p < n) {
      if (seq[i] != seq[i + p]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + p < n && seq[j] == seq[j + p]) ++j;
      std::size_t len = (j - i) + p;
      std::size_t k = len / p;
      if (k >= 2 && k * p > best.reps * best.period) best = {i, p, k};
      i = j;
    }
  }
  return best;
}

}  // namespace

int EvalTree::power_node(const std::vector<int> &unit, std::size_t k) {
  if (k == 1) return product_for(unit);
  std::vector<int> seq;
  seq.reserve(unit.size() * k);
  for (std::size_t i = 0; i < k; ++i) seq.insert(seq.end(), unit.begin(), unit.end());
  auto it = product_memo_.find(seq);
  if (it != product_memo_.end()) return it->second;
  int node;
  if (k % 2 == 0) {
    int half = power_node(unit, k / 2);
    node = combine(half, half);
  } else {
    int rest = power_node(unit, k - 1);
    node = combine(rest, product_for(unit));
  }
  product_memo_[seq] = node;
  return node;
}

int EvalTree::product_for(const std::vector<int> &seq) {
  auto it = product_memo_.find(seq);
  if (it != product_memo_.end()) return it->second;
  int node;
  if (seq.size() == 1) {
    ProductNode leaf;
    leaf.layer = seq[0];
    leaf.length = 1;
    product_.push_back(leaf);
    node = int(product_.size()) - 1;
  } else {
    Run r = best_run(seq);
    if (r.reps >= 2) {
      std::size_t end = r.start + r.period * r.reps;
      std::vector<int> unit(seq.begin() + long(r.start), seq.begin() + long(r.start + r.period));
      if (r.start == 0 && end == seq.size()) {
        node = power_node(unit, r.reps);
      } else if (end < seq.size()) {
        std::vector<int> head(seq.begin(), seq.begin() + long(end));
        std::vector<int> tail(seq.begin() + long(end), seq.end());
        int h = product_for(head);
        node = combine(h, product_for(tail));
      } else {
        std::vector<int> head(seq.begin(), seq.begin() + long(r.start));
        int h = product_for(head);
        node = combine(h, power_node(unit, r.reps));
      }
    } else {
      std::vector<int> head(seq.begin(), seq.end() - 1);
      int h = product_for(head);
      node = combine(h, product_for({seq.back()}));
    }
  }
  product_memo_[seq] = node;
  return node;
}

std::vector<int> EvalTree::expand(int node) const {
  const auto &n = product_[node];
  if (n.left < 0) return {n.layer};
  auto out = expand(n.left);
  auto right = expand(n.right);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

EvalTree build_eval_tree(const std::vector<Circuit> &circuits) { return EvalTree(circuits); }

// --- evaluation -----------------------------------------------------------------

namespace {

std::vector<Matrix> layer_matrices(const GateSetModel &m, const EvalTree &tree) {
  std::vector<Matrix> out;
  out.reserve(tree.layers().size());
  for (const auto &layer : tree.layers()) out.push_back(m.layer_matrix(layer));
  return out;
}

void check_all(const GateSetModel &m, const EvalTree &tree) {
  for (const auto &c : tree.circuits()) m.check_circuit(c);
}

}  // namespace

Matrix bulk_probs(const GateSetModel &m, const EvalTree &tree, EvalStrategy strategy) {
  check_all(m, tree);
  const auto &effects = m.povm().effects;
  Index K = Index(effects.size());
  Index D = m.dim();
  std::size_t nc = tree.circuits().size();
  if (strategy == EvalStrategy::kAuto) {
    double prefix_cost = double(tree.prefix_nodes().size()) * double(D * D);
    double product_cost = double(tree.num_product_nodes()) * double(D * D * D);
    strategy = (Index(nc) >= D * D || prefix_cost <= product_cost) ? EvalStrategy::kPrefix
                                                                   : EvalStrategy::kProduct;
  }
  auto mats = layer_matrices(m, tree);
  Matrix out(Index(nc), K);
  if (strategy == EvalStrategy::kPrefix) {
    // one column per prefix node, no per-node allocation
    const auto &nodes = tree.prefix_nodes();
    Matrix states(D, Index(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto &node = nodes[i];
      if (node.parent < 0)
        states.col(Index(i)).noalias() = mats[node.layer] * m.prep().vec;
      else
        states.col(Index(i)).noalias() = mats[node.layer] * states.col(node.parent);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      int node = tree.prefix_node_of(c);
      for (Index o = 0; o < K; ++o)
        out(Index(c), o) = node < 0 ? effects[o].dot(m.prep().vec) : effects[o].dot(states.col(node));
    }
  } else {
    std::vector<Matrix> prod(tree.num_product_nodes());
    for (std::size_t i = 0; i < prod.size(); ++i) {
      const auto &node = tree.product_nodes()[i];
      if (node.left < 0)
        prod[i] = mats[node.layer];
      else
        prod[i].noalias() = prod[node.right] * prod[node.left];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      int node = tree.product_node_of(c);
      Vector s = node < 0 ? m.prep().vec : Vector(prod[node] * m.prep().vec);
      for (Index o = 0; o < K; ++o) out(Index(c), o) = effects[o].dot(s);
    }
  }
  return out;
}

Matrix naive_bulk_probs(const GateSetModel &m, const std::vector<Circuit> &circuits) {
  const auto &effects = m.povm().effects;
  Index K = Index(effects.size());
  Matrix out(Index(circuits.size()), K);
  std::map<Layer, Matrix> cache;
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    Matrix M = Matrix::Identity(m.dim(), m.dim());
    for (const auto &layer : circuits[c].layers()) {
      auto it = cache.find(layer);
      if (it == cache.end()) it = cache.emplace(layer, m.layer_matrix(layer)).first;
      M = it->second * M;
    }
    Vector s = M * m.prep().vec;
    for (Index o = 0; o < K; ++o) out(Index(c), o) = effects[o].dot(s);
  }
  return out;
}

namespace {

struct OpInfo {
  const Operator *op = nullptr;
  Index offset = 0;
  Index n_params = 0;
  Matrix jac;
  std::vector<int> positions;  // empty when full-register
};

struct LayerParts {
  std::vector<int> ops;        // element indices, application order
  std::vector<Matrix> parts;   // full-register matrices of each element
  Matrix total;
};

}  // namespace

Matrix bulk_dprobs(const GateSetModel &m, const EvalTree &tree) {
  check_all(m, tree);
  Index D = m.dim();
  const auto &effects = m.povm().effects;
  Index K = Index(effects.size());
  std::size_t nc = tree.circuits().size();
  Index np = m.num_params();
  Matrix out = Matrix::Zero(Index(nc) * K, np);
  if (np == 0) return out;

  auto blocks = m.param_blocks();
  std::map<GateLabel, int> op_index;
  std::vector<OpInfo> infos;
  {
    std::size_t b = 2;
    for (const auto &[label, op] : m.ops()) {
      OpInfo info;
      info.op = op.get();
      info.offset = blocks[b].offset;
      info.n_params = blocks[b].count;
      ++b;
      if (info.n_params > 0) info.jac = op->dense_jacobian();
      if (op->dim() != D) info.positions = m.embed_positions(label);
      op_index[label] = int(infos.size());
      infos.push_back(std::move(info));
    }
  }

  std::vector<LayerParts> layers(tree.layers().size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer &layer = tree.layers()[l];
    auto &lp = layers[l];
    lp.total = m.layer_matrix(layer);
    if (layer.labels.empty()) {
      auto it = op_index.find(GateSetModel::idle_label());
      if (it != op_index.end()) {
        lp.ops.push_back(it->second);
        lp.parts.push_back(lp.total);
      }
      continue;
    }
    for (const auto &label : layer.labels) {
      int idx = op_index.at(label);
      lp.ops.push_back(idx);
      lp.parts.push_back(m.dense_op(label));
    }
  }

  Index prep_off = blocks[0].offset, prep_n = blocks[0].count;
  Index povm_off = blocks[1].offset, povm_n = blocks[1].count;
  std::vector<Matrix> grad(infos.size());
  std::vector<char> touched(infos.size(), 0);

  for (std::size_t c = 0; c < nc; ++c) {
    const auto &seq = tree.layer_ids(c);
    std::size_t T = seq.size();
    std::vector<Vector> states(T + 1);
    states[0] = m.prep().vec;
    for (std::size_t t = 0; t < T; ++t) states[t + 1] = layers[seq[t]].total * states[t];
    const Vector &final_state = states[T];

    for (Index o = 0; o < K; ++o) {
      Index row = Index(c) * K + o;
      std::vector<int> used;
      Vector b = effects[o];
      for (std::size_t t = T; t-- > 0;) {
        const auto &lp = layers[seq[t]];
        const Vector &s = states[t];
        if (lp.ops.size() == 1) {
          int idx = lp.ops[0];
          if (infos[idx].n_params > 0) {
            if (!touched[idx]) {
              grad[idx] = Matrix::Zero(D, D);
              touched[idx] = 1;
              used.push_back(idx);
            }
            grad[idx].noalias() += b * s.transpose();
          }
        } else if (lp.ops.size() > 1) {
          std::size_t n = lp.ops.size();
          std::vector<Vector> fwd(n);
          fwd[0] = s;
          for (std::size_t k = 1; k < n; ++k) fwd[k] = lp.parts[k - 1] * fwd[k - 1];
          Vector back = b;
          for (std::size_t k = n; k-- > 0;) {
            int idx = lp.ops[k];
            if (infos[idx].n_params > 0) {
              if (!touched[idx]) {
                grad[idx] = Matrix::Zero(D, D);
                touched[idx] = 1;
                used.push_back(idx);
              }
              grad[idx].noalias() += back * fwd[k].transpose();
            }
            back = lp.parts[k].transpose() * back;
          }
        }
        b = lp.total.transpose() * b;
      }
      if (m.prep().kind == SpamKind::kFullTP)
        out.block(row, prep_off, 1, prep_n) = b.tail(prep_n).transpose();
      if (m.povm().kind == SpamKind::kFullTP && povm_n > 0) {
        if (o + 1 < K) {
          out.block(row, povm_off + o * D, 1, D) = final_state.transpose();
        } else {
          for (Index e = 0; e + 1 < K; ++e)
            out.block(row, povm_off + e * D, 1, D) = -final_state.transpose();
        }
      }
      for (int idx : used) {
        const auto &info = infos[idx];
        Matrix g = info.positions.empty()
                       ? grad[idx]
                       : contract_embedded_gradient(grad[idx], info.positions, m.num_qubits());
        Eigen::Map<const Vector> flat(g.data(), g.size());
        out.block(row, info.offset, 1, info.n_params) = (flat.transpose() * info.jac);
        touched[idx] = 0;
      }
    }
  }
  return out;
}

DataSet sample_counts(const std::vector<std::string> &outcomes, const std::vector<Circuit> &circuits,
                      const Matrix &p, long shots, std::uint64_t seed) {
  return sample_counts(outcomes, circuits, p, std::vector<long>(circuits.size(), shots), seed);
}

DataSet sample_counts(const std::vector<std::string> &outcomes, const std::vector<Circuit> &circuits,
                      const Matrix &p, const std::vector<long> &shots, std::uint64_t seed) {
  if (shots.size() != circuits.size()) throw DataError("one shot count per circuit is required");
  for (long n : shots)
    if (n < 0) throw DataError("shot count must be nonnegative");
  std::mt19937_64 gen(seed);
  DataSet ds(outcomes);
  std::size_t K = outcomes.size();
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    std::vector<double> q(K);
    double total = 0.0;
    for (std::size_t o = 0; o < K; ++o) {
      q[o] = std::max(0.0, p(Index(c), Index(o)));
      total += q[o];
    }
    std::vector<long> counts(K, 0);
    long remaining = shots[c];
    double mass = total;
    for (std::size_t o = 0; o + 1 < K && remaining > 0; ++o) {
      double frac = mass > 0 ? std::clamp(q[o] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<long> draw(remaining, frac);
      counts[o] = draw(gen);
      remaining -= counts[o];
      mass -= q[o];
    }
    counts[K - 1] += remaining;
    ds.add(circuits[c], std::move(counts));
  }
  return ds;
}

DataSet simulate_dataset(const GateSetModel &m, const std::vector<Circuit> &circuits, long shots,
                         std::uint64_t seed) {
  EvalTree tree(circuits);
  return sample_counts(m.povm().outcomes, circuits, bulk_probs(m, tree), shots, seed);
}

}  // namespace qcvv
