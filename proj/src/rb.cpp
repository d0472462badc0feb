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

#include "qcvv/rb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "qcvv/forward_sim.hpp"

namespace qcvv {

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

int to_int(const std::string &s, const std::string &what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw DataError("bad integer '" + s + "' in " + what);
  }
}

// (depth, count) pairs from a "uses" tag, or the single depth tag.
std::vector<std::pair<int, int>> uses_of(const Fields &tags) {
  std::vector<std::pair<int, int>> out;
  if (auto u = field(tags, "uses")) {
    for (const auto &part : split(*u, ',')) {
      auto colon = part.find(':');
      if (colon == std::string::npos) throw DataError("bad uses tag '" + *u + "'");
      out.emplace_back(to_int(part.substr(0, colon), "uses"), to_int(part.substr(colon + 1), "uses"));
    }
  } else {
    out.emplace_back(to_int(require_field(tags, "depth"), "depth"), 1);
  }
  return out;
}

}  // namespace

RbDesign make_clifford_rb_design(const ProcessorSpec &spec, const std::vector<int> &depths, int k,
                                 std::uint64_t seed) {
  if (k < 1) throw ModelError("need at least one sample per depth");
  if (depths.empty()) throw ModelError("need at least one depth");
  for (int m : depths)
    if (m < 0) throw ModelError("RB depths must be nonnegative");
  const CliffordGroup group(spec);
  RbDesign d;
  d.spec = spec;
  d.depths = depths;
  d.k = k;
  d.seed = seed;
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  auto lines = spec.lines();
  for (int m : depths)
    for (int s = 0; s < k; ++s) {
      RbSample smp;
      smp.depth = m;
      smp.sample = s;
      std::size_t net = 0;
      std::vector<Layer> layers;
      for (int i = 0; i <= m; ++i) {
        std::size_t c = pick(gen);
        smp.cliffords.push_back(c);
        net = group.compose(net, c);
        const auto &w = group.word(c);
        layers.insert(layers.end(), w.begin(), w.end());
      }
      std::size_t inv = group.inverse(net);
      smp.cliffords.push_back(inv);
      const auto &w = group.word(inv);
      layers.insert(layers.end(), w.begin(), w.end());
      smp.circuit = Circuit(std::move(layers), lines);
      smp.target = std::string(std::size_t(spec.n_qubits), '0');
      d.samples.push_back(std::move(smp));
    }
  return d;
}

ExperimentDesign to_experiment_design(const RbDesign &d) {
  std::string gates, pairs, depths;
  for (const auto &g : d.spec.gates) gates += (gates.empty() ? "" : ",") + g;
  for (auto [a, b] : d.spec.pairs)
    pairs += (pairs.empty() ? "" : ",") + std::to_string(a) + "-" + std::to_string(b);
  for (int m : d.depths) depths += (depths.empty() ? "" : ",") + std::to_string(m);
  ExperimentDesign e("rb", {{"n", std::to_string(d.spec.n_qubits)},
                            {"gates", gates},
                            {"pairs", pairs.empty() ? "none" : pairs},
                            {"depths", depths},
                            {"k", std::to_string(d.k)},
                            {"seed", std::to_string(d.seed)}});
  std::vector<Circuit> order;
  std::map<Circuit, std::map<int, int>> uses;
  std::map<Circuit, std::string> target;
  for (const auto &s : d.samples) {
    if (!uses.count(s.circuit)) order.push_back(s.circuit);
    ++uses[s.circuit][s.depth];
    target[s.circuit] = s.target;
  }
  for (const auto &c : order) {
    std::string u;
    for (auto [m, n] : uses[c]) u += (u.empty() ? "" : ",") + std::to_string(m) + ":" + std::to_string(n);
    e.add_circuit(c, {{"target", target[c]}, {"uses", u}});
  }
  return e;
}

ProcessorSpec rb_spec_from_experiment(const ExperimentDesign &d) {
  if (d.type() != "rb") throw DataError("design type is '" + d.type() + "', expected 'rb'");
  ProcessorSpec spec;
  spec.n_qubits = to_int(require_field(d.attributes(), "n"), "n");
  spec.gates = split(require_field(d.attributes(), "gates"), ',');
  std::string pairs = require_field(d.attributes(), "pairs");
  if (pairs != "none")
    for (const auto &p : split(pairs, ',')) {
      auto ab = split(p, '-');
      if (ab.size() != 2) throw DataError("bad qubit pair '" + p + "'");
      spec.pairs.emplace_back(to_int(ab[0], "pair"), to_int(ab[1], "pair"));
    }
  return spec;
}

std::vector<long> design_shots(const ExperimentDesign &d, long shots_per_sample) {
  std::vector<long> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    long mult = 0;
    for (auto [m, n] : uses_of(d.tags(i))) mult += n;
    if (!field(d.tags(i), "uses")) mult = 1;
    out.push_back(mult * shots_per_sample);
  }
  return out;
}

GateSetModel rb_target_model(const ProcessorSpec &spec) {
  std::map<std::string, std::vector<std::vector<int>>> avail;
  for (const auto &g : spec.gates)
    if (standard_gate_qubits(g) == 2) {
      if (spec.n_qubits < 2) continue;
      for (auto [a, b] : spec.pairs) avail[g].push_back({a, b});
    }
  std::vector<std::string> names;
  for (const auto &g : spec.gates)
    if (standard_gate_qubits(g) <= spec.n_qubits) names.push_back(g);
  return build_localnoise_model(spec.n_qubits, names, avail);
}

DataSet simulate_design(const GateSetModel &m, const ExperimentDesign &d, long shots_per_sample,
                        std::uint64_t seed) {
  Matrix p = bulk_probs(m, EvalTree(d.circuits()));
  return sample_counts(m.povm().outcomes, d.circuits(), p, design_shots(d, shots_per_sample), seed);
}

double rb_error_rate(double p, int n_qubits) {
  double d = std::pow(2.0, n_qubits);
  return (1.0 - p) * (d - 1.0) / d;
}

namespace {

struct LinearFit {
  double A, B, rss;
};

double rss_of(const std::vector<double> &x, const std::vector<double> &y, double A, double B) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(y[i] - A - B * x[i], 2);
  return s;
}

// min over A in [0,1], B in [-1,1] of sum (y - A - B x)^2
LinearFit bounded_linear(const std::vector<double> &x, const std::vector<double> &y) {
  double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit best{0, 0, std::numeric_limits<double>::infinity()};
  auto consider = [&](double A, double B) {
    A = std::clamp(A, 0.0, 1.0);
    B = std::clamp(B, -1.0, 1.0);
    double r = rss_of(x, y, A, B);
    if (r < best.rss) best = {A, B, r};
  };
  double det = n * sxx - sx * sx;
  if (std::abs(det) > 1e-14 * std::max(1.0, n * sxx)) {
    double B = (n * sxy - sx * sy) / det;
    double A = (sy - B * sx) / n;
    if (A >= 0 && A <= 1 && B >= -1 && B <= 1) return {A, B, rss_of(x, y, A, B)};
  }
  for (double A : {0.0, 1.0}) consider(A, sxx > 0 ? (sxy - A * sx) / sxx : 0.0);
  for (double B : {-1.0, 1.0}) consider((sy - B * sx) / n, B);
  return best;
}

LinearFit fit_at(double p, const std::vector<double> &m, const std::vector<double> &y) {
  std::vector<double> x(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) x[i] = std::pow(p, m[i]);
  return bounded_linear(x, y);
}

}  // namespace

DecayFit fit_decay(const std::vector<double> &m, const std::vector<double> &y) {
  if (m.size() != y.size() || m.empty()) throw ModelError("decay fit needs matching nonempty data");
  const int grid = 2000;
  double best_p = 1.0, best_rss = std::numeric_limits<double>::infinity();
  // Scan downward so that flat data keeps p = 1.
  for (int i = grid; i >= 0; --i) {
    double p = double(i) / grid;
    double r = fit_at(p, m, y).rss;
    if (r < best_rss) {
      best_rss = r;
      best_p = p;
    }
  }
  double lo = std::max(0.0, best_p - 1.0 / grid), hi = std::min(1.0, best_p + 1.0 / grid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = fit_at(a, m, y).rss, fb = fit_at(b, m, y).rss;
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = fit_at(a, m, y).rss;
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = fit_at(b, m, y).rss;
    }
  }
  double p = 0.5 * (lo + hi);
  if (!(fit_at(p, m, y).rss < best_rss)) p = best_p;
  LinearFit lf = fit_at(p, m, y);
  DecayFit out{lf.A, lf.B, p, lf.rss, std::numeric_limits<double>::quiet_NaN()};
  if (m.size() > 3) {
    Matrix J(Index(m.size()), 3);
    for (std::size_t i = 0; i < m.size(); ++i) {
      J(Index(i), 0) = 1.0;
      J(Index(i), 1) = std::pow(p, m[i]);
      J(Index(i), 2) = m[i] > 0 ? lf.B * m[i] * std::pow(p, m[i] - 1) : 0.0;
    }
    Matrix H = J.transpose() * J;
    Eigen::FullPivLU<Matrix> lu(H);
    if (lu.isInvertible()) {
      double s2 = lf.rss / double(m.size() - 3);
      out.p_stderr = std::sqrt(std::max(0.0, s2 * lu.inverse()(2, 2)));
    }
  }
  return out;
}

RbResults fit_rb_decay(const DataSet &ds, const ExperimentDesign &design) {
  if (design.type() != "rb") throw DataError("design type is '" + design.type() + "', expected 'rb'");
  RbResults res;
  res.n_qubits = to_int(require_field(design.attributes(), "n"), "n");
  std::map<int, std::vector<std::pair<double, int>>> by_depth;  // success, weight
  for (std::size_t i = 0; i < design.size(); ++i) {
    const auto &c = design.circuits()[i];
    if (!ds.contains(c)) throw DataError("dataset lacks RB circuit " + c.str());
    std::string target = require_field(design.tags(i), "target");
    auto it = std::find(ds.outcomes().begin(), ds.outcomes().end(), target);
    if (it == ds.outcomes().end()) throw DataError("dataset has no outcome '" + target + "'");
    long total = ds.total(c);
    if (total <= 0) throw DataError("no counts for RB circuit " + c.str());
    double f = double(ds.counts(c)[std::size_t(it - ds.outcomes().begin())]) / double(total);
    for (auto [m, n] : uses_of(design.tags(i))) by_depth[m].emplace_back(f, n);
  }
  for (const auto &[m, vals] : by_depth) {
    double w = 0, s = 0, s2 = 0;
    for (auto [f, n] : vals) {
      w += n;
      s += n * f;
      s2 += n * f * f;
    }
    double mean = s / w;
    res.depths.push_back(m);
    res.mean_success.push_back(mean);
    res.std_success.push_back(std::sqrt(std::max(0.0, s2 / w - mean * mean)));
    res.samples.push_back(int(w));
  }
  if (res.depths.size() < 3)
    throw DataError("RB fit needs at least 3 distinct depths, got " + std::to_string(res.depths.size()));
  std::vector<double> m(res.depths.begin(), res.depths.end());
  try {
    res.fit = fit_decay(m, res.mean_success);
    res.r = rb_error_rate(res.fit.p, res.n_qubits);
    res.fit_ok = std::isfinite(res.fit.p);
    res.message = res.fit_ok ? "ok" : "fit failed";
  } catch (const std::exception &e) {
    res.fit_ok = false;
    res.message = std::string("fit failed: ") + e.what();
  }
  return res;
}

VolumetricGrid collate_volumetric(const std::map<std::pair<int, int>, double> &results,
                                  double threshold) {
  VolumetricGrid g;
  g.threshold = threshold;
  std::set<int> ws, ds;
  for (const auto &[key, v] : results) {
    ws.insert(key.first);
    ds.insert(key.second);
  }
  g.widths.assign(ws.begin(), ws.end());
  g.depths.assign(ds.begin(), ds.end());
  for (int w : g.widths) {
    std::vector<std::optional<double>> row;
    std::optional<int> front;
    for (int d : g.depths) {
      auto it = results.find({w, d});
      if (it == results.end()) {
        row.push_back(std::nullopt);
        continue;
      }
      row.push_back(it->second);
      if (it->second > threshold) front = d;
    }
    g.cells.push_back(std::move(row));
    g.frontier.push_back(front);
  }
  return g;
}

}  // namespace qcvv
