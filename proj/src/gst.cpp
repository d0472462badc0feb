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

#include "qcvv/gst.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "qcvv/forward_sim.hpp"

namespace qcvv {

Circuit gate_circuit(const GateLabel &g, const std::vector<LineLabel> &lines) {
  if (g == GateSetModel::idle_label()) return Circuit({Layer{}}, lines);
  return Circuit({Layer{{g}}}, lines);
}

Matrix circuit_ptm(const GateSetModel &m, const Circuit &c) {
  Matrix M = Matrix::Identity(m.dim(), m.dim());
  for (const auto &layer : c.layers()) M = m.layer_matrix(layer) * M;
  return M;
}

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

std::string join_ints(const std::vector<int> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join_lines(const std::vector<LineLabel> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

class Appender {
 public:
  explicit Appender(std::vector<Circuit> &out) : out_(out) {
    for (const auto &c : out_) seen_.insert(c);
  }
  void add(const Circuit &c) {
    if (seen_.insert(c).second) out_.push_back(c);
  }

 private:
  std::vector<Circuit> &out_;
  std::set<Circuit> seen_;
};

GstDesign build_design(const std::vector<LineLabel> &lines, const std::vector<GateLabel> &gates,
                       const std::vector<Circuit> &preps, const std::vector<Circuit> &meas,
                       const std::vector<Circuit> &germs, int max_max_length,
                       const std::string &pack) {
  if (!is_power_of_two(max_max_length))
    throw ModelError("maximum length must be a power of two >= 1, got " +
                     std::to_string(max_max_length));
  if (preps.empty() || meas.empty()) throw FiducialError("fiducial lists must be nonempty");
  GstDesign d;
  d.pack = pack;
  d.lines = lines;
  d.prep_fiducials = preps;
  d.meas_fiducials = meas;
  d.germs = germs;
  d.gates = gates;
  for (int L = 1; L <= max_max_length; L *= 2) d.max_lengths.push_back(L);

  Appender lgst(d.lgst_circuits);
  for (const auto &f : meas) lgst.add(f);
  for (const auto &f : preps) lgst.add(f);
  for (const auto &fi : meas)
    for (const auto &fj : preps) lgst.add(fj + fi);
  for (const auto &g : gates) {
    Circuit gc = gate_circuit(g, lines);
    for (const auto &fi : meas)
      for (const auto &fj : preps) lgst.add(fj + gc + fi);
  }

  std::vector<Circuit> current = d.lgst_circuits;
  for (int L : d.max_lengths) {
    Appender app(current);
    for (const auto &germ : germs) {
      if (germ.depth() == 0) throw ModelError("germs must be nonempty");
      int power = L / int(germ.depth());
      if (power == 0) continue;
      GermBlock b{germ, L, power, {}};
      Circuit body = repeat(germ, std::size_t(power));
      for (const auto &fi : meas) {
        std::vector<Circuit> row;
        for (const auto &fj : preps) {
          row.push_back(fj + body + fi);
          app.add(row.back());
        }
        b.circuits.push_back(std::move(row));
      }
      d.blocks.push_back(std::move(b));
    }
    d.circuit_lists.push_back(current);
  }
  return d;
}

std::vector<GateLabel> gate_labels(const GateSetModel &m) {
  std::vector<GateLabel> out;
  for (const auto &[label, op] : m.ops()) out.push_back(label);
  return out;
}

Matrix prep_matrix(const GateSetModel &m, const std::vector<Circuit> &preps) {
  Matrix P(m.dim(), Index(preps.size()));
  for (std::size_t j = 0; j < preps.size(); ++j)
    P.col(Index(j)) = circuit_ptm(m, preps[j]) * m.prep().vec;
  return P;
}

Matrix meas_matrix(const GateSetModel &m, const std::vector<Circuit> &meas) {
  Index K = Index(m.povm().effects.size());
  Matrix E(Index(meas.size()) * K, m.dim());
  for (std::size_t i = 0; i < meas.size(); ++i) {
    Matrix F = circuit_ptm(m, meas[i]);
    for (Index o = 0; o < K; ++o) E.row(Index(i) * K + o) = m.povm().effects[o].transpose() * F;
  }
  return E;
}

Vector singular_values(const Matrix &m) { return Eigen::BDCSVD<Matrix>(m).singularValues(); }

Index rank_of(const Vector &sv) {
  if (sv.size() == 0 || sv[0] <= 0) return 0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-7 * sv[0]) ++r;
  return r;
}

}  // namespace

CompletenessReport check_informational_completeness(const GateSetModel &m,
                                                    const std::vector<Circuit> &prep_fiducials,
                                                    const std::vector<Circuit> &meas_fiducials) {
  CompletenessReport r;
  r.required = m.dim();
  r.prep_singular_values = singular_values(prep_matrix(m, prep_fiducials));
  r.meas_singular_values = singular_values(meas_matrix(m, meas_fiducials));
  r.prep_rank = rank_of(r.prep_singular_values);
  r.meas_rank = rank_of(r.meas_singular_values);
  std::string msg;
  if (r.prep_rank < r.required)
    msg += "preparation fiducials span rank " + std::to_string(r.prep_rank) + " of " +
           std::to_string(r.required);
  if (r.meas_rank < r.required)
    msg += std::string(msg.empty() ? "" : "; ") + "measurement fiducials span rank " +
           std::to_string(r.meas_rank) + " of " + std::to_string(r.required);
  if (!msg.empty()) throw FiducialError("fiducials are not informationally complete: " + msg);
  return r;
}

GstDesign make_gst_design(const GateSetModel &target, const std::vector<Circuit> &prep_fiducials,
                          const std::vector<Circuit> &meas_fiducials,
                          const std::vector<Circuit> &germs, int max_max_length,
                          const std::string &pack_name) {
  check_informational_completeness(target, prep_fiducials, meas_fiducials);
  for (const auto &c : germs) target.check_circuit(c);
  return build_design(target.lines(), gate_labels(target), prep_fiducials, meas_fiducials, germs,
                      max_max_length, pack_name);
}

GstDesign make_gst_design(const ModelPack &pack, int max_max_length) {
  return make_gst_design(pack.target, pack.prep_fiducials, pack.meas_fiducials, pack.germs,
                         max_max_length, pack.name);
}

ExperimentDesign to_experiment_design(const GstDesign &d) {
  ExperimentDesign e("gst", {{"pack", d.pack},
                             {"lines", join_lines(d.lines)},
                             {"max_lengths", join_ints(d.max_lengths)}});
  for (const auto &g : d.gates) e.add_record({"gate", {{"label", element_name(g)}}});
  for (const auto &c : d.prep_fiducials) e.add_record({"prep_fiducial", {{"circuit", c.str()}}});
  for (const auto &c : d.meas_fiducials) e.add_record({"meas_fiducial", {{"circuit", c.str()}}});
  for (const auto &c : d.germs) e.add_record({"germ", {{"circuit", c.str()}}});

  std::map<Circuit, Fields> tags;
  for (std::size_t i = 0; i < d.meas_fiducials.size(); ++i)
    for (std::size_t j = 0; j < d.prep_fiducials.size(); ++j) {
      Circuit c = d.prep_fiducials[j] + d.meas_fiducials[i];
      tags.emplace(c, Fields{{"lgst", "1"}, {"prep", std::to_string(j)},
                             {"meas", std::to_string(i)}, {"gate", "none"}});
      for (const auto &g : d.gates)
        tags.emplace(d.prep_fiducials[j] + gate_circuit(g, d.lines) + d.meas_fiducials[i],
                     Fields{{"lgst", "1"}, {"prep", std::to_string(j)},
                            {"meas", std::to_string(i)}, {"gate", element_name(g)}});
    }
  for (const auto &b : d.blocks) {
    std::size_t gi = 0;
    while (!(d.germs[gi] == b.germ)) ++gi;
    for (std::size_t i = 0; i < b.circuits.size(); ++i)
      for (std::size_t j = 0; j < b.circuits[i].size(); ++j)
        tags.emplace(b.circuits[i][j],
                     Fields{{"prep", std::to_string(j)}, {"germ", std::to_string(gi)},
                            {"power", std::to_string(b.power)}, {"meas", std::to_string(i)},
                            {"L", std::to_string(b.max_length)}});
  }
  for (const auto &c : d.all_circuits()) {
    auto it = tags.find(c);
    e.add_circuit(c, it == tags.end() ? Fields{{"lgst", "1"}} : it->second);
  }
  return e;
}

GstDesign gst_design_from_experiment(const ExperimentDesign &e) {
  if (e.type() != "gst") throw DataError("design type is '" + e.type() + "', expected 'gst'");
  std::vector<GateLabel> gates;
  std::vector<Circuit> preps, meas, germs;
  for (const auto &r : e.records()) {
    if (r.kind == "gate")
      gates.push_back(parse_element_name(require_field(r.fields, "label")));
    else if (r.kind == "prep_fiducial")
      preps.push_back(parse_circuit(require_field(r.fields, "circuit")));
    else if (r.kind == "meas_fiducial")
      meas.push_back(parse_circuit(require_field(r.fields, "circuit")));
    else if (r.kind == "germ")
      germs.push_back(parse_circuit(require_field(r.fields, "circuit")));
    else
      throw DataError("unknown gst design record '" + r.kind + "'");
  }
  auto lengths = split_commas(require_field(e.attributes(), "max_lengths"));
  if (lengths.empty()) throw DataError("gst design has no max lengths");
  int max_len = std::stoi(lengths.back());
  auto d = build_design(split_commas(require_field(e.attributes(), "lines")), gates, preps, meas,
                        germs, max_len, require_field(e.attributes(), "pack"));
  if (d.all_circuits() != e.circuits())
    throw DataError("gst design circuit list does not match its fiducials and germs");
  return d;
}

DataSet exact_dataset(const GateSetModel &m, const std::vector<Circuit> &circuits) {
  Matrix p = bulk_probs(m, EvalTree(circuits));
  DataSet ds(m.povm().outcomes);
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    std::vector<long> n(std::size_t(p.cols()));
    for (Index o = 0; o < p.cols(); ++o)
      n[std::size_t(o)] = std::llround(std::clamp(p(Index(c), o), 0.0, 1.0) * double(kExactShots));
    ds.add(circuits[c], std::move(n));
  }
  return ds;
}

GateSetModel run_lgst(const GstDesign &design, const DataSet &ds, const GateSetModel &target) {
  if (!target.is_dense_gateset()) throw ModelError("LGST needs a gate set of full-register operations");
  check_informational_completeness(target, design.prep_fiducials, design.meas_fiducials);
  for (const auto &c : design.lgst_circuits)
    if (!ds.contains(c)) throw DataError("LGST circuit missing from dataset: " + c.str());

  const auto &outcomes = target.povm().outcomes;
  Index K = Index(outcomes.size());
  Index D = target.dim();
  Index nm = Index(design.meas_fiducials.size()), np = Index(design.prep_fiducials.size());
  CountTable t = make_count_table(ds, design.lgst_circuits, outcomes);
  std::map<Circuit, Index> row;
  for (std::size_t c = 0; c < t.circuits.size(); ++c) {
    if (t.totals[Index(c)] <= 0) throw DataError("LGST circuit has no counts: " + t.circuits[c].str());
    row.emplace(t.circuits[c], Index(c));
  }
  auto freq = [&](const Circuit &c, Index o) {
    Index r = row.at(c);
    return t.counts(r, o) / t.totals[r];
  };
  auto gram = [&](const Circuit *mid) {
    Matrix A(nm * K, np);
    for (Index i = 0; i < nm; ++i)
      for (Index j = 0; j < np; ++j) {
        Circuit c = mid ? design.prep_fiducials[std::size_t(j)] + *mid + design.meas_fiducials[std::size_t(i)]
                        : design.prep_fiducials[std::size_t(j)] + design.meas_fiducials[std::size_t(i)];
        for (Index o = 0; o < K; ++o) A(i * K + o, j) = freq(c, o);
      }
    return A;
  };

  Matrix A = gram(nullptr);
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector &sv = svd.singularValues();
  if (sv.size() < D || sv[D - 1] <= 1e-10 * sv[0])
    throw ModelError("LGST Gram matrix is singular; fiducials or data are insufficient");
  Matrix U = svd.matrixU().leftCols(D);
  Matrix V = svd.matrixV().leftCols(D);
  Vector sinv = sv.head(D).cwiseInverse();
  Matrix UtS = sinv.asDiagonal() * U.transpose();

  // Move from the data frame to the frame of the target's fiducial states.
  Matrix X = prep_matrix(target, design.prep_fiducials) * V;
  Eigen::PartialPivLU<Matrix> Xlu(X);
  Matrix Xinv = Xlu.inverse();

  std::vector<std::pair<GateLabel, Matrix>> gates;
  for (const auto &g : design.gates) {
    if (!target.has_op(g)) throw ModelError("target lacks gate " + element_name(g));
    Circuit gc = gate_circuit(g, design.lines);
    gates.emplace_back(g, X * (UtS * gram(&gc) * V) * Xinv);
  }
  Vector r(nm * K);
  for (Index i = 0; i < nm; ++i)
    for (Index o = 0; o < K; ++o) r[i * K + o] = freq(design.meas_fiducials[std::size_t(i)], o);
  Vector rho = X * (UtS * r);
  std::vector<Vector> effects;
  for (Index o = 0; o < K; ++o) {
    Vector c(np);
    for (Index j = 0; j < np; ++j) c[j] = freq(design.prep_fiducials[std::size_t(j)], o);
    effects.push_back(Xinv.transpose() * (V.transpose() * c));
  }

  // Gauge to a frame where the summed effects equal the identity covector,
  // then contract onto the trace-preserving set.
  Vector e = identity_vec(target.num_qubits());
  Vector u = Vector::Zero(D);
  for (const auto &E : effects) u += E;
  Matrix M = Matrix::Identity(D, D) + e * (u - e).transpose() / e.squaredNorm();
  Matrix Minv = M.inverse();
  GateSetModel est(target.lines());
  double inv_sqrt_d = 1.0 / std::sqrt(std::sqrt(double(D)));
  for (auto &[g, G] : gates) {
    Matrix T = M * G * Minv;
    T.row(0).setZero();
    T(0, 0) = 1.0;
    est.set_op(g, make_full_tp(T));
  }
  est.prep().vec = M * rho;
  est.prep().vec[0] = inv_sqrt_d;
  est.prep().kind = SpamKind::kFullTP;
  est.povm().outcomes = outcomes;
  est.povm().effects.clear();
  Vector sum = Vector::Zero(D);
  for (Index o = 0; o < K; ++o) {
    Vector E = Minv.transpose() * effects[std::size_t(o)];
    if (o + 1 == K) E = e - sum;
    sum += E;
    est.povm().effects.push_back(E);
  }
  est.povm().kind = SpamKind::kFullTP;
  return gauge_optimize(est, target);
}

FitOutcome fit_model(const GateSetModel &start, const DataSet &ds,
                     const std::vector<Circuit> &circuits, int max_iter) {
  FitOutcome out{start, {}};
  out.lm.x = start.to_vector();
  out.lm.converged = true;
  if (start.num_params() == 0) {
    out.lm.message = "no parameters";
    return out;
  }
  CountTable t = make_count_table(ds, circuits, start.povm().outcomes);
  EvalTree tree(circuits);
  GateSetModel work = start;
  Vector dr;
  auto make_residual = [&](auto fn) {
    return [&, fn](const Vector &x) {
      work.from_vector(x);
      Matrix p = bulk_probs(work, tree);
      Vector r;
      fn(p, t, r, dr);
      return r;
    };
  };
  auto make_jacobian = [&](auto fn) {
    return [&, fn](const Vector &x) {
      work.from_vector(x);
      Matrix p = bulk_probs(work, tree);
      Vector r, d;
      fn(p, t, r, d);
      return Matrix(d.asDiagonal() * bulk_dprobs(work, tree));
    };
  };
  LMOptions opts;
  opts.max_iter = max_iter;
  LMResult chi = levenberg_marquardt(make_residual(chi2_residuals), make_jacobian(chi2_residuals),
                                     start.to_vector(), opts);
  out.lm = levenberg_marquardt(make_residual(logl_residuals), make_jacobian(logl_residuals),
                               chi.x, opts);
  out.model = start;
  out.model.from_vector(out.lm.x);
  return out;
}

namespace {

FitRecord model_record(const GateSetModel &m, const DataSet &ds, const std::vector<Circuit> &circuits,
                       int L, Index n_nongauge) {
  FitRecord rec;
  rec.max_length = L;
  rec.n_circuits = circuits.size();
  try {
    auto w = wilks_stats(m, ds, circuits, n_nongauge);
    rec.two_delta_logl = w.two_delta_logl;
    rec.k = w.k;
    rec.nsigma = w.nsigma;
    rec.chi2 = w.chi2;
    rec.n_nongauge = w.n_nongauge;
  } catch (const ModelError &err) {
    rec.two_delta_logl = two_delta_logl(m, ds, circuits);
    rec.nsigma = std::numeric_limits<double>::quiet_NaN();
    rec.n_nongauge = n_nongauge;
    rec.message = err.what();
  }
  return rec;
}

ModelEstimateResults empty_results(const GstDesign &design, const DataSet &ds,
                                   const GateSetModel &target) {
  ModelEstimateResults res;
  res.design = to_experiment_design(design);
  res.max_lengths = design.max_lengths;
  res.circuit_lists = design.circuit_lists;
  res.dataset = ds;
  res.target = target;
  return res;
}

Estimate test_estimate(const std::string &name, const GateSetModel &model, const GstDesign &design,
                       const DataSet &ds, const GateSetModel &target) {
  Estimate est;
  est.name = name;
  est.models.emplace("target", target);
  est.models.emplace("final", model);
  for (std::size_t l = 0; l < design.max_lengths.size(); ++l) {
    est.per_length.push_back(model);
    est.fits.push_back(model_record(model, ds, design.circuit_lists[l], design.max_lengths[l], 0));
  }
  return est;
}

}  // namespace

ModelEstimateResults run_long_sequence_gst(const GstDesign &design, const DataSet &ds,
                                           const GateSetModel &initial,
                                           const std::vector<std::string> &estimators,
                                           const GstOptions &opts) {
  if (estimators.empty()) throw ModelError("no estimators requested");
  for (const auto &c : design.all_circuits())
    if (!ds.contains(c)) throw DataError("dataset lacks design circuit " + c.str());
  ModelEstimateResults res = empty_results(design, ds, initial);

  std::optional<GateSetModel> lgst;
  auto lgst_seed = [&]() -> const GateSetModel & {
    if (!lgst) lgst = initial.is_dense_gateset() ? run_lgst(design, ds, initial)
                                                 : set_parameterization(initial, ModelParam::kFullTP);
    return *lgst;
  };

  for (const auto &name : estimators) {
    if (res.estimates.count(name)) throw ModelError("duplicate estimator '" + name + "'");
    if (name == "Target") {
      res.estimates.emplace(name, test_estimate(name, set_parameterization(initial, ModelParam::kStatic),
                                                design, ds, initial));
      continue;
    }
    GateSetModel seed;
    if (name == "TP") {
      seed = set_parameterization(lgst_seed(), ModelParam::kFullTP);
    } else if (name == "CPTP") {
      seed = set_parameterization(lgst_seed(), ModelParam::kCPTP);
      if (opts.cptp_seed_depolarization > 0)
        seed = depolarize(seed, opts.cptp_seed_depolarization, 0.0);
    } else {
      seed = initial;
    }
    Estimate est;
    est.name = name;
    est.models.emplace("target", initial);
    est.models.emplace("seed", seed);
    GateSetModel current = seed;
    std::optional<Index> nongauge;
    for (std::size_t l = 0; l < design.max_lengths.size(); ++l) {
      const auto &circuits = design.circuit_lists[l];
      FitOutcome fit = fit_model(current, ds, circuits, opts.max_iter);
      current = fit.model;
      if (!nongauge) nongauge = nongauge_params(current);
      FitRecord rec = model_record(current, ds, circuits, design.max_lengths[l], *nongauge);
      rec.iterations = fit.lm.iterations;
      rec.converged = fit.lm.converged;
      if (rec.message.empty()) rec.message = fit.lm.message;
      for (double c : fit.lm.history) rec.objective_history.push_back(2.0 * c);
      est.fits.push_back(std::move(rec));
      est.per_length.push_back(current);
    }
    est.models.emplace("final", current);
    if (opts.gauge_opt)
      est.models.emplace("stdgaugeopt", gauge_optimize(current, initial, opts.weights));
    res.estimates.emplace(name, std::move(est));
  }
  return res;
}

ModelEstimateResults run_model_test(const GateSetModel &model, const GstDesign &design,
                                    const DataSet &ds, const std::string &name) {
  for (const auto &c : design.all_circuits())
    if (!ds.contains(c)) throw DataError("dataset lacks design circuit " + c.str());
  ModelEstimateResults res = empty_results(design, ds, model);
  res.estimates.emplace(name, test_estimate(name, model, design, ds, model));
  return res;
}

std::vector<std::string> parse_estimator_list(const std::string &s) {
  std::vector<std::string> out;
  for (auto part : split_commas(s)) {
    auto b = part.find_first_not_of(' ');
    auto e = part.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(part.substr(b, e - b + 1));
  }
  if (out.empty()) throw ModelError("empty estimator list");
  return out;
}

}  // namespace qcvv
