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

#include "qcvv/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "qcvv/model_io.hpp"

namespace qcvv {

double chi2_sf(double x, double dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0) return 1.0;
  if (!std::isfinite(x)) return 0.0;
  boost::math::chi_squared_distribution<double> law(dof);
  return boost::math::cdf(boost::math::complement(law, x));
}

ComparisonReport compare_datasets(const std::vector<DataSet> &datasets, double alpha) {
  if (datasets.size() < 2) throw DataError("comparison needs at least two datasets");
  if (!(alpha > 0 && alpha < 1)) throw DataError("alpha must lie in (0, 1)");
  const auto &outcomes = datasets[0].outcomes();
  for (const auto &ds : datasets)
    if (ds.outcomes() != outcomes) throw DataError("datasets have different outcome labels");
  ComparisonReport rep;
  rep.alpha = alpha;
  std::size_t K = outcomes.size();
  for (const auto &c : datasets[0].circuits()) {
    bool shared = true;
    for (std::size_t d = 1; d < datasets.size(); ++d) shared &= datasets[d].contains(c);
    if (!shared) continue;
    std::vector<double> col(K, 0.0);
    std::vector<double> tot;
    double grand = 0.0;
    for (const auto &ds : datasets) {
      const auto &n = ds.counts(c);
      double t = 0.0;
      for (std::size_t o = 0; o < K; ++o) {
        col[o] += double(n[o]);
        t += double(n[o]);
      }
      tot.push_back(t);
      grand += t;
    }
    CircuitComparison cc;
    cc.circuit = c;
    int live_rows = 0, live_cols = 0;
    for (double t : tot) live_rows += t > 0;
    for (double v : col) live_cols += v > 0;
    cc.dof = std::max(0, (live_rows - 1) * (live_cols - 1));
    double g = 0.0;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
      const auto &n = datasets[d].counts(c);
      for (std::size_t o = 0; o < K; ++o) {
        if (n[o] == 0) continue;
        double expected = tot[d] * col[o] / grand;
        g += 2.0 * double(n[o]) * std::log(double(n[o]) / expected);
      }
    }
    cc.g_stat = std::max(0.0, g);
    cc.p_value = chi2_sf(cc.g_stat, cc.dof);
    cc.nsigma = cc.dof > 0 ? (cc.g_stat - cc.dof) / std::sqrt(2.0 * cc.dof) : 0.0;
    rep.total_g += cc.g_stat;
    rep.total_dof += cc.dof;
    rep.circuits.push_back(std::move(cc));
  }
  if (rep.circuits.empty()) throw DataError("datasets share no circuits");
  rep.global_p_value = chi2_sf(rep.total_g, rep.total_dof);

  std::vector<std::size_t> order(rep.circuits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rep.circuits[a].p_value < rep.circuits[b].p_value;
  });
  double m = double(order.size());
  std::size_t cutoff = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (rep.circuits[order[k]].p_value <= double(k + 1) * alpha / m) cutoff = k + 1;
  for (std::size_t k = 0; k < cutoff; ++k) rep.circuits[order[k]].significant = true;
  rep.n_significant = cutoff;
  return rep;
}

std::vector<CircuitComparison> get_worst_circuits(const ComparisonReport &r, std::size_t n) {
  std::vector<CircuitComparison> out = r.circuits;
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.nsigma > b.nsigma;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

std::string format_comparison(const ComparisonReport &r, std::size_t worst) {
  std::ostringstream out;
  out << "circuits " << r.circuits.size() << "\n";
  out << "significant " << r.n_significant << " (Benjamini-Hochberg, alpha " << format_double(r.alpha)
      << ")\n";
  out << "global G " << format_double(r.total_g) << " dof " << r.total_dof << " p "
      << format_double(r.global_p_value) << "\n";
  out << "# rank circuit G dof p nsigma significant\n";
  auto w = get_worst_circuits(r, worst);
  for (std::size_t i = 0; i < w.size(); ++i)
    out << i + 1 << ' ' << w[i].circuit.str() << ' ' << format_double(w[i].g_stat) << ' '
        << w[i].dof << ' ' << format_double(w[i].p_value) << ' ' << format_double(w[i].nsigma)
        << ' ' << (w[i].significant ? "yes" : "no") << '\n';
  return out.str();
}

std::vector<double> dct2(const std::vector<double> &x) {
  std::size_t T = x.size();
  std::vector<double> c(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t)
      s += x[t] * std::cos(std::numbers::pi * double(k) * (2.0 * double(t) + 1.0) / (2.0 * double(T)));
    c[k] = s * std::sqrt((k == 0 ? 1.0 : 2.0) / double(T));
  }
  return c;
}

std::vector<double> idct2(const std::vector<double> &c) {
  std::size_t T = c.size();
  std::vector<double> x(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < T; ++k) {
      if (c[k] == 0.0) continue;
      s += c[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / double(T)) *
           std::cos(std::numbers::pi * double(k) * (2.0 * double(t) + 1.0) / (2.0 * double(T)));
    }
    x[t] = s;
  }
  return x;
}

StabilityReport run_stability_analysis(const TimeSeriesDataSet &ts, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DataError("alpha must lie in (0, 1)");
  if (ts.size() == 0) throw DataError("time series has no circuits");
  StabilityReport rep;
  rep.alpha = alpha;
  std::size_t K = ts.outcomes().size();
  if (K < 2) throw DataError("time series needs at least two outcomes");
  std::vector<int> tested;
  if (K == 2)
    tested = {0};
  else
    for (std::size_t o = 0; o < K; ++o) tested.push_back(int(o));

  for (std::size_t r = 0; r < ts.size(); ++r) {
    std::size_t T = ts.stream(r).size();
    if (T < 8)
      throw DataError("stream for circuit " + ts.circuits()[r].str() + " has " + std::to_string(T) +
                      " samples; at least 8 are needed");
    rep.n_tests += tested.size() * (T - 1);
  }
  double per_test = alpha / double(rep.n_tests);
  boost::math::chi_squared_distribution<double> law(1.0);
  rep.power_threshold = boost::math::quantile(boost::math::complement(law, per_test));

  for (std::size_t r = 0; r < ts.size(); ++r) {
    const auto &stream = ts.stream(r);
    std::size_t T = stream.size();
    CircuitDrift cd;
    cd.circuit = ts.circuits()[r];
    for (int o : tested) {
      DriftOutcome d;
      d.outcome = o;
      std::vector<double> x(T);
      for (std::size_t t = 0; t < T; ++t) x[t] = stream[t].second == o ? 1.0 : 0.0;
      double f = 0.0;
      for (double v : x) f += v;
      f /= double(T);
      d.pooled = f;
      d.trajectory.assign(T, f);
      if (f <= 0.0 || f >= 1.0) {
        d.skipped = true;
        cd.outcomes.push_back(std::move(d));
        continue;
      }
      double sd = std::sqrt(f * (1.0 - f));
      for (double &v : x) v = (v - f) / sd;
      auto c = dct2(x);
      std::vector<double> kept(T, 0.0);
      for (std::size_t k = 1; k < T; ++k) {
        double p = c[k] * c[k];
        d.power.push_back(p);
        if (p > rep.power_threshold) {
          d.significant.push_back(int(k));
          kept[k] = c[k];
          if (p > cd.max_power) {
            cd.max_power = p;
            cd.dominant_index = int(k);
          }
        }
      }
      if (!d.significant.empty()) {
        cd.detected = true;
        auto z = idct2(kept);
        for (std::size_t t = 0; t < T; ++t) d.trajectory[t] = std::clamp(f + sd * z[t], 0.0, 1.0);
      }
      cd.outcomes.push_back(std::move(d));
    }
    if (K == 2) {
      DriftOutcome other;
      other.outcome = 1;
      other.pooled = 1.0 - cd.outcomes[0].pooled;
      other.skipped = cd.outcomes[0].skipped;
      for (double p : cd.outcomes[0].trajectory) other.trajectory.push_back(1.0 - p);
      cd.outcomes.push_back(std::move(other));
    }
    cd.dominant_frequency = 0.5 * cd.dominant_index;
    rep.n_detected += cd.detected;
    rep.circuits.push_back(std::move(cd));
  }
  return rep;
}

std::string format_stability(const StabilityReport &r) {
  std::ostringstream out;
  out << "circuits " << r.circuits.size() << "\n";
  out << "detected " << r.n_detected << " (Bonferroni over " << r.n_tests << " tests, alpha "
      << format_double(r.alpha) << ", power threshold " << format_double(r.power_threshold) << ")\n";
  out << "# circuit detected dominant_index frequency max_power pooled\n";
  for (const auto &c : r.circuits)
    out << c.circuit.str() << ' ' << (c.detected ? "yes" : "no") << ' ' << c.dominant_index << ' '
        << format_double(c.dominant_frequency) << ' ' << format_double(c.max_power) << ' '
        << format_double(c.outcomes[0].pooled) << '\n';
  return out.str();
}

}  // namespace qcvv
