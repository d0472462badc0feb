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

#include "qcvv/rpe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "qcvv/model_io.hpp"

namespace qcvv {

RpeDesign make_rpe_design(const ModelPack &pack, int max_max_length) {
  if (max_max_length < 1 || (max_max_length & (max_max_length - 1)) != 0)
    throw ModelError("RPE maximum length must be a power of two >= 1, got " +
                     std::to_string(max_max_length));
  if (pack.prep_fiducials.size() < 2 || pack.meas_fiducials.empty() || pack.germs.size() != 1)
    throw ModelError("model pack " + pack.name + " does not describe an RPE experiment");
  RpeDesign d;
  d.pack = pack.name;
  for (long L = 1; L <= max_max_length; L *= 2) {
    Circuit body = repeat(pack.germs[0], std::size_t(L));
    d.lengths.push_back(L);
    d.cos_circuits.push_back(pack.prep_fiducials[0] + body + pack.meas_fiducials[0]);
    d.sin_circuits.push_back(pack.prep_fiducials[1] + body + pack.meas_fiducials[0]);
  }
  return d;
}

ExperimentDesign to_experiment_design(const RpeDesign &d) {
  ExperimentDesign e("rpe", {{"pack", d.pack}, {"max_length", std::to_string(d.lengths.back())}});
  for (std::size_t g = 0; g < d.lengths.size(); ++g) {
    e.add_circuit(d.cos_circuits[g], {{"family", "cos"}, {"generation", std::to_string(g)},
                                      {"L", std::to_string(d.lengths[g])}});
    e.add_circuit(d.sin_circuits[g], {{"family", "sin"}, {"generation", std::to_string(g)},
                                      {"L", std::to_string(d.lengths[g])}});
  }
  return e;
}

RpeDesign rpe_design_from_experiment(const ExperimentDesign &e) {
  if (e.type() != "rpe") throw DataError("design type is '" + e.type() + "', expected 'rpe'");
  RpeDesign d;
  d.pack = require_field(e.attributes(), "pack");
  std::map<int, std::pair<std::optional<Circuit>, std::optional<Circuit>>> gens;
  std::map<int, long> lengths;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto &t = e.tags(i);
    int g = std::stoi(require_field(t, "generation"));
    lengths[g] = std::stol(require_field(t, "L"));
    auto fam = require_field(t, "family");
    if (fam == "cos")
      gens[g].first = e.circuits()[i];
    else if (fam == "sin")
      gens[g].second = e.circuits()[i];
    else
      throw DataError("unknown RPE family '" + fam + "'");
  }
  int expect = 0;
  for (const auto &[g, pair] : gens) {
    if (g != expect++) throw DataError("RPE generations are not consecutive");
    if (!pair.first || !pair.second) throw DataError("RPE generation " + std::to_string(g) + " lacks a family");
    if (lengths[g] != (1L << g)) throw DataError("RPE lengths must double");
    d.lengths.push_back(lengths[g]);
    d.cos_circuits.push_back(*pair.first);
    d.sin_circuits.push_back(*pair.second);
  }
  if (d.lengths.empty()) throw DataError("empty RPE design");
  return d;
}

namespace {

double wrap(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  x = std::fmod(x + std::numbers::pi, two_pi);
  if (x <= 0) x += two_pi;
  return x - std::numbers::pi;
}

double frequency(const DataSet &ds, const Circuit &c, const std::string &outcome) {
  if (!ds.contains(c)) throw DataError("dataset lacks RPE circuit " + c.str());
  auto it = std::find(ds.outcomes().begin(), ds.outcomes().end(), outcome);
  if (it == ds.outcomes().end()) throw DataError("dataset has no outcome '" + outcome + "'");
  long total = ds.total(c);
  if (total <= 0) throw DataError("no counts for RPE circuit " + c.str());
  return double(ds.counts(c)[std::size_t(it - ds.outcomes().begin())]) / double(total);
}

}  // namespace

RpeResults run_rpe(const RpeDesign &design, const DataSet &ds, const std::string &outcome) {
  RpeResults res;
  double prev = 0.0;
  for (std::size_t g = 0; g < design.lengths.size(); ++g) {
    RpeGeneration gen;
    gen.generation = int(g);
    gen.length = design.lengths[g];
    gen.p_cos = frequency(ds, design.cos_circuits[g], outcome);
    gen.p_sin = frequency(ds, design.sin_circuits[g], outcome);
    gen.phase = std::atan2(2.0 * gen.p_sin - 1.0, 2.0 * gen.p_cos - 1.0);
    double L = double(gen.length);
    if (g == 0) {
      gen.theta = gen.phase / L;
    } else {
      // nearest of the L candidates (phase + 2 pi j) / L to the previous estimate
      double delta = wrap(gen.phase - L * prev);
      gen.theta = prev + delta / L;
      gen.consistent = std::abs(delta) <= std::numbers::pi / 2.0;
    }
    res.generations.push_back(gen);
    if (!gen.consistent) {
      res.truncated = true;
      break;
    }
    prev = gen.theta;
    res.last_generation = int(g);
  }
  res.theta = wrap(prev);
  return res;
}

std::string format_rpe_results(const RpeResults &r) {
  std::ostringstream out;
  out << "# generation L p_cos p_sin phase theta consistent\n";
  for (const auto &g : r.generations)
    out << g.generation << ' ' << g.length << ' ' << format_double(g.p_cos) << ' '
        << format_double(g.p_sin) << ' ' << format_double(g.phase) << ' '
        << format_double(g.theta) << ' ' << (g.consistent ? "yes" : "no") << '\n';
  out << "theta " << format_double(r.theta) << "\n";
  out << "last_generation " << r.last_generation << "\n";
  out << "truncated " << (r.truncated ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace qcvv
