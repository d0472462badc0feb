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

#include "qcvv/results_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcvv/data_io.hpp"
#include "qcvv/model_io.hpp"

namespace qcvv {

namespace fs = std::filesystem;

std::size_t Table::column(const std::string &name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DataError("table has no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string &col) const {
  const auto &s = at(row, col);
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    return parse_double(s);
  } catch (const std::exception &) {
    throw DataError("column '" + col + "': bad number '" + s + "'");
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

void write_table(const Table &t, std::ostream &out) {
  out << "#";
  for (const auto &c : t.columns) out << ' ' << c;
  out << '\n';
  for (const auto &r : t.rows) {
    if (r.size() != t.columns.size()) throw DataError("table row has the wrong width");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].empty() || r[i].find_first_of(" \t\n") != std::string::npos)
        throw DataError("table cell '" + r[i] + "' is empty or contains whitespace");
      out << (i ? " " : "") << r[i];
    }
    out << '\n';
  }
}

Table read_table(std::istream &in, const std::string &source) {
  Table t;
  std::string line;
  int no = 0;
  auto fail = [&](const std::string &msg) {
    throw DataError(source + ":" + std::to_string(no) + ": " + msg);
  };
  auto split = [](const std::string &l) {
    std::vector<std::string> out;
    std::istringstream ss(l);
    for (std::string s; ss >> s;) out.push_back(s);
    return out;
  };
  if (!std::getline(in, line)) fail("empty table");
  ++no;
  auto head = split(line);
  if (head.empty() || head[0] != "#") fail("expected '# columns...' header");
  t.columns.assign(head.begin() + 1, head.end());
  while (std::getline(in, line)) {
    ++no;
    auto row = split(line);
    if (row.size() != t.columns.size())
      fail("expected " + std::to_string(t.columns.size()) + " fields, got " +
           std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void save_table(const Table &t, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_table(t, out);
}

Table load_table(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  return read_table(in, path);
}

namespace {

void check_name(const std::string &n) {
  if (n.empty()) throw DataError("empty estimate name");
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      throw DataError("estimate name '" + n + "' may only use letters, digits, '_' and '-'");
}

Table fits_table(const Estimate &e) {
  Table t;
  t.columns = {"L", "circuits", "two_delta_logl", "k", "nsigma", "chi2", "nongauge", "iterations",
               "converged"};
  for (const auto &f : e.fits)
    t.rows.push_back({std::to_string(f.max_length), std::to_string(f.n_circuits),
                      fmt(f.two_delta_logl), fmt(f.k), fmt(f.nsigma), fmt(f.chi2),
                      std::to_string(f.n_nongauge), std::to_string(f.iterations),
                      f.converged ? "yes" : "no"});
  return t;
}

}  // namespace

void save_results(const ModelEstimateResults &r, const std::string &dir) {
  write_protocol_data(r.design, r.dataset, dir);
  save_model(r.target, (fs::path(dir) / "target.model").string());
  std::ofstream names((fs::path(dir) / "estimates.txt").string(), std::ios::binary);
  if (!names) throw DataError("cannot write " + dir + "/estimates.txt");
  for (const auto &[name, est] : r.estimates) {
    check_name(name);
    names << name << '\n';
    fs::path sub = fs::path(dir) / "estimates" / name;
    fs::create_directories(sub);
    for (const auto &[key, m] : est.models) save_model(m, (sub / (key + ".model")).string());
    for (std::size_t l = 0; l < est.per_length.size(); ++l)
      save_model(est.per_length[l], (sub / ("L" + std::to_string(est.fits[l].max_length) + ".model")).string());
    save_table(fits_table(est), (sub / "fits.txt").string());
  }
}

ModelEstimateResults load_results(const std::string &dir) {
  ModelEstimateResults r;
  ProtocolData pd = load_data_from_dir(dir);
  if (!pd.counts) throw DataError(dir + ": results directory has no count data");
  r.design = pd.design;
  r.dataset = *pd.counts;
  if (r.design.type() == "gst") {
    GstDesign g = gst_design_from_experiment(r.design);
    r.max_lengths = g.max_lengths;
    r.circuit_lists = g.circuit_lists;
  }
  r.target = load_model((fs::path(dir) / "target.model").string());
  std::ifstream names((fs::path(dir) / "estimates.txt").string(), std::ios::binary);
  if (!names) throw DataError("cannot read " + dir + "/estimates.txt");
  for (std::string name; std::getline(names, name);) {
    check_name(name);
    fs::path sub = fs::path(dir) / "estimates" / name;
    Estimate est;
    est.name = name;
    Table fits = load_table((sub / "fits.txt").string());
    for (std::size_t i = 0; i < fits.rows.size(); ++i) {
      FitRecord f;
      f.max_length = int(fits.number(i, "L"));
      f.n_circuits = std::size_t(fits.number(i, "circuits"));
      f.two_delta_logl = fits.number(i, "two_delta_logl");
      f.k = fits.number(i, "k");
      f.nsigma = fits.number(i, "nsigma");
      f.chi2 = fits.number(i, "chi2");
      f.n_nongauge = Index(fits.number(i, "nongauge"));
      f.iterations = int(fits.number(i, "iterations"));
      f.converged = fits.at(i, "converged") == "yes";
      est.fits.push_back(f);
      auto path = sub / ("L" + std::to_string(f.max_length) + ".model");
      if (fs::exists(path)) est.per_length.push_back(load_model(path.string()));
    }
    for (const auto &entry : fs::directory_iterator(sub)) {
      auto stem = entry.path().stem().string();
      if (entry.path().extension() != ".model") continue;
      if (stem.size() > 1 && stem[0] == 'L' && std::isdigit(static_cast<unsigned char>(stem[1])))
        continue;
      est.models.emplace(stem, load_model(entry.path().string()));
    }
    r.estimates.emplace(name, std::move(est));
  }
  return r;
}

}  // namespace qcvv
