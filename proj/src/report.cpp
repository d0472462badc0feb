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

#include "qcvv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "qcvv/forward_sim.hpp"
#include "qcvv/metrics.hpp"
#include "qcvv/model_io.hpp"

namespace qcvv {

namespace {

std::string esc(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x, int digits = 4) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string px(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

double chi2_quantile95(int dof) {
  boost::math::chi_squared_distribution<double> law(std::max(1, dof));
  return boost::math::quantile(law, 0.95);
}

std::string cell_color(const BoxCell &c) {
  double ratio = c.two_delta_logl / c.threshold;
  int r, g, b;
  if (c.cls == CellClass::kGray) {
    int s = 255 - int(std::lround(180.0 * std::clamp(ratio, 0.0, 1.0)));
    r = g = b = s;
  } else {
    double depth = std::clamp(std::log10(ratio) / 2.0, 0.0, 1.0);
    r = 255 - int(std::lround(95.0 * depth));
    g = b = 200 - int(std::lround(200.0 * depth));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::vector<BoxGrid> make_box_grids(const GstDesign &design, const GateSetModel &model,
                                    const DataSet &ds) {
  std::vector<Circuit> circuits;
  for (const auto &b : design.blocks)
    for (const auto &row : b.circuits)
      for (const auto &c : row) circuits.push_back(c);
  std::vector<Circuit> unique;
  {
    std::set<Circuit> seen;
    for (const auto &c : circuits)
      if (seen.insert(c).second) unique.push_back(c);
  }
  CountTable t = make_count_table(ds, unique, model.povm().outcomes);
  Vector contrib = per_circuit_two_delta_logl(bulk_probs(model, EvalTree(unique)), t);
  std::map<Circuit, double> value;
  for (std::size_t i = 0; i < unique.size(); ++i) value[unique[i]] = contrib[Index(i)];
  int dof = int(model.povm().outcomes.size()) - 1;
  double thr = chi2_quantile95(dof);
  std::vector<BoxGrid> out;
  for (const auto &b : design.blocks) {
    BoxGrid g{b.germ, b.max_length, b.power, {}};
    for (const auto &row : b.circuits) {
      std::vector<BoxCell> cells;
      for (const auto &c : row) {
        BoxCell cell{c, value.at(c), dof, thr, CellClass::kGray};
        if (cell.two_delta_logl > thr) cell.cls = CellClass::kRed;
        cells.push_back(cell);
      }
      g.cells.push_back(std::move(cells));
    }
    out.push_back(std::move(g));
  }
  return out;
}

const GateSetModel &summary_model(const Estimate &e) {
  auto it = e.models.find("stdgaugeopt");
  if (it != e.models.end()) return it->second;
  it = e.models.find("final");
  if (it != e.models.end()) return it->second;
  throw ModelError("estimate '" + e.name + "' has no final model");
}

std::vector<GateSummary> gate_summary(const GateSetModel &m, const GateSetModel &target) {
  std::vector<GateSummary> out;
  for (const auto &[label, op] : m.ops()) {
    if (!target.has_op(label)) continue;
    Matrix a = m.dense_op(label), b = target.dense_op(label);
    out.push_back({element_name(label), entanglement_infidelity(a, b),
                   jamiolkowski_trace_distance(a, b)});
  }
  return out;
}

namespace {

void nsigma_bars(std::ostream &out, const Estimate &e) {
  const double bar_w = 36, gap = 12, height = 120, base = 130;
  double max_ns = 5.0;
  for (const auto &f : e.fits)
    if (std::isfinite(f.nsigma)) max_ns = std::max(max_ns, f.nsigma);
  double scale = height / std::log10(1.0 + max_ns);
  double width = double(e.fits.size()) * (bar_w + gap) + gap;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\"170\">\n";
  out << "<line x1=\"0\" y1=\"" << px(base) << "\" x2=\"" << px(width) << "\" y2=\"" << px(base)
      << "\" stroke=\"#444\"/>\n";
  for (std::size_t i = 0; i < e.fits.size(); ++i) {
    const auto &f = e.fits[i];
    double ns = std::isfinite(f.nsigma) ? f.nsigma : 0.0;
    double h = std::max(2.0, scale * std::log10(1.0 + std::max(0.0, ns)));
    const char *color = ns <= 2.0 ? "#2e9e44" : ns <= 5.0 ? "#e3a21a" : "#c62828";
    double x = gap + double(i) * (bar_w + gap);
    out << "<rect x=\"" << px(x) << "\" y=\"" << px(base - h) << "\" width=\"" << px(bar_w)
        << "\" height=\"" << px(h) << "\" fill=\"" << color << "\"><title>L=" << f.max_length
        << " Nsigma=" << num(f.nsigma, 6) << "</title></rect>\n";
    out << "<text x=\"" << px(x + bar_w / 2) << "\" y=\"" << px(base + 14)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << f.max_length << "</text>\n";
    out << "<text x=\"" << px(x + bar_w / 2) << "\" y=\"" << px(base - h - 4)
        << "\" font-size=\"10\" text-anchor=\"middle\">" << num(f.nsigma, 3) << "</text>\n";
  }
  out << "<text x=\"" << px(width / 2) << "\" y=\"164\" font-size=\"11\" text-anchor=\"middle\">"
         "max length L</text>\n</svg>\n";
}

void box_grid_svg(std::ostream &out, const GstDesign &design, const std::vector<BoxGrid> &grids) {
  const double box = 7, pad = 8, label_w = 130, head_h = 20;
  std::size_t rows = design.meas_fiducials.size(), cols = design.prep_fiducials.size();
  double block_w = double(cols) * box + pad, block_h = double(rows) * box + pad;
  std::map<int, std::size_t> col_of;
  for (std::size_t i = 0; i < design.max_lengths.size(); ++i) col_of[design.max_lengths[i]] = i;
  std::size_t n_germs = design.germs.size();
  double width = label_w + double(design.max_lengths.size()) * block_w + pad;
  double height = head_h + double(n_germs) * block_h + pad;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\""
      << px(height) << "\">\n";
  for (std::size_t i = 0; i < design.max_lengths.size(); ++i)
    out << "<text x=\"" << px(label_w + double(i) * block_w + block_w / 2) << "\" y=\"14\" "
        << "font-size=\"11\" text-anchor=\"middle\">L=" << design.max_lengths[i] << "</text>\n";
  for (std::size_t gi = 0; gi < n_germs; ++gi)
    out << "<text x=\"4\" y=\"" << px(head_h + double(gi) * block_h + block_h / 2 + 4)
        << "\" font-size=\"10\">" << esc(design.germs[gi].str()) << "</text>\n";
  for (const auto &g : grids) {
    std::size_t gi = 0;
    while (gi < n_germs && !(design.germs[gi] == g.germ)) ++gi;
    double x0 = label_w + double(col_of[g.max_length]) * block_w;
    double y0 = head_h + double(gi) * block_h;
    for (std::size_t i = 0; i < g.cells.size(); ++i)
      for (std::size_t j = 0; j < g.cells[i].size(); ++j) {
        const auto &c = g.cells[i][j];
        out << "<rect x=\"" << px(x0 + double(j) * box) << "\" y=\"" << px(y0 + double(i) * box)
            << "\" width=\"" << px(box) << "\" height=\"" << px(box) << "\" fill=\""
            << cell_color(c) << "\" stroke=\"#ccc\" stroke-width=\"0.3\" class=\""
            << (c.cls == CellClass::kRed ? "red" : "gray") << "\"><title>" << esc(c.circuit.str())
            << " 2dlogL=" << num(c.two_delta_logl, 5) << " dof=" << c.dof << "</title></rect>\n";
      }
  }
  out << "</svg>\n";
}

void matrix_table(std::ostream &out, const Matrix &m) {
  out << "<table class=\"mx\">\n";
  for (Index i = 0; i < m.rows(); ++i) {
    out << "<tr>";
    for (Index j = 0; j < m.cols(); ++j) {
      double v = std::abs(m(i, j)) < 5e-5 ? 0.0 : m(i, j);
      out << "<td>" << num(v, 4) << "</td>";
    }
    out << "</tr>\n";
  }
  out << "</table>\n";
}

void line_plot(std::ostream &out, const std::vector<double> &xs, const std::vector<double> &ys,
               const std::vector<double> &curve_x, const std::vector<double> &curve_y,
               const std::string &xlabel, const std::string &ylabel) {
  const double w = 420, h = 220, l = 50, r = 10, t = 10, b = 35;
  double xmin = 0, xmax = 1;
  if (!xs.empty()) {
    xmin = *std::min_element(xs.begin(), xs.end());
    xmax = *std::max_element(xs.begin(), xs.end());
  }
  if (xmax <= xmin) xmax = xmin + 1;
  auto X = [&](double x) { return l + (x - xmin) / (xmax - xmin) * (w - l - r); };
  auto Y = [&](double y) { return t + (1.0 - std::clamp(y, 0.0, 1.0)) * (h - t - b); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(w) << "\" height=\"" << px(h)
      << "\">\n";
  out << "<rect x=\"" << px(l) << "\" y=\"" << px(t) << "\" width=\"" << px(w - l - r)
      << "\" height=\"" << px(h - t - b) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double v : {0.0, 0.5, 1.0})
    out << "<text x=\"" << px(l - 6) << "\" y=\"" << px(Y(v) + 4)
        << "\" font-size=\"10\" text-anchor=\"end\">" << num(v, 2) << "</text>\n";
  out << "<text x=\"" << px(l) << "\" y=\"" << px(h - 20) << "\" font-size=\"10\">" << num(xmin, 4)
      << "</text>\n<text x=\"" << px(w - r) << "\" y=\"" << px(h - 20)
      << "\" font-size=\"10\" text-anchor=\"end\">" << num(xmax, 4) << "</text>\n";
  out << "<text x=\"" << px((w + l) / 2) << "\" y=\"" << px(h - 4)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << esc(xlabel) << "</text>\n";
  out << "<text x=\"12\" y=\"" << px(h / 2) << "\" font-size=\"11\" transform=\"rotate(-90 12 "
      << px(h / 2) << ")\" text-anchor=\"middle\">" << esc(ylabel) << "</text>\n";
  if (!curve_x.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curve_x.size(); ++i)
      out << (i ? " " : "") << px(X(curve_x[i])) << "," << px(Y(curve_y[i]));
    out << "\"/>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << "<circle cx=\"" << px(X(xs[i])) << "\" cy=\"" << px(Y(ys[i]))
        << "\" r=\"2.5\" fill=\"#c62828\"/>\n";
  out << "</svg>\n";
}

void gst_section(std::ostream &out, const ModelEstimateResults &res, const ReportSpec &spec) {
  out << "<h2>Gate set tomography</h2>\n";
  out << "<p>" << res.dataset.size() << " circuits in the dataset; design type "
      << esc(res.design.type()) << ".</p>\n";
  if (res.estimates.empty()) {
    out << "<p class=\"notice\">No estimates were produced.</p>\n";
    return;
  }
  std::optional<GstDesign> design;
  try {
    if (res.design.type() == "gst") design = gst_design_from_experiment(res.design);
  } catch (const std::exception &e) {
    out << "<p class=\"notice\">Design could not be interpreted: " << esc(e.what()) << "</p>\n";
  }

  out << "<h3>Summary</h3>\n<table>\n<tr><th>estimate</th><th>gate</th>"
         "<th>entanglement infidelity</th><th>trace distance</th></tr>\n";
  for (const auto &[name, est] : res.estimates) {
    try {
      for (const auto &g : gate_summary(summary_model(est), res.target))
        out << "<tr><td>" << esc(name) << "</td><td>" << esc(g.gate) << "</td><td>"
            << format_double(g.infidelity) << "</td><td>" << format_double(g.trace_distance)
            << "</td></tr>\n";
    } catch (const std::exception &e) {
      out << "<tr><td>" << esc(name) << "</td><td colspan=\"3\">unavailable: " << esc(e.what())
          << "</td></tr>\n";
    }
  }
  out << "</table>\n";

  out << "<h3>Model violation per maximum length</h3>\n";
  for (const auto &[name, est] : res.estimates) {
    out << "<h4>" << esc(name) << "</h4>\n<table>\n<tr><th>L</th><th>circuits</th>"
           "<th>2&Delta;logL</th><th>k</th><th>N&sigma;</th><th>converged</th></tr>\n";
    for (const auto &f : est.fits)
      out << "<tr><td>" << f.max_length << "</td><td>" << f.n_circuits << "</td><td>"
          << num(f.two_delta_logl, 8) << "</td><td>" << num(f.k, 8) << "</td><td>"
          << num(f.nsigma, 6) << "</td><td>" << (f.converged ? "yes" : "no") << "</td></tr>\n";
    out << "</table>\n";
    if (!est.fits.empty()) nsigma_bars(out, est);
  }

  out << "<h3>Per-sequence detail</h3>\n";
  if (!design) {
    out << "<p class=\"notice\">Per-sequence boxes need a GST design.</p>\n";
  } else {
    out << "<p>Each block holds one germ power; rows are measurement fiducials, columns are "
           "preparation fiducials. Gray boxes fit within the 95% chi-square threshold; red "
           "boxes exceed it.</p>\n";
    for (const auto &[name, est] : res.estimates) {
      auto it = est.models.find("final");
      if (it == est.models.end()) continue;
      out << "<h4>" << esc(name) << "</h4>\n";
      try {
        box_grid_svg(out, *design, make_box_grids(*design, it->second, res.dataset));
      } catch (const std::exception &e) {
        out << "<p class=\"notice\">Boxes unavailable: " << esc(e.what()) << "</p>\n";
      }
    }
  }

  if (spec.model_matrices) {
    out << "<h3>Estimated gates</h3>\n";
    for (const auto &[name, est] : res.estimates) {
      if (name == "Target") continue;
      try {
        const auto &m = summary_model(est);
        for (const auto &[label, op] : m.ops()) {
          out << "<h4>" << esc(name) << ": " << esc(element_name(label)) << "</h4>\n";
          matrix_table(out, m.dense_op(label));
        }
      } catch (const std::exception &) {
      }
    }
  }
}

void rb_section(std::ostream &out, const RbResults &rb) {
  out << "<h2>Randomized benchmarking</h2>\n";
  out << "<table>\n<tr><th>qubits</th><th>A</th><th>B</th><th>p</th><th>r</th><th>fit</th></tr>\n";
  out << "<tr><td>" << rb.n_qubits << "</td><td>" << num(rb.fit.A, 6) << "</td><td>"
      << num(rb.fit.B, 6) << "</td><td>" << num(rb.fit.p, 8) << "</td><td>" << num(rb.r, 6)
      << "</td><td>" << esc(rb.message) << "</td></tr>\n</table>\n";
  std::vector<double> xs(rb.depths.begin(), rb.depths.end()), cx, cy;
  if (rb.fit_ok && !xs.empty()) {
    double hi = *std::max_element(xs.begin(), xs.end());
    for (int i = 0; i <= 100; ++i) {
      double m = hi * i / 100.0;
      cx.push_back(m);
      cy.push_back(rb.fit.A + rb.fit.B * std::pow(rb.fit.p, m));
    }
  }
  line_plot(out, xs, rb.mean_success, cx, cy, "depth m", "success probability");
}

void rpe_section(std::ostream &out, const RpeResults &r) {
  out << "<h2>Robust phase estimation</h2>\n<p>Estimated angle: " << format_double(r.theta)
      << (r.truncated ? " (truncated at an inconsistent generation)" : "") << "</p>\n";
  out << "<table>\n<tr><th>generation</th><th>L</th><th>P cos</th><th>P sin</th>"
         "<th>phase</th><th>angle</th><th>consistent</th></tr>\n";
  for (const auto &g : r.generations)
    out << "<tr><td>" << g.generation << "</td><td>" << g.length << "</td><td>" << num(g.p_cos, 6)
        << "</td><td>" << num(g.p_sin, 6) << "</td><td>" << num(g.phase, 8) << "</td><td>"
        << num(g.theta, 12) << "</td><td>" << (g.consistent ? "yes" : "no") << "</td></tr>\n";
  out << "</table>\n";
}

void drift_section(std::ostream &out, const StabilityReport &r) {
  out << "<h2>Drift detection</h2>\n<p>" << r.n_detected << " of " << r.circuits.size()
      << " circuits show significant drift (Bonferroni over " << r.n_tests
      << " tests at alpha " << num(r.alpha, 3) << ").</p>\n";
  out << "<table>\n<tr><th>circuit</th><th>detected</th><th>dominant frequency</th>"
         "<th>power</th></tr>\n";
  for (const auto &c : r.circuits)
    if (c.detected)
      out << "<tr><td>" << esc(c.circuit.str()) << "</td><td>yes</td><td>"
          << num(c.dominant_frequency, 6) << "</td><td>" << num(c.max_power, 6) << "</td></tr>\n";
  out << "</table>\n";
  int shown = 0;
  for (const auto &c : r.circuits) {
    if (!c.detected || shown >= 5) continue;
    ++shown;
    out << "<h4>" << esc(c.circuit.str()) << "</h4>\n";
    const auto &traj = c.outcomes[0].trajectory;
    std::vector<double> ts;
    for (std::size_t i = 0; i < traj.size(); ++i) ts.push_back(double(i));
    line_plot(out, {}, {}, ts, traj, "time index", "P(outcome 0)");
  }
}

void comparison_section(std::ostream &out, const ComparisonReport &r, std::size_t worst) {
  out << "<h2>Dataset comparison</h2>\n<p>" << r.n_significant << " of " << r.circuits.size()
      << " circuits differ significantly (Benjamini-Hochberg at alpha " << num(r.alpha, 3)
      << "); aggregate p-value " << num(r.global_p_value, 6) << ".</p>\n";
  out << "<table>\n<tr><th>rank</th><th>circuit</th><th>G</th><th>dof</th><th>p</th>"
         "<th>N&sigma;</th></tr>\n";
  auto w = get_worst_circuits(r, worst);
  for (std::size_t i = 0; i < w.size(); ++i)
    out << "<tr><td>" << i + 1 << "</td><td>" << esc(w[i].circuit.str()) << "</td><td>"
        << num(w[i].g_stat, 6) << "</td><td>" << w[i].dof << "</td><td>" << num(w[i].p_value, 6)
        << "</td><td>" << num(w[i].nsigma, 6) << "</td></tr>\n";
  out << "</table>\n";
}

}  // namespace

std::string render_report(const ReportInputs &in, const ReportSpec &spec) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
      << esc(spec.title) << "</title>\n<style>\n"
      << "body{font-family:sans-serif;margin:2em;color:#222}\n"
      << "table{border-collapse:collapse;margin:0.5em 0}\n"
      << "td,th{border:1px solid #bbb;padding:2px 6px;font-size:12px;text-align:right}\n"
      << "table.mx td{font-family:monospace}\n"
      << ".notice{color:#8a5a00}\n"
      << "</style>\n</head>\n<body>\n<h1>" << esc(spec.title) << "</h1>\n";
  bool any = in.gst || in.rb || in.rpe || in.drift || in.comparison;
  if (!any) out << "<p class=\"notice\">No results are available.</p>\n";
  auto guarded = [&](const char *what, auto fn) {
    std::ostringstream part;
    try {
      fn(part);
      out << part.str();
    } catch (const std::exception &e) {
      out << "<p class=\"notice\">" << what << " section omitted: " << esc(e.what()) << "</p>\n";
    }
  };
  if (in.gst) guarded("GST", [&](std::ostream &o) { gst_section(o, *in.gst, spec); });
  if (in.rb) guarded("RB", [&](std::ostream &o) { rb_section(o, *in.rb); });
  if (in.rpe) guarded("RPE", [&](std::ostream &o) { rpe_section(o, *in.rpe); });
  if (in.drift) guarded("Drift", [&](std::ostream &o) { drift_section(o, *in.drift); });
  if (in.comparison)
    guarded("Comparison", [&](std::ostream &o) { comparison_section(o, *in.comparison, spec.worst_circuits); });
  out << "</body>\n</html>\n";
  return out.str();
}

void write_report(const ReportInputs &in, const ReportSpec &spec, const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write report " + path);
  f << render_report(in, spec);
}

}  // namespace qcvv
