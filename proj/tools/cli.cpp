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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qcvv/data_io.hpp"
#include "qcvv/forward_sim.hpp"
#include "qcvv/gst.hpp"
#include "qcvv/model_io.hpp"
#include "qcvv/model_pack.hpp"
#include "qcvv/rb.hpp"
#include "qcvv/report.hpp"
#include "qcvv/results_io.hpp"
#include "qcvv/rpe.hpp"
#include "qcvv/stability.hpp"

namespace fs = std::filesystem;

namespace qcvv::cli {

namespace {

// Raised for failures of the analysis itself rather than of its inputs.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  // design
  std::string pack, model_file, out, design_out;
  int max_length = 64;
  int qubits = 1;
  std::vector<int> depths{0, 1, 2, 4, 8, 16, 32, 64};
  int k = 40;
  std::uint64_t seed = 1;
  // simulate
  std::string dir;
  double depolarize = 0.0, spam_depolarize = 0.0;
  long shots = 1000;
  int passes = 0;
  // fit
  std::string estimators = "TP,CPTP,Target";
  bool no_gauge_opt = false;
  double gauge_spam_weight = 0.1;
  int max_iter = 100;
  // analyses
  std::vector<std::string> files;
  std::size_t worst = 10;
  double alpha = 0.05;
  std::string outcome = "0";
  // report
  std::string gst_dir, rb_dir, rpe_dir, drift_file, title = "qcvv report";
  std::vector<std::string> compare_files;
  bool no_matrices = false;
};

void require_dir(const std::string &dir) {
  if (!fs::is_directory(dir)) throw DataError("no such directory: " + dir);
}

GateSetModel model_for(const Options &o, const ExperimentDesign &d) {
  if (!o.model_file.empty()) return load_model(o.model_file);
  std::string pack = o.pack;
  if (pack.empty()) pack = field(d.attributes(), "pack").value_or("");
  if (pack.empty() || pack == "custom")
    throw DataError("design has no model pack; pass --model or --pack");
  return target_model_pack(pack).target;
}

DataSet dataset_arg(const std::string &path) {
  if (fs::is_directory(path)) {
    auto pd = load_data_from_dir(path);
    if (pd.counts) return *pd.counts;
    if (pd.series) return pool(*pd.series);
    throw DataError(path + " holds no counts");
  }
  if (!fs::exists(path)) throw DataError("no such file: " + path);
  return load_dataset(path);
}

TimeSeriesDataSet timeseries_arg(const std::string &path) {
  if (fs::is_directory(path)) {
    auto pd = load_data_from_dir(path);
    if (pd.series) return *pd.series;
    throw DataError(path + " holds no time series");
  }
  if (!fs::exists(path)) throw DataError("no such file: " + path);
  return load_timeseries(path);
}

ProtocolData counts_dir(const std::string &dir) {
  require_dir(dir);
  auto pd = load_data_from_dir(dir);
  if (!pd.counts && pd.series) pd.counts = pool(*pd.series);
  if (!pd.counts) throw DataError(dir + " holds no counts");
  return pd;
}

// ---- design ----

int cmd_design_gst(const Options &o, std::ostream &out) {
  if (o.pack.empty()) throw DataError("--pack is required");
  ModelPack pack = target_model_pack(o.pack);
  GstDesign d;
  if (!o.model_file.empty())
    d = make_gst_design(load_model(o.model_file), pack.prep_fiducials, pack.meas_fiducials,
                        pack.germs, o.max_length, "custom");
  else
    d = make_gst_design(pack, o.max_length);
  auto e = to_experiment_design(d);
  write_empty_protocol_data(e, o.design_out);
  out << "gst design: " << e.size() << " circuits, max lengths";
  for (int L : d.max_lengths) out << ' ' << L;
  out << "\nwritten to " << o.design_out << "\n";
  return 0;
}

int cmd_design_rb(const Options &o, std::ostream &out) {
  if (o.qubits < 1 || o.qubits > 2) throw DataError("--qubits must be 1 or 2");
  if (o.k < 1) throw DataError("--k must be positive");
  auto d = make_clifford_rb_design(default_processor_spec(o.qubits), o.depths, o.k, o.seed);
  auto e = to_experiment_design(d);
  write_empty_protocol_data(e, o.design_out);
  out << "rb design: " << d.samples.size() << " sequences, " << e.size()
      << " distinct circuits\nwritten to " << o.design_out << "\n";
  return 0;
}

int cmd_design_rpe(const Options &o, std::ostream &out) {
  std::string pack = o.pack.empty() ? "smq1Q_Xpi2_rpe" : o.pack;
  auto d = make_rpe_design(target_model_pack(pack), o.max_length);
  auto e = to_experiment_design(d);
  write_empty_protocol_data(e, o.design_out);
  out << "rpe design: " << d.lengths.size() << " generations, " << e.size()
      << " circuits\nwritten to " << o.design_out << "\n";
  return 0;
}

// ---- simulate ----

int cmd_simulate(const Options &o, std::ostream &out) {
  require_dir(o.dir);
  std::string dest = o.out.empty() ? o.dir : o.out;
  auto design = load_design((fs::path(o.dir) / "edesign" / "design.txt").string());
  if (o.shots < 0) throw DataError("--shots must be nonnegative");
  GateSetModel m = design.type() == "rb" && o.model_file.empty()
                       ? rb_target_model(rb_spec_from_experiment(design))
                       : model_for(o, design);
  if (o.depolarize != 0.0 || o.spam_depolarize != 0.0)
    m = depolarize(m, o.depolarize, o.spam_depolarize);

  if (o.passes > 0) {
    if (design.type() == "rb") throw DataError("time series simulation of rb designs is not supported");
    Matrix p = bulk_probs(m, EvalTree(design.circuits()));
    TimeSeriesDataSet ts(m.povm().outcomes);
    std::mt19937_64 rng(o.seed);
    std::size_t n = design.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> w(p.cols());
      for (Index j = 0; j < p.cols(); ++j) w[std::size_t(j)] = std::max(0.0, p(Index(i), j));
      std::discrete_distribution<int> pick(w.begin(), w.end());
      auto times = raster_timestamps(i, n, std::size_t(o.passes));
      TimeSeriesDataSet::Stream s;
      for (double t : times)
        for (long k = 0; k < o.shots; ++k) s.emplace_back(t, pick(rng));
      ts.add(design.circuits()[i], std::move(s));
    }
    write_protocol_timeseries(design, ts, dest);
    out << "simulated " << o.passes << " passes of " << o.shots << " shots over " << n
        << " circuits\nwritten to " << dest << "\n";
    return 0;
  }

  DataSet ds = design.type() == "rb"
                   ? simulate_design(m, design, o.shots, o.seed)
                   : simulate_dataset(m, design.circuits(), o.shots, o.seed);
  write_protocol_data(design, ds, dest);
  out << "simulated " << ds.size() << " circuits\nwritten to " << dest << "\n";
  return 0;
}

// ---- fit / test-model ----

void print_gst(const ModelEstimateResults &r, std::ostream &out) {
  for (const auto &[name, est] : r.estimates) {
    out << "estimate " << name << "\n";
    out << "# L circuits two_delta_logl k nsigma converged\n";
    for (const auto &f : est.fits)
      out << f.max_length << ' ' << f.n_circuits << ' ' << fmt(f.two_delta_logl) << ' '
          << fmt(f.k) << ' ' << fmt(f.nsigma) << ' ' << (f.converged ? "yes" : "no") << '\n';
    out << "# gate entanglement_infidelity trace_distance\n";
    for (const auto &g : gate_summary(summary_model(est), r.target))
      out << g.gate << ' ' << fmt(g.infidelity) << ' ' << fmt(g.trace_distance) << '\n';
  }
}

std::pair<GstDesign, DataSet> gst_inputs(const std::string &dir) {
  auto pd = counts_dir(dir);
  return {gst_design_from_experiment(pd.design), *pd.counts};
}

int cmd_fit(const Options &o, std::ostream &out) {
  auto [design, ds] = gst_inputs(o.dir);
  auto pd_design = load_design((fs::path(o.dir) / "edesign" / "design.txt").string());
  GateSetModel initial = model_for(o, pd_design);
  GstOptions opts;
  opts.gauge_opt = !o.no_gauge_opt;
  opts.weights.spam = o.gauge_spam_weight;
  opts.max_iter = o.max_iter;
  auto names = parse_estimator_list(o.estimators);
  ModelEstimateResults r;
  try {
    r = run_long_sequence_gst(design, ds, initial, names, opts);
  } catch (const DataError &) {
    throw;
  } catch (const CircuitError &) {
    throw;
  } catch (const std::exception &e) {
    throw AnalysisError(e.what());
  }
  print_gst(r, out);
  if (!o.out.empty()) {
    save_results(r, o.out);
    out << "results written to " << o.out << "\n";
  }
  return 0;
}

int cmd_test_model(const Options &o, std::ostream &out) {
  if (o.model_file.empty()) throw DataError("--model is required");
  auto [design, ds] = gst_inputs(o.dir);
  GateSetModel m = load_model(o.model_file);
  ModelEstimateResults r;
  try {
    r = run_model_test(m, design, ds);
  } catch (const DataError &) {
    throw;
  } catch (const std::exception &e) {
    throw AnalysisError(e.what());
  }
  print_gst(r, out);
  if (!o.out.empty()) {
    save_results(r, o.out);
    out << "results written to " << o.out << "\n";
  }
  return 0;
}

// ---- rb / rpe / compare / drift ----

Table rb_table(const RbResults &r) {
  Table t;
  t.columns = {"depth", "samples", "mean_success", "std_success"};
  for (std::size_t i = 0; i < r.depths.size(); ++i)
    t.rows.push_back({std::to_string(r.depths[i]), std::to_string(r.samples[i]),
                      fmt(r.mean_success[i]), fmt(r.std_success[i])});
  return t;
}

RbResults rb_results(const std::string &dir) {
  auto pd = counts_dir(dir);
  return fit_rb_decay(*pd.counts, pd.design);
}

int cmd_rb(const Options &o, std::ostream &out) {
  RbResults r = rb_results(o.dir);
  write_table(rb_table(r), out);
  out << "A " << fmt(r.fit.A) << "\nB " << fmt(r.fit.B) << "\np " << fmt(r.fit.p) << "\nr "
      << fmt(r.r) << "\nfit " << (r.fit_ok ? "ok" : "failed") << "\n";
  if (!r.message.empty()) out << "message " << r.message << "\n";
  if (!o.out.empty()) save_table(rb_table(r), o.out);
  if (!r.fit_ok) throw AnalysisError("decay fit failed: " + r.message);
  return 0;
}

RpeResults rpe_results(const std::string &dir, const std::string &outcome) {
  auto pd = counts_dir(dir);
  return run_rpe(rpe_design_from_experiment(pd.design), *pd.counts, outcome);
}

int cmd_rpe(const Options &o, std::ostream &out) {
  out << format_rpe_results(rpe_results(o.dir, o.outcome));
  return 0;
}

int cmd_compare(const Options &o, std::ostream &out) {
  std::vector<DataSet> sets;
  for (const auto &f : o.files) sets.push_back(dataset_arg(f));
  out << format_comparison(compare_datasets(sets, o.alpha), o.worst);
  return 0;
}

int cmd_drift(const Options &o, std::ostream &out) {
  out << format_stability(run_stability_analysis(timeseries_arg(o.files.at(0)), o.alpha));
  return 0;
}

int cmd_report(const Options &o, std::ostream &out) {
  ReportInputs in;
  if (!o.gst_dir.empty()) {
    require_dir(o.gst_dir);
    in.gst = load_results(o.gst_dir);
  }
  if (!o.rb_dir.empty()) in.rb = rb_results(o.rb_dir);
  if (!o.rpe_dir.empty()) in.rpe = rpe_results(o.rpe_dir, o.outcome);
  if (!o.drift_file.empty())
    in.drift = run_stability_analysis(timeseries_arg(o.drift_file), o.alpha);
  if (!o.compare_files.empty()) {
    if (o.compare_files.size() < 2) throw DataError("--compare needs at least two datasets");
    std::vector<DataSet> sets;
    for (const auto &f : o.compare_files) sets.push_back(dataset_arg(f));
    in.comparison = compare_datasets(sets, o.alpha);
  }
  ReportSpec spec;
  spec.title = o.title;
  spec.model_matrices = !o.no_matrices;
  spec.worst_circuits = o.worst;
  write_report(in, spec, o.out);
  out << "report written to " << o.out << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"qcvv: characterization of quantum gate sets", "qcvv"};
  app.require_subcommand(1);

  auto *design = app.add_subcommand("design", "Write an experiment design and a blank dataset template");
  design->require_subcommand(1);
  auto *dgst = design->add_subcommand("gst", "Long-sequence GST design from a model pack");
  dgst->add_option("--pack", o.pack, "Model pack name")->required();
  dgst->add_option("--max-length", o.max_length, "Largest germ-power length (power of two)");
  dgst->add_option("--model", o.model_file, "Target model replacing the pack's gates");
  dgst->add_option("--out", o.design_out, "Output directory")->required();
  auto *drb = design->add_subcommand("rb", "Clifford randomized benchmarking design");
  drb->add_option("--qubits", o.qubits, "Number of qubits (1 or 2)");
  drb->add_option("--depths", o.depths, "Comma-separated Clifford depths")->delimiter(',');
  drb->add_option("--k", o.k, "Random sequences per depth");
  drb->add_option("--seed", o.seed, "Sampling seed");
  drb->add_option("--out", o.design_out, "Output directory")->required();
  auto *drpe = design->add_subcommand("rpe", "Robust phase estimation design");
  drpe->add_option("--pack", o.pack, "Model pack name (default smq1Q_Xpi2_rpe)");
  drpe->add_option("--max-length", o.max_length, "Largest repetition count (power of two)");
  drpe->add_option("--out", o.design_out, "Output directory")->required();

  auto *sim = app.add_subcommand("simulate", "Fill a design directory with simulated counts");
  sim->add_option("dir", o.dir, "Design directory")->required();
  sim->add_option("--model", o.model_file, "Model file used to generate data");
  sim->add_option("--pack", o.pack, "Model pack used when --model is absent");
  sim->add_option("--depolarize", o.depolarize, "Uniform depolarization of every gate");
  sim->add_option("--spam-depolarize", o.spam_depolarize, "Depolarization of prep and effects");
  sim->add_option("--shots", o.shots, "Shots per circuit (per sequence for rb, per pass with --passes)");
  sim->add_option("--seed", o.seed, "Sampling seed");
  sim->add_option("--passes", o.passes, "Write a time series with this many passes");
  sim->add_option("--out", o.out, "Output directory (default: the design directory)");

  auto *fit = app.add_subcommand("fit", "Run long-sequence GST");
  fit->add_option("dir", o.dir, "Protocol data directory")->required();
  fit->add_option("--estimators", o.estimators, "Comma-separated estimator names");
  fit->add_option("--model", o.model_file, "Initial model (default: the design's pack target)");
  fit->add_flag("--no-gauge-opt", o.no_gauge_opt, "Skip gauge optimization");
  fit->add_option("--gauge-spam-weight", o.gauge_spam_weight, "SPAM weight in gauge optimization");
  fit->add_option("--max-iter", o.max_iter, "Iteration cap per optimizer stage");
  fit->add_option("--out", o.out, "Results directory");

  auto *tm = app.add_subcommand("test-model", "Score a fixed model against GST data");
  tm->add_option("dir", o.dir, "Protocol data directory")->required();
  tm->add_option("--model", o.model_file, "Model under test")->required();
  tm->add_option("--out", o.out, "Results directory");

  auto *rb = app.add_subcommand("rb", "Fit an RB decay");
  rb->add_option("dir", o.dir, "Protocol data directory")->required();
  rb->add_option("--out", o.out, "Write the per-depth table here");

  auto *rpe = app.add_subcommand("rpe", "Estimate a rotation angle by robust phase estimation");
  rpe->add_option("dir", o.dir, "Protocol data directory")->required();
  rpe->add_option("--outcome", o.outcome, "Outcome label counted as success");

  auto *cmp = app.add_subcommand("compare", "Test datasets for consistency circuit by circuit");
  cmp->add_option("datasets", o.files, "Dataset files or protocol directories")->required()->expected(2, -1);
  cmp->add_option("--worst", o.worst, "Rows in the ranked table");
  cmp->add_option("--alpha", o.alpha, "False discovery rate");

  auto *drift = app.add_subcommand("drift", "Spectral drift detection on a time series");
  drift->add_option("timeseries", o.files, "Time-series file or protocol directory")->required()->expected(1);
  drift->add_option("--alpha", o.alpha, "Family-wise significance level");

  auto *rep = app.add_subcommand("report", "Write a self-contained HTML report");
  rep->add_option("--gst", o.gst_dir, "GST results directory");
  rep->add_option("--rb", o.rb_dir, "RB protocol data directory");
  rep->add_option("--rpe", o.rpe_dir, "RPE protocol data directory");
  rep->add_option("--drift", o.drift_file, "Time-series file or directory");
  rep->add_option("--compare", o.compare_files, "Datasets to compare")->expected(2, -1);
  rep->add_option("--worst", o.worst, "Rows in the comparison table");
  rep->add_option("--alpha", o.alpha, "Significance level for drift and comparison");
  rep->add_option("--title", o.title, "Report title");
  rep->add_flag("--no-matrices", o.no_matrices, "Omit estimated gate matrices");
  rep->add_option("--out", o.out, "Output HTML file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dgst->parsed()) return cmd_design_gst(o, out);
    if (drb->parsed()) return cmd_design_rb(o, out);
    if (drpe->parsed()) return cmd_design_rpe(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    if (tm->parsed()) return cmd_test_model(o, out);
    if (rb->parsed()) return cmd_rb(o, out);
    if (rpe->parsed()) return cmd_rpe(o, out);
    if (cmp->parsed()) return cmd_compare(o, out);
    if (drift->parsed()) return cmd_drift(o, out);
    if (rep->parsed()) return cmd_report(o, out);
  } catch (const AnalysisError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FiducialError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const GaugeError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CircuitError &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, char **argv, std::ostream &out, std::ostream &err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace qcvv::cli
