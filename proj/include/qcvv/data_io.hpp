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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcvv/dataset.hpp"
#include "qcvv/design.hpp"

namespace qcvv {

// Count datasets:
//   ## Columns = 0 counts, 1 counts
//   <canonical circuit>\t<count> <count>
// A circuit with no tab and no counts is a template row (missing counts).
void write_dataset(const DataSet &ds, std::ostream &out);
std::string dataset_to_string(const DataSet &ds);
/// Strict reader. Template rows are an error unless `missing` is given, in
/// which case they are collected there.
DataSet read_dataset(std::istream &in, const std::string &source = "<dataset>",
                     std::vector<Circuit> *missing = nullptr);
DataSet dataset_from_string(const std::string &text);
void save_dataset(const DataSet &ds, const std::string &path);
DataSet load_dataset(const std::string &path);

// Time series:
//   ## TimeSeries
//   ## Outcomes = 0, 1
//   <canonical circuit>\t<t>:<outcome>,<t>:<outcome>,...
void write_timeseries(const TimeSeriesDataSet &ts, std::ostream &out);
std::string timeseries_to_string(const TimeSeriesDataSet &ts);
TimeSeriesDataSet read_timeseries(std::istream &in, const std::string &source = "<timeseries>");
TimeSeriesDataSet timeseries_from_string(const std::string &text);
void save_timeseries(const TimeSeriesDataSet &ts, const std::string &path);
TimeSeriesDataSet load_timeseries(const std::string &path);

// Design metadata: "design type=<t> k=v ..." then one record per line,
// "circuit circuit=<c> k=v ..." for circuits.
void write_design(const ExperimentDesign &d, std::ostream &out);
ExperimentDesign read_design(std::istream &in, const std::string &source = "<design>");
void save_design(const ExperimentDesign &d, const std::string &path);
ExperimentDesign load_design(const std::string &path);

/// Outcome alphabet for a design: bitstrings over the widest circuit.
std::vector<std::string> design_outcomes(const ExperimentDesign &d);

/// dir/edesign/design.txt plus a dir/data/dataset.txt template listing every
/// circuit with blank counts.
void write_empty_protocol_data(const ExperimentDesign &d, const std::string &dir);
/// Same layout with counts filled in.
void write_protocol_data(const ExperimentDesign &d, const DataSet &ds, const std::string &dir);
void write_protocol_timeseries(const ExperimentDesign &d, const TimeSeriesDataSet &ts,
                               const std::string &dir);

struct ProtocolData {
  ExperimentDesign design;
  std::optional<DataSet> counts;
  std::optional<TimeSeriesDataSet> series;
};

/// Loads design and data and checks coverage: every design circuit must
/// have counts and the data may not contain circuits outside the design.
ProtocolData load_data_from_dir(const std::string &dir);

}  // namespace qcvv
