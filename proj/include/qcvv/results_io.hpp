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
#include <string>
#include <vector>

#include "qcvv/gst.hpp"

namespace qcvv {

// Whitespace-separated table with a "# col col ..." header line.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string &name) const;
  const std::string &at(std::size_t row, const std::string &col) const {
    return rows[row][column(col)];
  }
  double number(std::size_t row, const std::string &col) const;
};

void write_table(const Table &t, std::ostream &out);
Table read_table(std::istream &in, const std::string &source = "<table>");
void save_table(const Table &t, const std::string &path);
Table load_table(const std::string &path);

std::string fmt(double x);

// Results directory: edesign/, data/, target.model, estimates.txt and one
// folder per estimate under estimates/.
void save_results(const ModelEstimateResults &r, const std::string &dir);
ModelEstimateResults load_results(const std::string &dir);

}  // namespace qcvv
