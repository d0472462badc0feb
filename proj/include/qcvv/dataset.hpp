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

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcvv/circuit.hpp"

namespace qcvv {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circuit -> outcome counts over a fixed outcome alphabet. Rows keep
/// insertion order.
class DataSet {
 public:
  DataSet() = default;
  explicit DataSet(std::vector<std::string> outcomes);

  const std::vector<std::string> &outcomes() const { return outcomes_; }
  std::size_t size() const { return circuits_.size(); }
  bool empty() const { return circuits_.empty(); }
  const std::vector<Circuit> &circuits() const { return circuits_; }

  /// Throws DataError on duplicates, negative counts or a wrong column count.
  void add(const Circuit &c, std::vector<long> counts);

  bool contains(const Circuit &c) const { return index_.count(c) > 0; }
  const std::vector<long> &counts(const Circuit &c) const;
  const std::vector<long> &counts_at(std::size_t row) const { return counts_[row]; }
  long total(const Circuit &c) const;
  std::map<std::string, long> count_map(const Circuit &c) const;

  bool operator==(const DataSet &o) const {
    return outcomes_ == o.outcomes_ && circuits_ == o.circuits_ && counts_ == o.counts_;
  }

 private:
  std::vector<std::string> outcomes_;
  std::vector<Circuit> circuits_;
  std::vector<std::vector<long>> counts_;
  std::map<Circuit, std::size_t> index_;
};

/// Circuit -> ordered (timestamp, outcome index) stream.
class TimeSeriesDataSet {
 public:
  using Stream = std::vector<std::pair<double, int>>;

  TimeSeriesDataSet() = default;
  explicit TimeSeriesDataSet(std::vector<std::string> outcomes);

  const std::vector<std::string> &outcomes() const { return outcomes_; }
  const std::vector<Circuit> &circuits() const { return circuits_; }
  std::size_t size() const { return circuits_.size(); }
  const Stream &stream(std::size_t row) const { return streams_[row]; }
  const Stream &stream(const Circuit &c) const;

  /// Timestamps must be nondecreasing; outcome indices in range.
  void add(const Circuit &c, Stream stream);

  /// Number of passes when every circuit has the same stream length (0 otherwise).
  std::size_t passes() const;

  bool operator==(const TimeSeriesDataSet &o) const {
    return outcomes_ == o.outcomes_ && circuits_ == o.circuits_ && streams_ == o.streams_;
  }

 private:
  std::vector<std::string> outcomes_;
  std::vector<Circuit> circuits_;
  std::vector<Stream> streams_;
  std::map<Circuit, std::size_t> index_;
};

/// Occurrence counts per outcome; order discarded.
DataSet pool(const TimeSeriesDataSet &ts);

/// Raster timestamps: circuit i of n gets i, i + n, i + 2n, ...
std::vector<double> raster_timestamps(std::size_t circuit, std::size_t n_circuits,
                                      std::size_t passes);

}  // namespace qcvv
