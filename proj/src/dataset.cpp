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

#include "qcvv/dataset.hpp"

#include <algorithm>

namespace qcvv {

DataSet::DataSet(std::vector<std::string> outcomes) : outcomes_(std::move(outcomes)) {}

void DataSet::add(const Circuit &c, std::vector<long> counts) {
  if (counts.size() != outcomes_.size())
    throw DataError("circuit " + c.str() + " has " + std::to_string(counts.size()) +
                    " counts, expected " + std::to_string(outcomes_.size()));
  for (long n : counts)
    if (n < 0) throw DataError("negative count for circuit " + c.str());
  if (!index_.emplace(c, circuits_.size()).second)
    throw DataError("duplicate circuit " + c.str());
  circuits_.push_back(c);
  counts_.push_back(std::move(counts));
}

const std::vector<long> &DataSet::counts(const Circuit &c) const {
  auto it = index_.find(c);
  if (it == index_.end()) throw DataError("no data for circuit " + c.str());
  return counts_[it->second];
}

long DataSet::total(const Circuit &c) const {
  long t = 0;
  for (long n : counts(c)) t += n;
  return t;
}

std::map<std::string, long> DataSet::count_map(const Circuit &c) const {
  std::map<std::string, long> out;
  const auto &n = counts(c);
  for (std::size_t i = 0; i < outcomes_.size(); ++i) out[outcomes_[i]] = n[i];
  return out;
}

TimeSeriesDataSet::TimeSeriesDataSet(std::vector<std::string> outcomes)
    : outcomes_(std::move(outcomes)) {}

const TimeSeriesDataSet::Stream &TimeSeriesDataSet::stream(const Circuit &c) const {
  auto it = index_.find(c);
  if (it == index_.end()) throw DataError("no data for circuit " + c.str());
  return streams_[it->second];
}

void TimeSeriesDataSet::add(const Circuit &c, Stream stream) {
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].second < 0 || stream[i].second >= int(outcomes_.size()))
      throw DataError("outcome index out of range for circuit " + c.str());
    if (i && stream[i].first < stream[i - 1].first)
      throw DataError("timestamps decrease for circuit " + c.str());
  }
  if (!index_.emplace(c, circuits_.size()).second)
    throw DataError("duplicate circuit " + c.str());
  circuits_.push_back(c);
  streams_.push_back(std::move(stream));
}

std::size_t TimeSeriesDataSet::passes() const {
  if (streams_.empty()) return 0;
  std::size_t n = streams_.front().size();
  for (const auto &s : streams_)
    if (s.size() != n) return 0;
  return n;
}

DataSet pool(const TimeSeriesDataSet &ts) {
  DataSet ds(ts.outcomes());
  for (std::size_t r = 0; r < ts.size(); ++r) {
    std::vector<long> counts(ts.outcomes().size(), 0);
    for (const auto &[t, o] : ts.stream(r)) ++counts[o];
    ds.add(ts.circuits()[r], std::move(counts));
  }
  return ds;
}

std::vector<double> raster_timestamps(std::size_t circuit, std::size_t n_circuits,
                                      std::size_t passes) {
  std::vector<double> t(passes);
  for (std::size_t k = 0; k < passes; ++k) t[k] = double(circuit + k * n_circuits);
  return t;
}

}  // namespace qcvv
