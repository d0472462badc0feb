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

#include "qcvv/data_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qcvv/basis.hpp"
#include "qcvv/model_io.hpp"

namespace qcvv {

namespace fs = std::filesystem;

namespace {

class LineReader {
 public:
  LineReader(std::istream &in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string &line) {
    if (!std::getline(in_, line)) return false;
    ++no_;
    if (!line.empty() && line.back() == '\r') fail("carriage return in line");
    return true;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw DataError(source_ + ":" + std::to_string(no_) + ": " + msg);
  }

  int line_no() const { return no_; }

 private:
  std::istream &in_;
  std::string source_;
  int no_ = 0;
};

Circuit canonical_circuit(LineReader &r, const std::string &text) {
  Circuit c;
  try {
    c = parse_circuit(text);
  } catch (const CircuitError &e) {
    r.fail(e.what());
  }
  if (c.str() != text) r.fail("circuit '" + text + "' is not in canonical form '" + c.str() + "'");
  return c;
}

long parse_count(LineReader &r, std::string_view s) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    r.fail("bad count '" + std::string(s) + "'");
  if (v < 0) r.fail("negative count");
  if (s.size() > 1 && s[0] == '0') r.fail("count '" + std::string(s) + "' has leading zeros");
  return v;
}

std::vector<std::string> split(const std::string &s, const std::string &sep) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (true) {
    std::size_t q = s.find(sep, p);
    out.push_back(s.substr(p, q == std::string::npos ? q : q - p));
    if (q == std::string::npos) break;
    p = q + sep.size();
  }
  return out;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace

// --- counts -----------------------------------------------------------------

void write_dataset(const DataSet &ds, std::ostream &out) {
  out << "## Columns = ";
  for (std::size_t i = 0; i < ds.outcomes().size(); ++i)
    out << (i ? ", " : "") << ds.outcomes()[i] << " counts";
  out << "\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    out << ds.circuits()[r].str() << '\t';
    const auto &n = ds.counts_at(r);
    for (std::size_t i = 0; i < n.size(); ++i) out << (i ? " " : "") << n[i];
    out << "\n";
  }
}

std::string dataset_to_string(const DataSet &ds) {
  std::ostringstream ss;
  write_dataset(ds, ss);
  return ss.str();
}

DataSet read_dataset(std::istream &in, const std::string &source, std::vector<Circuit> *missing) {
  LineReader r(in, source);
  std::string line;
  if (!r.next(line)) r.fail("empty file (missing '## Columns = ...' header)");
  const std::string prefix = "## Columns = ";
  if (line.rfind(prefix, 0) != 0) r.fail("expected '## Columns = ...' header");
  std::vector<std::string> outcomes;
  for (const auto &col : split(line.substr(prefix.size()), ", ")) {
    const std::string suffix = " counts";
    if (col.size() <= suffix.size() || col.compare(col.size() - suffix.size(), suffix.size(), suffix))
      r.fail("column '" + col + "' must read '<outcome> counts'");
    std::string o = col.substr(0, col.size() - suffix.size());
    for (char ch : o)
      if (ch != '0' && ch != '1') r.fail("outcome label '" + o + "' is not a bit string");
    if (!outcomes.empty() && o.size() != outcomes.front().size())
      r.fail("outcome labels must have equal width");
    outcomes.push_back(o);
  }
  DataSet ds(outcomes);
  std::vector<Circuit> blank;
  std::map<Circuit, int> seen;
  while (r.next(line)) {
    if (line.empty()) r.fail("blank line");
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      Circuit c = canonical_circuit(r, line);
      if (!seen.emplace(c, r.line_no()).second) r.fail("duplicate circuit " + c.str());
      if (!missing) r.fail("circuit " + c.str() + " has no counts");
      blank.push_back(c);
      continue;
    }
    Circuit c = canonical_circuit(r, line.substr(0, tab));
    auto [it, fresh] = seen.emplace(c, r.line_no());
    if (!fresh)
      r.fail("duplicate circuit " + c.str() + " (first on line " + std::to_string(it->second) + ")");
    auto fields = split(line.substr(tab + 1), " ");
    if (fields.size() != outcomes.size())
      r.fail("expected " + std::to_string(outcomes.size()) + " counts, got " +
             std::to_string(fields.size()));
    std::vector<long> counts;
    for (const auto &f : fields) counts.push_back(parse_count(r, f));
    ds.add(c, std::move(counts));
  }
  if (missing) *missing = std::move(blank);
  return ds;
}

DataSet dataset_from_string(const std::string &text) {
  std::istringstream ss(text);
  return read_dataset(ss);
}

void save_dataset(const DataSet &ds, const std::string &path) {
  auto out = open_out(path);
  write_dataset(ds, out);
}

DataSet load_dataset(const std::string &path) {
  auto in = open_in(path);
  return read_dataset(in, path);
}

// --- time series ---------------------------------------------------------------

void write_timeseries(const TimeSeriesDataSet &ts, std::ostream &out) {
  out << "## TimeSeries\n## Outcomes = ";
  for (std::size_t i = 0; i < ts.outcomes().size(); ++i) out << (i ? ", " : "") << ts.outcomes()[i];
  out << "\n";
  for (std::size_t r = 0; r < ts.size(); ++r) {
    out << ts.circuits()[r].str() << '\t';
    const auto &s = ts.stream(r);
    for (std::size_t i = 0; i < s.size(); ++i)
      out << (i ? "," : "") << format_double(s[i].first) << ':' << ts.outcomes()[s[i].second];
    out << "\n";
  }
}

std::string timeseries_to_string(const TimeSeriesDataSet &ts) {
  std::ostringstream ss;
  write_timeseries(ts, ss);
  return ss.str();
}

TimeSeriesDataSet read_timeseries(std::istream &in, const std::string &source) {
  LineReader r(in, source);
  std::string line;
  if (!r.next(line) || line != "## TimeSeries") r.fail("expected '## TimeSeries' header");
  const std::string prefix = "## Outcomes = ";
  if (!r.next(line) || line.rfind(prefix, 0) != 0) r.fail("expected '## Outcomes = ...' line");
  auto outcomes = split(line.substr(prefix.size()), ", ");
  std::map<std::string, int> outcome_index;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i].empty() || !outcome_index.emplace(outcomes[i], int(i)).second)
      r.fail("bad outcome list");
  TimeSeriesDataSet ts(outcomes);
  std::set<Circuit> seen;
  while (r.next(line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) r.fail("expected '<circuit>\\t<stream>'");
    Circuit c = canonical_circuit(r, line.substr(0, tab));
    if (!seen.insert(c).second) r.fail("duplicate circuit " + c.str());
    TimeSeriesDataSet::Stream stream;
    std::string body = line.substr(tab + 1);
    if (!body.empty()) {
      for (const auto &entry : split(body, ",")) {
        auto colon = entry.find(':');
        if (colon == std::string::npos) r.fail("entry '" + entry + "' must read <time>:<outcome>");
        double t = 0;
        try {
          t = parse_double(entry.substr(0, colon));
        } catch (const std::invalid_argument &e) {
          r.fail(e.what());
        }
        std::string o = entry.substr(colon + 1);
        if (o == "?") r.fail("circuit " + c.str() + " has missing outcomes");
        auto it = outcome_index.find(o);
        if (it == outcome_index.end()) r.fail("unknown outcome '" + o + "'");
        if (!stream.empty() && t < stream.back().first) r.fail("timestamps decrease");
        stream.emplace_back(t, it->second);
      }
    }
    ts.add(c, std::move(stream));
  }
  return ts;
}

TimeSeriesDataSet timeseries_from_string(const std::string &text) {
  std::istringstream ss(text);
  return read_timeseries(ss);
}

void save_timeseries(const TimeSeriesDataSet &ts, const std::string &path) {
  auto out = open_out(path);
  write_timeseries(ts, out);
}

TimeSeriesDataSet load_timeseries(const std::string &path) {
  auto in = open_in(path);
  return read_timeseries(in, path);
}

// --- design --------------------------------------------------------------------

namespace {

void write_fields(std::ostream &out, const Fields &f) {
  for (const auto &[k, v] : f) out << ' ' << k << '=' << v;
}

Fields parse_fields(LineReader &r, const std::vector<std::string> &tokens, std::size_t from) {
  Fields f;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    auto eq = tokens[i].find('=');
    if (eq == std::string::npos || eq == 0) r.fail("expected key=value, got '" + tokens[i] + "'");
    f.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
  }
  return f;
}

}  // namespace

void write_design(const ExperimentDesign &d, std::ostream &out) {
  out << "design type=" << d.type();
  write_fields(out, d.attributes());
  out << "\n";
  for (const auto &rec : d.records()) {
    out << rec.kind;
    write_fields(out, rec.fields);
    out << "\n";
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << "circuit circuit=" << d.circuits()[i].str();
    write_fields(out, d.tags(i));
    out << "\n";
  }
}

ExperimentDesign read_design(std::istream &in, const std::string &source) {
  LineReader r(in, source);
  std::string line;
  auto tokens_of = [](const std::string &l) {
    std::vector<std::string> t;
    std::istringstream ss(l);
    for (std::string s; ss >> s;) t.push_back(s);
    return t;
  };
  if (!r.next(line)) r.fail("empty design file");
  auto head = tokens_of(line);
  if (head.size() < 2 || head[0] != "design" || head[1].rfind("type=", 0) != 0)
    r.fail("expected 'design type=...'");
  ExperimentDesign d(head[1].substr(5), parse_fields(r, head, 2));
  while (r.next(line)) {
    auto tok = tokens_of(line);
    if (tok.empty()) r.fail("blank line");
    Fields f = parse_fields(r, tok, 1);
    if (tok[0] == "circuit") {
      if (f.empty() || f[0].first != "circuit") r.fail("circuit record must start with circuit=");
      Circuit c = canonical_circuit(r, f[0].second);
      f.erase(f.begin());
      if (d.contains(c)) r.fail("duplicate circuit " + c.str());
      d.add_circuit(c, std::move(f));
    } else {
      d.add_record({tok[0], std::move(f)});
    }
  }
  return d;
}

void save_design(const ExperimentDesign &d, const std::string &path) {
  auto out = open_out(path);
  write_design(d, out);
}

ExperimentDesign load_design(const std::string &path) {
  auto in = open_in(path);
  return read_design(in, path);
}

std::vector<std::string> design_outcomes(const ExperimentDesign &d) {
  std::size_t width = 1;
  for (const auto &c : d.circuits()) width = std::max(width, c.lines().size());
  return bitstrings(int(width));
}

// --- directories ------------------------------------------------------------------

namespace {

void prepare_dir(const std::string &dir, const ExperimentDesign &d) {
  fs::create_directories(fs::path(dir) / "edesign");
  fs::create_directories(fs::path(dir) / "data");
  save_design(d, (fs::path(dir) / "edesign" / "design.txt").string());
}

}  // namespace

void write_empty_protocol_data(const ExperimentDesign &d, const std::string &dir) {
  prepare_dir(dir, d);
  auto out = open_out((fs::path(dir) / "data" / "dataset.txt").string());
  auto outcomes = design_outcomes(d);
  out << "## Columns = ";
  for (std::size_t i = 0; i < outcomes.size(); ++i) out << (i ? ", " : "") << outcomes[i] << " counts";
  out << "\n";
  for (const auto &c : d.circuits()) out << c.str() << "\n";
}

void write_protocol_data(const ExperimentDesign &d, const DataSet &ds, const std::string &dir) {
  prepare_dir(dir, d);
  save_dataset(ds, (fs::path(dir) / "data" / "dataset.txt").string());
}

void write_protocol_timeseries(const ExperimentDesign &d, const TimeSeriesDataSet &ts,
                               const std::string &dir) {
  prepare_dir(dir, d);
  save_timeseries(ts, (fs::path(dir) / "data" / "dataset.txt").string());
}

ProtocolData load_data_from_dir(const std::string &dir) {
  ProtocolData out;
  out.design = load_design((fs::path(dir) / "edesign" / "design.txt").string());
  std::string data_path = (fs::path(dir) / "data" / "dataset.txt").string();
  std::string first;
  {
    auto in = open_in(data_path);
    std::getline(in, first);
  }
  std::vector<Circuit> data_circuits;
  if (first == "## TimeSeries") {
    out.series = load_timeseries(data_path);
    data_circuits = out.series->circuits();
  } else {
    auto in = open_in(data_path);
    std::vector<Circuit> blank;
    out.counts = read_dataset(in, data_path, &blank);
    if (!blank.empty())
      throw DataError(data_path + ": " + std::to_string(blank.size()) +
                      " circuits missing counts (first: " + blank.front().str() + ")");
    data_circuits = out.counts->circuits();
  }
  std::size_t absent = 0;
  std::string first_absent;
  std::set<Circuit> have(data_circuits.begin(), data_circuits.end());
  for (const auto &c : out.design.circuits())
    if (!have.count(c)) {
      if (!absent) first_absent = c.str();
      ++absent;
    }
  if (absent)
    throw DataError(data_path + ": " + std::to_string(absent) + " circuits missing counts (first: " +
                    first_absent + ")");
  for (const auto &c : data_circuits)
    if (!out.design.contains(c))
      throw DataError(data_path + ": counts for circuit " + c.str() + " which is not in the design");
  return out;
}

}  // namespace qcvv
