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

#include "qcvv/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qcvv {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

namespace {

std::string join(const Vector &v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

std::string spam_kind_name(SpamKind k) { return k == SpamKind::kStatic ? "static" : "TP"; }

void write_op_body(const Operator &op, std::ostream &out) {
  switch (op.kind()) {
    case OpKind::kFullTP:
    case OpKind::kStatic:
      for (Index r = 0; r < op.dim(); ++r) out << "row " << join(op.dense().row(r).transpose()) << "\n";
      break;
    case OpKind::kCPTP:
    case OpKind::kDepolOverrotation:
      out << "params " << join(op.to_vector()) << "\n";
      break;
    case OpKind::kDepolarizeWrapper: {
      const auto &w = static_cast<const DepolarizeWrapperOp &>(op);
      out << "rate " << format_double(w.rate()) << "\n";
      out << "inner " << op_kind_name(w.inner()->kind()) << "\n";
      write_op_body(*w.inner(), out);
      break;
    }
  }
}

class Reader {
 public:
  Reader(std::istream &in, std::string source) : in_(in), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string &msg) const {
    throw ModelError(source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  // Next line split into whitespace tokens; false at EOF.
  bool next(std::vector<std::string> &tok) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      tok.clear();
      for (std::string t; ss >> t;) tok.push_back(t);
      return true;
    }
    return false;
  }

  std::vector<std::string> expect(const std::string &key, std::size_t min_tokens = 1) {
    std::vector<std::string> tok;
    if (!next(tok)) fail("unexpected end of file, expected '" + key + "'");
    if (tok.empty() || tok[0] != key || tok.size() < min_tokens)
      fail("expected '" + key + "' line");
    return tok;
  }

  Vector numbers(const std::vector<std::string> &tok, std::size_t from, Index count) {
    if (Index(tok.size() - from) != count)
      fail("expected " + std::to_string(count) + " numbers, got " + std::to_string(tok.size() - from));
    Vector v(count);
    for (Index i = 0; i < count; ++i) {
      try {
        v[i] = parse_double(tok[from + i]);
      } catch (const std::invalid_argument &e) {
        fail(e.what());
      }
    }
    return v;
  }

  ParameterizedOp op_body(OpKind kind, Index dim) {
    switch (kind) {
      case OpKind::kFullTP:
      case OpKind::kStatic: {
        Matrix m(dim, dim);
        for (Index r = 0; r < dim; ++r) m.row(r) = numbers(expect("row"), 1, dim).transpose();
        try {
          return kind == OpKind::kFullTP ? make_full_tp(m) : make_static(m);
        } catch (const ModelError &e) {
          fail(e.what());
        }
      }
      case OpKind::kCPTP: {
        auto op = std::make_unique<CPTPOp>(Matrix::Identity(dim, dim));
        try {
          op->from_vector(numbers(expect("params"), 1, dim * dim));
        } catch (const ModelError &e) {
          fail(e.what());
        }
        return ParameterizedOp(std::move(op));
      }
      case OpKind::kDepolOverrotation: {
        if (dim != 4) fail("xpi2_depol_overrotation is a 1-qubit operation");
        Vector v = numbers(expect("params"), 1, 2);
        return custom_xpi2_op(v[0], v[1]);
      }
      case OpKind::kDepolarizeWrapper: {
        double rate = numbers(expect("rate", 2), 1, 1)[0];
        auto tok = expect("inner", 2);
        OpKind inner_kind = parse_op_kind(tok[1]);
        ParameterizedOp inner = op_body(inner_kind, dim);
        try {
          return ParameterizedOp(std::make_unique<DepolarizeWrapperOp>(inner, rate));
        } catch (const ModelError &e) {
          fail(e.what());
        }
      }
    }
    fail("unsupported operation kind");
  }

  SpamKind spam_kind(const std::string &s) {
    if (s == "TP") return SpamKind::kFullTP;
    if (s == "static") return SpamKind::kStatic;
    fail("unknown SPAM parameterization '" + s + "'");
  }

  GateSetModel run() {
    auto header = expect("qcvv-model", 2);
    if (header[1] != "1") fail("unsupported model format version " + header[1]);
    auto tok = expect("lines", 2);
    std::vector<LineLabel> lines;
    {
      std::string s = tok[1];
      std::size_t p = 0;
      while (true) {
        std::size_t q = s.find(',', p);
        lines.push_back(s.substr(p, q == std::string::npos ? q : q - p));
        if (q == std::string::npos) break;
        p = q + 1;
      }
    }
    GateSetModel m = [&] {
      try {
        return GateSetModel(lines);
      } catch (const ModelError &e) {
        fail(e.what());
      }
    }();
    Index dim = m.dim();
    tok = expect("prep", 2);
    m.prep().kind = spam_kind(tok[1]);
    m.prep().vec = numbers(tok, 2, dim);
    tok = expect("povm", 2);
    m.povm().kind = spam_kind(tok[1]);
    m.povm().outcomes.clear();
    m.povm().effects.clear();
    Index n_outcomes = Index(1) << m.num_qubits();
    for (Index e = 0; e < n_outcomes; ++e) {
      tok = expect("effect", 2);
      m.povm().outcomes.push_back(tok[1]);
      m.povm().effects.push_back(numbers(tok, 2, dim));
    }
    if (m.povm().outcomes != bitstrings(m.num_qubits())) fail("effects must list every bitstring in order");
    std::vector<std::string> line;
    while (next(line)) {
      if (line[0] == "end") return m;
      if (line[0] != "op" || line.size() != 4) fail("expected 'op <label> <kind> <dim>' or 'end'");
      GateLabel label;
      OpKind kind;
      Index op_dim = 0;
      try {
        label = parse_element_name(line[1]);
        kind = parse_op_kind(line[2]);
        op_dim = Index(std::stol(line[3]));
        qubits_for_superop_dim(op_dim);
      } catch (const std::exception &e) {
        fail(e.what());
      }
      if (m.has_op(label)) fail("duplicate operation " + line[1]);
      ParameterizedOp op = op_body(kind, op_dim);
      try {
        m.set_op(label, std::move(op));
      } catch (const ModelError &e) {
        fail(e.what());
      }
    }
    fail("missing 'end'");
  }

 private:
  std::istream &in_;
  std::string source_;
  int line_no_ = 0;
};

}  // namespace

void write_model(const GateSetModel &m, std::ostream &out) {
  out << "qcvv-model 1\n";
  out << "lines ";
  for (std::size_t i = 0; i < m.lines().size(); ++i) out << (i ? "," : "") << m.lines()[i];
  out << "\n";
  out << "prep " << spam_kind_name(m.prep().kind) << " " << join(m.prep().vec) << "\n";
  out << "povm " << spam_kind_name(m.povm().kind) << "\n";
  for (std::size_t e = 0; e < m.povm().effects.size(); ++e)
    out << "effect " << m.povm().outcomes[e] << " " << join(m.povm().effects[e]) << "\n";
  for (const auto &[label, op] : m.ops()) {
    out << "op " << element_name(label) << " " << op_kind_name(op->kind()) << " " << op->dim()
        << "\n";
    write_op_body(*op, out);
  }
  out << "end\n";
}

std::string model_to_string(const GateSetModel &m) {
  std::ostringstream ss;
  write_model(m, ss);
  return ss.str();
}

GateSetModel read_model(std::istream &in, const std::string &source) {
  return Reader(in, source).run();
}

GateSetModel model_from_string(const std::string &text) {
  std::istringstream ss(text);
  return read_model(ss);
}

void save_model(const GateSetModel &m, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path);
  write_model(m, out);
}

GateSetModel load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  return read_model(in, path);
}

}  // namespace qcvv
