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

#include "qcvv/circuit.hpp"

#include <algorithm>
#include <set>

namespace qcvv {

namespace {

bool is_integer_token(const std::string &s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

bool is_target_char(char c) {
  return c != 'G' && ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_');
}

bool is_line_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<LineLabel> sorted_union(const std::vector<Layer> &layers) {
  std::vector<LineLabel> out;
  for (const auto &layer : layers)
    for (const auto &label : layer.labels)
      for (const auto &t : label.targets)
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  std::sort(out.begin(), out.end(), line_label_less);
  return out;
}

void validate(const std::vector<Layer> &layers, const std::vector<LineLabel> &lines) {
  std::set<LineLabel> declared;
  for (const auto &l : lines) {
    if (l.empty()) throw CircuitError("empty line label");
    if (!declared.insert(l).second) throw CircuitError("duplicate line label '" + l + "'");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::set<LineLabel> used;
    for (const auto &label : layers[i].labels) {
      if (label.name.size() < 2 || label.name[0] != 'G')
        throw CircuitError("bad gate name '" + label.name + "'");
      for (const auto &t : label.targets) {
        if (!declared.count(t))
          throw CircuitError("target '" + t + "' of " + label.str() + " in layer " +
                             std::to_string(i) + " is outside the circuit lines");
        if (!used.insert(t).second)
          throw CircuitError("target '" + t + "' used twice in layer " + std::to_string(i));
      }
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Circuit run() {
    std::vector<Layer> layers;
    bool legacy = false;
    if (s_.substr(0, 2) == "{}") {
      pos_ = 2;
    } else if (peek() == '[') {
      layers = parse_layers();
    } else if (peek() == 'G') {
      layers = parse_legacy();
      legacy = true;
    } else {
      fail("expected '[', '{}' or a gate name");
    }

    std::vector<LineLabel> lines;
    bool has_lines = false;
    if (pos_ < s_.size()) {
      if (s_.substr(pos_, 2) != "@(") fail("expected '@(' or end of circuit");
      pos_ += 2;
      lines = parse_lines();
      has_lines = true;
    }
    if (pos_ != s_.size()) fail("trailing characters");

    if (legacy) {
      if (has_lines && lines.size() != 1)
        fail_at("legacy gate sequence requires exactly one line", 0);
      LineLabel line = has_lines ? lines.front() : LineLabel("0");
      for (auto &layer : layers) layer.labels.front().targets = {line};
      if (!has_lines) lines = {line};
    }
    if (!has_lines) lines = sorted_union(layers);
    try {
      return Circuit(std::move(layers), std::move(lines));
    } catch (const CircuitError &e) {
      throw CircuitParseError(e.what(), 0);
    }
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string &msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string &msg, std::size_t at) const {
    throw CircuitParseError("circuit syntax error at byte " + std::to_string(at) + ": " + msg,
                            at);
  }

  std::string parse_name() {
    if (peek() != 'G') fail("expected gate name");
    std::size_t start = pos_++;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (pos_ - start < 2) fail("gate name needs at least one [a-z0-9] after 'G'");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<Layer> parse_layers() {
    std::vector<Layer> layers;
    while (peek() == '[') {
      ++pos_;
      Layer layer;
      while (peek() != ']') {
        if (pos_ >= s_.size()) fail("unterminated layer");
        GateLabel label;
        label.name = parse_name();
        while (peek() == ':') {
          ++pos_;
          std::size_t start = pos_;
          while (pos_ < s_.size() && is_target_char(s_[pos_])) ++pos_;
          if (pos_ == start) fail("empty target");
          label.targets.emplace_back(s_.substr(start, pos_ - start));
        }
        std::set<LineLabel> seen;
        for (const auto &t : label.targets)
          if (!seen.insert(t).second) fail("repeated target in " + label.str());
        for (const auto &other : layer.labels)
          for (const auto &t : other.targets)
            if (seen.count(t)) fail("duplicate target '" + t + "' within layer");
        layer.labels.push_back(std::move(label));
      }
      ++pos_;
      std::size_t after = pos_;
      while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
      if (pos_ != after && peek() != '[') fail("whitespace is only allowed between layers");
      layers.push_back(std::move(layer));
    }
    return layers;
  }

  std::vector<Layer> parse_legacy() {
    std::vector<Layer> layers;
    while (peek() == 'G') {
      GateLabel label;
      label.name = parse_name();
      if (peek() == ':') fail("legacy gate sequences cannot carry targets");
      layers.push_back(Layer{{std::move(label)}});
    }
    return layers;
  }

  std::vector<LineLabel> parse_lines() {
    std::vector<LineLabel> lines;
    if (peek() == ')') {
      ++pos_;
      return lines;
    }
    while (true) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_line_char(s_[pos_])) ++pos_;
      if (pos_ == start) fail("expected line label");
      lines.emplace_back(s_.substr(start, pos_ - start));
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return lines;
      }
      fail("expected ',' or ')'");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

bool line_label_less(const LineLabel &a, const LineLabel &b) {
  bool ia = is_integer_token(a), ib = is_integer_token(b);
  if (ia && ib) {
    // Compare by value without overflow: strip leading zeros, then length.
    auto strip = [](const std::string &s) {
      auto p = s.find_first_not_of('0');
      return p == std::string::npos ? std::string("0") : s.substr(p);
    };
    std::string sa = strip(a), sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
  }
  if (ia != ib) return ia;
  return a < b;
}

CircuitParseError::CircuitParseError(const std::string &what, std::size_t offset)
    : CircuitError(what), offset_(offset) {}

std::string GateLabel::str() const {
  std::string out = name;
  for (const auto &t : targets) out += ":" + t;
  return out;
}

std::string Layer::str() const {
  std::string out = "[";
  for (const auto &l : labels) out += l.str();
  return out + "]";
}

Circuit::Circuit(std::vector<Layer> layers, std::vector<LineLabel> lines)
    : layers_(std::move(layers)), lines_(std::move(lines)) {
  validate(layers_, lines_);
}

Circuit::Circuit(std::vector<Layer> layers) : layers_(std::move(layers)) {
  lines_ = sorted_union(layers_);
  validate(layers_, lines_);
}

std::string Circuit::str() const { return serialize_circuit(*this); }

Circuit parse_circuit(std::string_view text) { return Parser(text).run(); }

std::string serialize_circuit(const Circuit &c) {
  std::string out;
  if (c.is_empty()) out = "{}";
  for (const auto &layer : c.layers()) out += layer.str();
  out += "@(";
  for (std::size_t i = 0; i < c.lines().size(); ++i) {
    if (i) out += ",";
    out += c.lines()[i];
  }
  return out + ")";
}

Circuit concat(const Circuit &a, const Circuit &b) {
  if (a.lines() != b.lines()) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    throw CircuitError("cannot concatenate circuits on different lines: " + a.str() + " + " +
                       b.str());
  }
  std::vector<Layer> layers = a.layers();
  layers.insert(layers.end(), b.layers().begin(), b.layers().end());
  return Circuit(std::move(layers), a.lines());
}

Circuit repeat(const Circuit &c, std::size_t k) {
  std::vector<Layer> layers;
  layers.reserve(c.depth() * k);
  for (std::size_t i = 0; i < k; ++i)
    layers.insert(layers.end(), c.layers().begin(), c.layers().end());
  return Circuit(std::move(layers), c.lines());
}

Circuit with_lines(const Circuit &c, std::vector<LineLabel> lines) {
  return Circuit(c.layers(), std::move(lines));
}

}  // namespace qcvv
