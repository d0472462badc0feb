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

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcvv {

/// Line labels are opaque tokens ("0", "Q1", ...). Integer-looking tokens
/// order numerically, everything else lexicographically after them.
using LineLabel = std::string;

bool line_label_less(const LineLabel &a, const LineLabel &b);

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the text parser. `offset()` is the byte position of the problem.
class CircuitParseError : public CircuitError {
 public:
  CircuitParseError(const std::string &what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct GateLabel {
  std::string name;
  std::vector<LineLabel> targets;

  /// "Gxpi2:0", "Gcnot:0:1"
  std::string str() const;

  auto operator<=>(const GateLabel &) const = default;
  bool operator==(const GateLabel &) const = default;
};

/// Gates executed concurrently. Lines not touched by any label idle.
struct Layer {
  std::vector<GateLabel> labels;

  bool empty() const { return labels.empty(); }
  std::string str() const;

  auto operator<=>(const Layer &) const = default;
  bool operator==(const Layer &) const = default;
};

/// Immutable sequence of layers over an ordered set of lines.
class Circuit {
 public:
  Circuit() = default;

  /// Throws CircuitError if a layer reuses a target or references a line
  /// outside `lines`.
  Circuit(std::vector<Layer> layers, std::vector<LineLabel> lines);

  /// Lines inferred as the sorted union of all targets.
  explicit Circuit(std::vector<Layer> layers);

  static Circuit empty(std::vector<LineLabel> lines) {
    return Circuit({}, std::move(lines));
  }

  const std::vector<Layer> &layers() const { return layers_; }
  const std::vector<LineLabel> &lines() const { return lines_; }
  std::size_t depth() const { return layers_.size(); }
  bool is_empty() const { return layers_.empty(); }
  const Layer &operator[](std::size_t i) const { return layers_[i]; }

  /// Canonical text form, see serialize_circuit().
  std::string str() const;

  auto operator<=>(const Circuit &) const = default;
  bool operator==(const Circuit &) const = default;

 private:
  std::vector<Layer> layers_;
  std::vector<LineLabel> lines_;
};

/// Grammar:
///   circuit  := (layerseq | legacyseq | "{}") ["@(" lines ")"]
///   layerseq := ("[" label* "]")+        whitespace allowed between layers
///   label    := name (":" target)*
///   name     := "G" [a-z0-9]+
///   legacyseq:= name+                    single line, no targets
/// Target tokens are [0-9A-Za-z_] without 'G' so that labels can be packed
/// back to back inside a layer.
Circuit parse_circuit(std::string_view text);

/// "[Gxpi2:0Gypi2:1][Gcnot:0:1]@(0,1)"; the empty circuit is "{}@(lines)".
std::string serialize_circuit(const Circuit &c);

/// Lines must match unless one side has no layers.
Circuit concat(const Circuit &a, const Circuit &b);
Circuit repeat(const Circuit &c, std::size_t k);

inline Circuit operator+(const Circuit &a, const Circuit &b) {
  return concat(a, b);
}

/// Same circuit with lines replaced; every target must be covered.
Circuit with_lines(const Circuit &c, std::vector<LineLabel> lines);

}  // namespace qcvv

template <>
struct std::hash<qcvv::Circuit> {
  std::size_t operator()(const qcvv::Circuit &c) const {
    return std::hash<std::string>{}(c.str());
  }
};
