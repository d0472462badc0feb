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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcvv/circuit.hpp"

namespace qcvv {

/// Ordered key=value pairs. Keys and values carry no whitespace or '='.
using Fields = std::vector<std::pair<std::string, std::string>>;

std::optional<std::string> field(const Fields &f, const std::string &key);
/// Throws DataError when the key is missing.
std::string require_field(const Fields &f, const std::string &key);

/// A non-circuit record such as "germ index=0 circuit=[]@(0)".
struct DesignRecord {
  std::string kind;
  Fields fields;

  bool operator==(const DesignRecord &) const = default;
};

/// Circuit list plus per-circuit metadata. `type` is gst, rb, rpe or plain.
class ExperimentDesign {
 public:
  ExperimentDesign() = default;
  explicit ExperimentDesign(std::string type, Fields attributes = {});

  const std::string &type() const { return type_; }
  const Fields &attributes() const { return attributes_; }
  const std::vector<DesignRecord> &records() const { return records_; }
  const std::vector<Circuit> &circuits() const { return circuits_; }
  const Fields &tags(std::size_t i) const { return tags_[i]; }
  std::size_t size() const { return circuits_.size(); }

  void add_record(DesignRecord r) { records_.push_back(std::move(r)); }
  /// Throws DataError on a duplicate circuit.
  void add_circuit(const Circuit &c, Fields tags = {});

  bool contains(const Circuit &c) const { return index_.count(c) > 0; }
  std::size_t index_of(const Circuit &c) const;

  bool operator==(const ExperimentDesign &o) const {
    return type_ == o.type_ && attributes_ == o.attributes_ && records_ == o.records_ &&
           circuits_ == o.circuits_ && tags_ == o.tags_;
  }

 private:
  std::string type_ = "plain";
  Fields attributes_;
  std::vector<DesignRecord> records_;
  std::vector<Circuit> circuits_;
  std::vector<Fields> tags_;
  std::map<Circuit, std::size_t> index_;
};

}  // namespace qcvv
