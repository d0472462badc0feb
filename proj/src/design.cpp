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

#include "qcvv/design.hpp"

#include "qcvv/dataset.hpp"

namespace qcvv {

std::optional<std::string> field(const Fields &f, const std::string &key) {
  for (const auto &[k, v] : f)
    if (k == key) return v;
  return std::nullopt;
}

std::string require_field(const Fields &f, const std::string &key) {
  auto v = field(f, key);
  if (!v) throw DataError("missing field '" + key + "'");
  return *v;
}

ExperimentDesign::ExperimentDesign(std::string type, Fields attributes)
    : type_(std::move(type)), attributes_(std::move(attributes)) {}

void ExperimentDesign::add_circuit(const Circuit &c, Fields tags) {
  if (!index_.emplace(c, circuits_.size()).second)
    throw DataError("duplicate circuit in design: " + c.str());
  circuits_.push_back(c);
  tags_.push_back(std::move(tags));
}

std::size_t ExperimentDesign::index_of(const Circuit &c) const {
  auto it = index_.find(c);
  if (it == index_.end()) throw DataError("circuit not in design: " + c.str());
  return it->second;
}

}  // namespace qcvv
