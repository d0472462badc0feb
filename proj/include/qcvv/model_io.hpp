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

#include "qcvv/model.hpp"

namespace qcvv {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
/// Strict decimal parse; throws std::invalid_argument on junk.
double parse_double(std::string_view s);

/// Line-oriented model text format (see docs/formats.md). Numbers are written
/// in shortest round-trip form, so write -> read -> write is byte-exact.
void write_model(const GateSetModel &m, std::ostream &out);
std::string model_to_string(const GateSetModel &m);
GateSetModel read_model(std::istream &in, const std::string &source = "<model>");
GateSetModel model_from_string(const std::string &text);

void save_model(const GateSetModel &m, const std::string &path);
GateSetModel load_model(const std::string &path);

}  // namespace qcvv
