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

#include <string>
#include <vector>

#include "qcvv/model.hpp"

namespace qcvv {

struct ModelPack {
  std::string name;
  GateSetModel target;  // perfect gates, full-TP parameterized
  std::vector<Circuit> prep_fiducials;
  std::vector<Circuit> meas_fiducials;
  std::vector<Circuit> germs;
};

/// smq1Q_XYI, smq1Q_XYZI, smq1Q_Xpi2_rpe or smq2Q_XYICNOT.
ModelPack target_model_pack(const std::string &name);
std::vector<std::string> model_pack_names();

}  // namespace qcvv
