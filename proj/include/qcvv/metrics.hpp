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

#include "qcvv/basis.hpp"

namespace qcvv {

/// 1 - Tr(ideal^T g) / d^2
double entanglement_infidelity(const Matrix &g, const Matrix &ideal);

/// Half the trace norm of the difference of the trace-one Choi matrices.
double jamiolkowski_trace_distance(const Matrix &a, const Matrix &b);

double frobenius_distance(const Matrix &a, const Matrix &b);

}  // namespace qcvv
