// Copyright 2026 The shadowtomo Authors
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

#include <cstdint>
#include <span>

#include "shadowtomo/pauli.hpp"

namespace shadowtomo {

/// Heuristic lower estimate of the commutation index max_rho (1/|S|) sum_P Tr(P rho)^2,
/// by random restarts plus local ascent over pure states. Requires n <= 8.
double estimate_commutation_index(std::span<const PauliOp> ops, int trials, std::uint64_t seed);

}  // namespace shadowtomo
