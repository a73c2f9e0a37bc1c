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

#include <map>
#include <string>
#include <vector>

#include "shadowtomo/fermion.hpp"
#include "shadowtomo/pauli.hpp"
#include "shadowtomo/state.hpp"

namespace shadowtomo {

/// Ground state of H = sum_{a<b} h_ab i c_a c_b with standard normal h_ab.
QuantumState gaussian_state(int n_modes, const FermionMapping& mapping, CounterRng& rng);

/// Named generator or ket file. Generators:
///   ghz n=3 | haar_random n=3 seed=5 | product 0+1r | maximally_mixed n=2
///   random_mixed n=3 rank=2 seed=1 | basis n=3 index=5
///   gaussian n_modes=4 seed=1 mapping=ternary
/// Anything else is read as a file of "label re [im]" lines, e.g. "010 0.5 0.5".
QuantumState parse_state_spec(const std::string& spec);

/// key=value arguments after the generator name.
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string read_text_file(const std::string& path);

/// Non-empty, non-comment lines.
std::vector<std::string> read_lines(const std::string& path);

std::vector<PauliOp> parse_pauli_list(const std::vector<std::string>& lines);
std::vector<MajoranaMonomial> parse_monomial_list(const std::vector<std::string>& lines, int n_modes = 0);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace shadowtomo
