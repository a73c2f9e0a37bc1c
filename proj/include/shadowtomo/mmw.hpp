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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shadowtomo/common.hpp"
#include "shadowtomo/pauli.hpp"
#include "shadowtomo/rng.hpp"
#include "shadowtomo/state.hpp"

namespace shadowtomo {

struct MmwConfig {
  double epsilon = 0.5;
  int num_qubits = 1;
  int T = 0;
  double beta = 0.0;
  int sign_shots = 0;

  /// T = ceil(64 n / eps^2) + 1, beta = sqrt(n / T), sign_shots = ceil(32 ln(100 T) / eps^2).
  static MmwConfig make(int num_qubits, double epsilon);
};

/// Returns an estimate of sign(Tr(P rho)) in {+1, -1}.
using SignOracle = std::function<int(const PauliOp&)>;

/// Majority vote over `shots` single-copy measurements of P; ties read +1.
int sign_probe(const PauliOp& p, const QuantumState& rho, int shots, CounterRng& rng);

/// Sign of the exact expectation value (zero reads +1).
int exact_sign(const PauliOp& p, const QuantumState& rho);

struct MmwStep {
  int t = 0;
  PauliOp chosen;
  int r_p = 0;
  int sign_factor = 0;  // M^(t) = sign_factor * chosen
  double regret_partial = 0.0;
};

struct MmwIterate {
  PauliOp m;  // signed loss Pauli
  CMatrix omega;
};

struct MmwResult {
  CMatrix sigma;
  int iterations = 0;
  bool converged = false;  // exited because no violating Pauli remained
  std::vector<MmwStep> trace;
  std::vector<MmwIterate> iterates;
  std::uint64_t probes = 0;
};

/// Matrix multiplicative weights search for a state sigma with |Tr(P sigma)| >= eps/4
/// on every P with u_P >= 3 eps/4. `ops` and `u` run in parallel; violators are taken
/// in the order given.
MmwResult compute_mimicking_state(std::span<const PauliOp> ops, std::span<const double> u,
                                  const MmwConfig& cfg, const SignOracle& oracle);

/// sum_t Tr(M^(t) omega^(t)) - lambda_min(sum_t M^(t)).
double regret_audit(std::span<const MmwIterate> iterates);

/// Dense check of the mimicking condition on sigma.
bool satisfies_mimicking(const CMatrix& sigma, std::span<const PauliOp> ops, std::span<const double> u,
                         double epsilon);

/// One JSON object per step: {t, chosen_pauli, r_P, sign_factor, regret_partial}.
std::string trace_json_lines(const MmwResult& result);

}  // namespace shadowtomo
