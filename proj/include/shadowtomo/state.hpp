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
#include <string>
#include <utility>
#include <vector>

#include "shadowtomo/common.hpp"
#include "shadowtomo/pauli.hpp"
#include "shadowtomo/rng.hpp"

namespace shadowtomo {

/// Dense n-qubit state: a pure statevector or an ensemble of weighted pure states.
/// Basis index bit (n-1-q) is qubit q.
class QuantumState {
 public:
  struct Member {
    double weight;
    CVector amplitudes;
  };

  static QuantumState pure(CVector amplitudes);
  static QuantumState ensemble(std::vector<Member> members);
  /// Spectral decomposition of a density matrix; eigenvalues below 1e-14 are dropped.
  static QuantumState from_density(const CMatrix& rho);

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return std::size_t{1} << n_; }
  bool is_pure() const { return members_.size() == 1; }
  const std::vector<Member>& members() const { return members_; }

  /// Picks an ensemble member with probability equal to its weight.
  const CVector& draw_member(CounterRng& rng) const;

  CMatrix density_matrix() const;

 private:
  QuantumState(int n, std::vector<Member> members) : n_(n), members_(std::move(members)) {}
  int n_ = 0;
  std::vector<Member> members_;
};

QuantumState basis_state(int num_qubits, std::uint64_t index);
/// One character per qubit from {0,1,+,-,r,l} (r/l are the +-1 eigenstates of Y).
QuantumState product_state(std::string_view spec);
QuantumState ghz_state(int num_qubits);
QuantumState haar_random_state(int num_qubits, CounterRng& rng);
QuantumState maximally_mixed_state(int num_qubits);
/// Ensemble of `rank` Haar-random pure states with Dirichlet(1) weights.
QuantumState random_mixed_state(int num_qubits, int rank, CounterRng& rng);

/// Standard normal deviate (Box-Muller).
double standard_normal(CounterRng& rng);

CVector apply_pauli(const PauliOp& p, const CVector& v);

/// <v|P|v> for Hermitian P (real part of the complex value).
double expectation(const CVector& v, const PauliOp& p);
/// Tr(P rho). Throws Error for non-Hermitian P or dimension mismatch.
double expectation(const QuantumState& rho, const PauliOp& p);

/// Tr(P A) for a dense 2^n x 2^n matrix A, in O(2^n).
Complex pauli_trace(const PauliOp& p, const CMatrix& a);

/// One joint sample of mutually commuting Paulis, measured in order by projecting onto
/// the observed eigenspace. Returns +-1 per operator.
std::vector<int> measure_commuting_set(const QuantumState& rho, std::span<const PauliOp> ops,
                                       CounterRng& rng);

/// Exact joint outcome distribution of mutually commuting Paulis. Outcome word bit i is
/// set when operator i reads -1.
struct JointDistribution {
  std::vector<std::uint64_t> outcomes;
  std::vector<double> probabilities;
  std::vector<double> cumulative;

  std::uint64_t sample(CounterRng& rng) const;
};

JointDistribution commuting_distribution(const QuantumState& rho, std::span<const PauliOp> ops);

/// A Bell-basis outcome on rho (x) sigma: bit q holds the first bit of qubit pair q and
/// bit n+q the second.
struct BellSample {
  int num_qubits = 0;
  std::uint64_t bits = 0;
  friend bool operator==(const BellSample&, const BellSample&) = default;
};

/// Eigenvalue table of sigma (x) sigma on the single-pair Bell outcome (m1 + 2 m2), for
/// sigma in I, X, Z, Y order of the (x, z) encoding x + 2z.
inline constexpr int kBellSignTable[4][4] = {
    {+1, +1, +1, +1},  // I
    {+1, -1, +1, -1},  // X
    {+1, +1, -1, -1},  // Z
    {-1, +1, +1, -1},  // Y
};

/// +-1 eigenvalue of P (x) P on the Bell outcome; an unbiased sample of Tr(P rho) Tr(P sigma).
inline int sign_of(const PauliOp& p, const BellSample& b) {
  const std::uint64_t low = (b.num_qubits >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << b.num_qubits) - 1;
  const std::uint64_t m1 = b.bits & low;
  const std::uint64_t m2 = b.bits >> b.num_qubits;
  const int parity = std::popcount((p.x_bits() & m1) ^ (p.z_bits() & m2)) + std::popcount(p.x_bits() & p.z_bits());
  return (parity & 1) ? -1 : 1;
}

/// Exact distribution over the 4^n Bell outcomes of rho (x) sigma, indexed by BellSample::bits.
class BellDistribution {
 public:
  BellDistribution(const QuantumState& rho, const QuantumState& sigma);

  int num_qubits() const { return n_; }
  const std::vector<double>& probabilities() const { return prob_; }

  BellSample sample(CounterRng& rng) const;
  /// Multinomial outcome counts for `shots` independent samples.
  std::vector<std::uint64_t> sample_counts(std::uint64_t shots, CounterRng& rng) const;

 private:
  int n_;
  std::vector<double> prob_;
  std::vector<double> cumulative_;
};

BellSample bell_sample(const QuantumState& rho, const QuantumState& sigma, CounterRng& rng);

/// Draws from Binomial(trials, p).
std::uint64_t sample_binomial(std::uint64_t trials, double p, CounterRng& rng);

/// Multinomial counts by sequential conditional binomials; `probabilities` need not be
/// normalized.
std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              CounterRng& rng);

}  // namespace shadowtomo
