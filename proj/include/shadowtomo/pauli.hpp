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

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shadowtomo/common.hpp"

namespace shadowtomo {

/// Maximum qubit count of the packed symplectic representation.
inline constexpr int kMaxPauliQubits = 64;

/// An n-qubit Pauli operator i^phase * (sigma_0 (x) ... (x) sigma_{n-1}).
///
/// Qubit q is bit q of the x and z words and character q of the text form.
/// The per-qubit factor is I, X, Z or Y for (x,z) = (0,0), (1,0), (0,1),
/// (1,1); Y is stored literally, so the operator is Hermitian exactly when the
/// phase exponent is even.
class PauliOp {
 public:
  PauliOp() = default;
  PauliOp(int num_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int phase = 0);

  static PauliOp identity(int num_qubits) { return PauliOp(num_qubits, 0, 0, 0); }

  /// Single-qubit factor `which` in {'I','X','Y','Z'} on `qubit`.
  static PauliOp single(int num_qubits, int qubit, char which);

  /// Parses "[+|-|+i|-i|i]{I,X,Y,Z}*", e.g. "-XIZ". Throws Error on bad input.
  static PauliOp parse(std::string_view text);

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  /// Exponent of i in {0,1,2,3}.
  int phase() const { return phase_; }

  int weight() const { return std::popcount(x_ | z_); }
  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_hermitian() const { return (phase_ & 1) == 0; }

  /// +1 or -1 for Hermitian operators.
  int sign() const;

  /// The same tensor factors with phase +1.
  PauliOp unsigned_part() const { return PauliOp(n_, x_, z_, 0); }

  /// Character 'I','X','Y','Z' acting on `qubit`.
  char letter(int qubit) const;

  std::string to_string() const;

  friend bool operator==(const PauliOp&, const PauliOp&) = default;

  /// Canonical order: x bits, then z bits, then phase.
  friend std::strong_ordering operator<=>(const PauliOp& a, const PauliOp& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    return a.phase_ <=> b.phase_;
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// True iff PQ = QP, from the parity of the symplectic form.
bool commutes(const PauliOp& p, const PauliOp& q);

/// Exact product PQ including the phase.
PauliOp multiply(const PauliOp& p, const PauliOp& q);

inline PauliOp operator*(const PauliOp& p, const PauliOp& q) { return multiply(p, q); }

/// Dense 2^n x 2^n matrix. Qubit 0 is the leftmost Kronecker factor.
CMatrix dense_matrix(const PauliOp& p);

/// All weight-k Paulis with phase +1, in canonical order; 3^k * C(n,k) entries.
std::vector<PauliOp> enumerate_local(int num_qubits, int k);

/// All 4^n Paulis with phase +1, in canonical order.
std::vector<PauliOp> enumerate_all(int num_qubits);

/// Bit mask of qubit q in a dense basis index (qubit 0 is the most significant bit).
inline std::uint64_t basis_mask(int num_qubits, int qubit) {
  return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

/// Maps a per-qubit word to the dense basis-index bit layout.
std::uint64_t to_basis_layout(int num_qubits, std::uint64_t qubit_bits);

}  // namespace shadowtomo
