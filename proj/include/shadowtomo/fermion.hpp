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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shadowtomo/pauli.hpp"

namespace shadowtomo {

/// Bit a of a support word marks Majorana operator c_{a+1}.
using MajoranaSupport = std::uint64_t;

inline constexpr int kMaxModes = 32;

/// Hermitian Majorana monomial Gamma(x) = i^{|x|(|x|-1)/2} c_1^{x_1} ... c_{2n}^{x_{2n}},
/// optionally weighted (the weight is a Hamiltonian coefficient; 1 for bare observables).
struct MajoranaMonomial {
  int n_modes = 0;
  MajoranaSupport support = 0;
  double coefficient = 1.0;

  int degree() const { return std::popcount(support); }

  /// "G[a,b,...]" with 1-indexed Majoranas, plus "*coeff" when the weight is not 1.
  std::string to_string() const;

  /// Parses "G[a,b,...]" or "G[a,b,...]*coeff". With n_modes == 0 the mode count is
  /// the smallest one that holds every listed index.
  static MajoranaMonomial parse(std::string_view text, int n_modes = 0);

  friend bool operator==(const MajoranaMonomial&, const MajoranaMonomial&) = default;
};

/// Gamma(x) Gamma(y) = (-1)^{|x||y| + x.y} Gamma(y) Gamma(x); true iff the sign is +1.
inline bool monomial_commutes(MajoranaSupport x, MajoranaSupport y) {
  return ((std::popcount(x) * std::popcount(y) + std::popcount(x & y)) & 1) == 0;
}

/// Gamma(x) Gamma(y) = i^phase Gamma(x xor y).
struct MonomialProduct {
  int phase = 0;
  MajoranaSupport support = 0;
};

MonomialProduct monomial_product(MajoranaSupport x, MajoranaSupport y);

enum class MappingKind { ternary_tree, jordan_wigner };

std::string to_string(MappingKind kind);
MappingKind parse_mapping_kind(std::string_view text);

/// Images of c_1..c_{2n} as pairwise anticommuting Hermitian Paulis.
class FermionMapping {
 public:
  FermionMapping(int n_modes, std::vector<PauliOp> majoranas, MappingKind kind);

  int n_modes() const { return n_modes_; }
  int num_qubits() const { return majoranas_.front().num_qubits(); }
  MappingKind kind() const { return kind_; }
  /// Image of c_{a+1} (0-indexed a).
  const PauliOp& majorana(int a) const { return majoranas_[static_cast<std::size_t>(a)]; }
  const std::vector<PauliOp>& majoranas() const { return majoranas_; }

 private:
  int n_modes_;
  std::vector<PauliOp> majoranas_;
  MappingKind kind_;
};

/// Ternary-tree mapping on n_modes qubits. Qubits are the internal nodes of a
/// ternary tree filled in breadth-first order (qubit q has children 3q+1..3q+3 on
/// its X, Y, Z edges); the 2n+1 root-to-leaf paths in X<Y<Z depth-first order give
/// the operators and the last path is dropped.
FermionMapping ternary_tree_mapping(int n_modes);

/// c_{2j-1} = Z..Z X I..I and c_{2j} = Z..Z Y I..I with j-1 leading Z factors.
FermionMapping jordan_wigner_mapping(int n_modes);

FermionMapping make_mapping(MappingKind kind, int n_modes);

/// Hermitian Pauli image of Gamma(support) under the mapping (coefficient ignored).
PauliOp monomial_to_pauli(MajoranaSupport support, const FermionMapping& mapping);
inline PauliOp monomial_to_pauli(const MajoranaMonomial& m, const FermionMapping& mapping) {
  return monomial_to_pauli(m.support, mapping);
}

/// All supports of degree r over 2n Majoranas, ascending index tuples in lexicographic order.
std::vector<MajoranaSupport> enumerate_degree(int n_modes, int degree);

/// The C(2n,2k) k-body observables Gamma(x), |x| = 2k.
std::vector<MajoranaMonomial> enumerate_kbody(int n_modes, int k);

/// 1-indexed Majorana labels in the support.
std::vector<int> support_indices(MajoranaSupport support);

}  // namespace shadowtomo
