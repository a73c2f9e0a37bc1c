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
#include <map>
#include <string>
#include <vector>

#include "shadowtomo/common.hpp"
#include "shadowtomo/fermion.hpp"
#include "shadowtomo/protocols.hpp"
#include "shadowtomo/rng.hpp"
#include "shadowtomo/state.hpp"

namespace shadowtomo {

/// H = sum_j h_j Gamma(x_j) with even-degree Hermitian monomials and |h_j| <= 1.
struct SparseHamiltonian {
  int n_modes = 0;
  std::vector<MajoranaMonomial> terms;

  /// Half the largest term degree.
  int body_order() const;
  /// Largest number of terms containing one Majorana.
  int sparsity() const;
  void validate() const;

  static SparseHamiltonian parse(const std::string& text, int n_modes = 0);
};

/// Random H with `num_terms` attempts at degree-2k terms, rejecting any term that would
/// push a Majorana past `s` occurrences; coefficients uniform in [-1, 1].
SparseHamiltonian random_sparse_hamiltonian(int n_modes, int k, int s, int num_terms, CounterRng& rng);

/// L_H^q(c_a) = sum_Gamma h_Gamma Gamma with real h (a is 0-indexed).
struct GreensExpansion {
  int a = 0;
  int q = 0;
  std::map<MajoranaSupport, double> terms;
};

/// Exact nested commutator i[H, .] applied q times to c_a; terms with |h| < 1e-12 are dropped.
GreensExpansion lie_expand(const SparseHamiltonian& h, int a, int q);

/// s^q (2k)^(q-1) (q-1)! for q >= 1, and 1 for q = 0.
double num_terms_bound(int k, int s, int q);

/// 4 s^q (2k)^(q+2) q^2 q! omega.
double greens_coloring_bound(int k, int s, int q, int omega);

/// G^(q)_ab = Tr(i L^q(c_a) c_b rho) over all 2n Majoranas; complex in general.
CMatrix greens_derivative_exact(const QuantumState& rho, const SparseHamiltonian& h, int q,
                                const FermionMapping& mapping);

/// Dense H under the mapping.
CMatrix hamiltonian_matrix(const SparseHamiltonian& h, const FermionMapping& mapping);

/// G_ab(t) = Tr(i e^{iHt} c_a e^{-iHt} c_b rho), dense.
CMatrix greens_function_dense(const QuantumState& rho, const SparseHamiltonian& h, double t,
                              const FermionMapping& mapping);

struct GreensLearning {
  CMatrix estimate;
  EstimationReport report;
  std::vector<MajoranaSupport> targets;
  double term_precision = 0.0;
  double max_weight = 0.0;  // max_a sum_Gamma |h_Gamma|
  std::size_t max_terms = 0;
  int colors = 0;
  int omega = 0;
  double coloring_bound = 0.0;
  std::uint64_t copies = 0;
};

/// Learns every Tr(Gamma c_b rho) to eps / max_a sum |h| with the two-copy template and
/// greedy coloring, then recombines.
GreensLearning learn_greens_derivative(const QuantumState& rho, const SparseHamiltonian& h, int q, double epsilon,
                                       std::uint64_t seed, const FermionMapping& mapping,
                                       const ProtocolConstants& c = {});

}  // namespace shadowtomo
