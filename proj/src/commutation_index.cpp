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

#include "shadowtomo/commutation_index.hpp"

#include <algorithm>

#include "shadowtomo/state.hpp"

namespace shadowtomo {

namespace {

double objective(std::span<const PauliOp> ops, const CVector& v, CVector* gradient) {
  double total = 0.0;
  if (gradient) gradient->setZero(v.size());
  for (const auto& p : ops) {
    const CVector pv = apply_pauli(p, v);
    const double e = v.dot(pv).real();
    total += e * e;
    if (gradient) *gradient += e * pv;
  }
  return total / static_cast<double>(ops.size());
}

double ascend(std::span<const PauliOp> ops, CVector v, int steps) {
  CVector grad;
  double best = objective(ops, v, &grad);
  double eta = 1.0;
  for (int s = 0; s < steps && eta > 1e-6; ++s) {
    CVector next = (v + eta * grad).normalized();
    CVector next_grad;
    const double value = objective(ops, next, &next_grad);
    if (value > best + 1e-15) {
      best = value;
      v = std::move(next);
      grad = std::move(next_grad);
      eta = std::min(eta * 2.0, 64.0);
    } else {
      eta *= 0.5;
    }
  }
  return best;
}

}  // namespace

double estimate_commutation_index(std::span<const PauliOp> ops, int trials, std::uint64_t seed) {
  require(!ops.empty(), "commutation index needs a nonempty set");
  const int n = ops.front().num_qubits();
  require(n <= 8, "commutation index estimation supports n <= 8");
  for (const auto& p : ops) {
    require(p.num_qubits() == n, "Pauli dimensions differ");
    require(p.is_hermitian(), "commutation index needs Hermitian Paulis");
  }
  CounterRng root(seed);
  double best = 0.0;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    CounterRng rng = root.stream(static_cast<std::uint64_t>(t));
    CVector v = haar_random_state(n, rng).members().front().amplitudes;
    if (t % 2 == 1) {
      // Seed inside a +-1 eigenspace of one member of the set.
      const PauliOp& p = ops[static_cast<std::size_t>(rng.below(ops.size()))];
      const double s = rng.uniform() < 0.5 ? 1.0 : -1.0;
      CVector projected = (v + s * apply_pauli(p, v)) / 2.0;
      if (projected.norm() > 1e-8) v = projected.normalized();
    }
    best = std::max(best, ascend(ops, std::move(v), 200));
  }
  return best;
}

}  // namespace shadowtomo
