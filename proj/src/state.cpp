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

#include "shadowtomo/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace shadowtomo {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kPruneTolerance = 1e-14;

const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  require((Eigen::Index{1} << n) == dim, "state dimension is not a power of two");
  return n;
}

std::size_t pick_index(const std::vector<double>& cumulative, double u) {
  const double total = cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * total);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

QuantumState QuantumState::pure(CVector amplitudes) {
  const int n = qubits_for_dimension(amplitudes.size());
  require(n <= kDenseStateCap, "dense cap exceeded: state has more than 10 qubits");
  require(std::abs(amplitudes.norm() - 1.0) <= kNormTolerance, "pure state is not normalized");
  std::vector<Member> m;
  m.push_back({1.0, std::move(amplitudes)});
  return QuantumState(n, std::move(m));
}

QuantumState QuantumState::ensemble(std::vector<Member> members) {
  require(!members.empty(), "ensemble needs at least one member");
  const int n = qubits_for_dimension(members.front().amplitudes.size());
  require(n <= kDenseStateCap, "dense cap exceeded: state has more than 10 qubits");
  double total = 0.0;
  for (const auto& m : members) {
    require(m.amplitudes.size() == members.front().amplitudes.size(), "ensemble members differ in dimension");
    require(m.weight >= 0.0, "ensemble weights must be nonnegative");
    require(std::abs(m.amplitudes.norm() - 1.0) <= kNormTolerance, "ensemble member is not normalized");
    total += m.weight;
  }
  require(std::abs(total - 1.0) <= kNormTolerance, "ensemble weights must sum to 1");
  return QuantumState(n, std::move(members));
}

QuantumState QuantumState::from_density(const CMatrix& rho) {
  require(rho.rows() == rho.cols(), "density matrix must be square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  require(es.info() == Eigen::Success, "density matrix eigendecomposition failed");
  std::vector<Member> members;
  double total = 0.0;
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
    const double w = es.eigenvalues()(i);
    if (w <= kPruneTolerance) continue;
    members.push_back({w, es.eigenvectors().col(i).normalized()});
    total += w;
  }
  require(!members.empty() && total > 0.0, "density matrix has no positive spectrum");
  for (auto& m : members) m.weight /= total;
  return ensemble(std::move(members));
}

const CVector& QuantumState::draw_member(CounterRng& rng) const {
  if (members_.size() == 1) return members_.front().amplitudes;
  double u = rng.uniform();
  for (const auto& m : members_) {
    if (u < m.weight) return m.amplitudes;
    u -= m.weight;
  }
  return members_.back().amplitudes;
}

CMatrix QuantumState::density_matrix() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& m : members_) rho += m.weight * m.amplitudes * m.amplitudes.adjoint();
  return rho;
}

QuantumState basis_state(int num_qubits, std::uint64_t index) {
  require(num_qubits >= 1 && num_qubits <= kDenseStateCap, "qubit count outside [1, 10]");
  CVector v = CVector::Zero(Eigen::Index{1} << num_qubits);
  require(index < static_cast<std::uint64_t>(v.size()), "basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState::pure(std::move(v));
}

QuantumState product_state(std::string_view spec) {
  require(!spec.empty() && static_cast<int>(spec.size()) <= kDenseStateCap, "product state needs 1..10 qubits");
  const double h = std::numbers::sqrt2 / 2.0;
  CVector v = CVector::Ones(1);
  for (char c : spec) {
    CVector q(2);
    switch (c) {
      case '0': q << 1.0, 0.0; break;
      case '1': q << 0.0, 1.0; break;
      case '+': q << h, h; break;
      case '-': q << h, -h; break;
      case 'r': q << h, Complex(0, h); break;
      case 'l': q << h, Complex(0, -h); break;
      default: throw Error(std::string("unknown product-state factor '") + c + "'");
    }
    CVector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * q(0);
      next(2 * i + 1) = v(i) * q(1);
    }
    v = std::move(next);
  }
  return QuantumState::pure(std::move(v));
}

QuantumState ghz_state(int num_qubits) {
  require(num_qubits >= 1 && num_qubits <= kDenseStateCap, "qubit count outside [1, 10]");
  CVector v = CVector::Zero(Eigen::Index{1} << num_qubits);
  v(0) = std::numbers::sqrt2 / 2.0;
  v(v.size() - 1) = std::numbers::sqrt2 / 2.0;
  return QuantumState::pure(std::move(v));
}

double standard_normal(CounterRng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

QuantumState haar_random_state(int num_qubits, CounterRng& rng) {
  require(num_qubits >= 1 && num_qubits <= kDenseStateCap, "qubit count outside [1, 10]");
  CVector v(Eigen::Index{1} << num_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(standard_normal(rng), standard_normal(rng));
  v.normalize();
  return QuantumState::pure(std::move(v));
}

QuantumState maximally_mixed_state(int num_qubits) {
  require(num_qubits >= 1 && num_qubits <= kDenseStateCap, "qubit count outside [1, 10]");
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<QuantumState::Member> members;
  for (std::size_t i = 0; i < dim; ++i) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    members.push_back({1.0 / static_cast<double>(dim), std::move(v)});
  }
  return QuantumState::ensemble(std::move(members));
}

QuantumState random_mixed_state(int num_qubits, int rank, CounterRng& rng) {
  require(rank >= 1, "rank must be positive");
  std::vector<QuantumState::Member> members;
  double total = 0.0;
  for (int r = 0; r < rank; ++r) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double w = -std::log(u);  // Exp(1) draws give Dirichlet(1) weights
    members.push_back({w, haar_random_state(num_qubits, rng).members().front().amplitudes});
    total += w;
  }
  for (auto& m : members) m.weight /= total;
  return QuantumState::ensemble(std::move(members));
}

CVector apply_pauli(const PauliOp& p, const CVector& v) {
  const int n = p.num_qubits();
  require(v.size() == (Eigen::Index{1} << n), "Pauli and state dimensions differ");
  const std::uint64_t xm = to_basis_layout(n, p.x_bits());
  const std::uint64_t zm = to_basis_layout(n, p.z_bits());
  const int base = (p.phase() + std::popcount(p.x_bits() & p.z_bits())) & 3;
  CVector out(v.size());
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(v.size()); ++j) {
    const int ph = (base + 2 * (std::popcount(j & zm) & 1)) & 3;
    out(static_cast<Eigen::Index>(j ^ xm)) = kIPow[ph] * v(static_cast<Eigen::Index>(j));
  }
  return out;
}

double expectation(const CVector& v, const PauliOp& p) {
  require(p.is_hermitian(), "expectation requires a Hermitian Pauli");
  return v.dot(apply_pauli(p, v)).real();
}

double expectation(const QuantumState& rho, const PauliOp& p) {
  require(p.num_qubits() == rho.num_qubits(), "Pauli and state dimensions differ");
  require(p.is_hermitian(), "expectation requires a Hermitian Pauli");
  double total = 0.0;
  for (const auto& m : rho.members()) total += m.weight * expectation(m.amplitudes, p);
  return total;
}

Complex pauli_trace(const PauliOp& p, const CMatrix& a) {
  const int n = p.num_qubits();
  require(a.rows() == (Eigen::Index{1} << n) && a.cols() == a.rows(), "Pauli and matrix dimensions differ");
  const std::uint64_t xm = to_basis_layout(n, p.x_bits());
  const std::uint64_t zm = to_basis_layout(n, p.z_bits());
  const int base = (p.phase() + std::popcount(p.x_bits() & p.z_bits())) & 3;
  Complex total = 0.0;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(a.rows()); ++k) {
    const int ph = (base + 2 * (std::popcount(k & zm) & 1)) & 3;
    total += kIPow[ph] * a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ xm));
  }
  return total;
}

namespace {

void require_commuting(std::span<const PauliOp> ops, int n) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require(ops[i].num_qubits() == n, "Pauli and state dimensions differ");
    require(ops[i].is_hermitian(), "measured Paulis must be Hermitian");
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      require(commutes(ops[i], ops[j]), "measure_commuting_set requires mutually commuting operators");
  }
}

}  // namespace

std::vector<int> measure_commuting_set(const QuantumState& rho, std::span<const PauliOp> ops,
                                       CounterRng& rng) {
  require_commuting(ops, rho.num_qubits());
  CVector v = rho.draw_member(rng);
  std::vector<int> out;
  out.reserve(ops.size());
  for (const auto& p : ops) {
    const CVector pv = apply_pauli(p, v);
    const double p_plus = std::clamp((1.0 + v.dot(pv).real()) / 2.0, 0.0, 1.0);
    const int outcome = rng.uniform() < p_plus ? 1 : -1;
    v = (v + static_cast<double>(outcome) * pv) / 2.0;
    v.normalize();
    out.push_back(outcome);
  }
  return out;
}

std::uint64_t JointDistribution::sample(CounterRng& rng) const {
  return outcomes[pick_index(cumulative, rng.uniform())];
}

JointDistribution commuting_distribution(const QuantumState& rho, std::span<const PauliOp> ops) {
  require_commuting(ops, rho.num_qubits());
  require(ops.size() <= 64, "at most 64 operators per joint measurement");
  std::map<std::uint64_t, double> merged;
  for (const auto& member : rho.members()) {
    // Unnormalized projected branches; squared norms are joint probabilities.
    std::vector<std::pair<std::uint64_t, CVector>> branches;
    branches.emplace_back(0, member.amplitudes);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      std::vector<std::pair<std::uint64_t, CVector>> next;
      for (auto& [word, v] : branches) {
        const CVector pv = apply_pauli(ops[i], v);
        CVector plus = (v + pv) / 2.0;
        CVector minus = (v - pv) / 2.0;
        if (plus.squaredNorm() > kPruneTolerance) next.emplace_back(word, std::move(plus));
        if (minus.squaredNorm() > kPruneTolerance) next.emplace_back(word | (std::uint64_t{1} << i), std::move(minus));
      }
      branches = std::move(next);
    }
    for (const auto& [word, v] : branches) merged[word] += member.weight * v.squaredNorm();
  }
  JointDistribution d;
  double running = 0.0;
  for (const auto& [word, p] : merged) {
    d.outcomes.push_back(word);
    d.probabilities.push_back(p);
    running += p;
    d.cumulative.push_back(running);
  }
  return d;
}

namespace {

// Amplitudes of |a> (x) |b> in the Bell basis, indexed by the outcome word.
void accumulate_bell(const CVector& a, const CVector& b, int n, double weight, std::vector<double>& prob) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t total_qubits = 2 * static_cast<std::size_t>(n);
  std::vector<Complex> amp(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      amp[i * dim + j] = a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j));
  const double h = std::numbers::sqrt2 / 2.0;
  for (int q = 0; q < n; ++q) {
    const std::size_t c_bit = std::size_t{1} << (total_qubits - 1 - static_cast<std::size_t>(q));
    const std::size_t t_bit = std::size_t{1} << (total_qubits - 1 - static_cast<std::size_t>(n + q));
    // CNOT from copy-1 qubit q onto copy-2 qubit q.
    for (std::size_t idx = 0; idx < amp.size(); ++idx)
      if ((idx & c_bit) && !(idx & t_bit)) std::swap(amp[idx], amp[idx | t_bit]);
    // Hadamard on copy-1 qubit q.
    for (std::size_t idx = 0; idx < amp.size(); ++idx)
      if (!(idx & c_bit)) {
        const Complex x0 = amp[idx], x1 = amp[idx | c_bit];
        amp[idx] = h * (x0 + x1);
        amp[idx | c_bit] = h * (x0 - x1);
      }
  }
  for (std::size_t idx = 0; idx < amp.size(); ++idx) {
    // Dense qubit k is basis bit (2n-1-k); the outcome word stores qubit k at bit k.
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < total_qubits; ++k)
      if (idx & (std::size_t{1} << (total_qubits - 1 - k))) word |= std::uint64_t{1} << k;
    prob[word] += weight * std::norm(amp[idx]);
  }
}

}  // namespace

BellDistribution::BellDistribution(const QuantumState& rho, const QuantumState& sigma) : n_(rho.num_qubits()) {
  require(rho.num_qubits() == sigma.num_qubits(), "Bell sampling needs equal qubit counts");
  require(n_ <= kDenseStateCap, "dense cap exceeded");
  prob_.assign(std::size_t{1} << (2 * n_), 0.0);
  for (const auto& a : rho.members())
    for (const auto& b : sigma.members()) accumulate_bell(a.amplitudes, b.amplitudes, n_, a.weight * b.weight, prob_);
  cumulative_.resize(prob_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < prob_.size(); ++i) {
    running += prob_[i];
    cumulative_[i] = running;
  }
}

BellSample BellDistribution::sample(CounterRng& rng) const {
  return BellSample{n_, static_cast<std::uint64_t>(pick_index(cumulative_, rng.uniform()))};
}

std::uint64_t sample_binomial(std::uint64_t trials, double p, CounterRng& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              CounterRng& rng) {
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  double mass = 0.0;
  for (double p : probabilities) mass += p;
  std::uint64_t remaining = trials;
  std::size_t last = probabilities.size();
  for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
    if (probabilities[i] <= 0.0) continue;
    last = i;
    const double p = mass > 0.0 ? std::min(1.0, probabilities[i] / mass) : 1.0;
    const std::uint64_t c = sample_binomial(remaining, p, rng);
    counts[i] = c;
    remaining -= c;
    mass -= probabilities[i];
  }
  if (remaining > 0) {
    // Round-off left some mass unassigned; give it to the last supported outcome.
    for (std::size_t i = probabilities.size(); i-- > 0;)
      if (probabilities[i] > 0.0) {
        last = i;
        break;
      }
    require(last < probabilities.size(), "multinomial needs positive probability mass");
    counts[last] += remaining;
  }
  return counts;
}

std::vector<std::uint64_t> BellDistribution::sample_counts(std::uint64_t shots, CounterRng& rng) const {
  return sample_multinomial(shots, prob_, rng);
}

BellSample bell_sample(const QuantumState& rho, const QuantumState& sigma, CounterRng& rng) {
  require(rho.num_qubits() == sigma.num_qubits(), "Bell sampling needs equal qubit counts");
  // Draw the ensemble members first, then sample the pure product state.
  const QuantumState a = QuantumState::pure(rho.draw_member(rng));
  const QuantumState b = QuantumState::pure(sigma.draw_member(rng));
  return BellDistribution(a, b).sample(rng);
}

}  // namespace shadowtomo
