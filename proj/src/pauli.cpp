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

#include "shadowtomo/pauli.hpp"

#include <algorithm>
#include <numeric>

namespace shadowtomo {

namespace {

std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

PauliOp::PauliOp(int num_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int phase)
    : n_(num_qubits), x_(x_bits), z_(z_bits), phase_(((phase % 4) + 4) % 4) {
  require(num_qubits >= 0 && num_qubits <= kMaxPauliQubits,
          "qubit count " + std::to_string(num_qubits) + " outside [0, 64]");
  require(((x_bits | z_bits) & ~low_mask(num_qubits)) == 0, "Pauli bits set beyond qubit count");
}

PauliOp PauliOp::single(int num_qubits, int qubit, char which) {
  require(qubit >= 0 && qubit < num_qubits, "qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (which) {
    case 'I': return identity(num_qubits);
    case 'X': return PauliOp(num_qubits, bit, 0);
    case 'Y': return PauliOp(num_qubits, bit, bit);
    case 'Z': return PauliOp(num_qubits, 0, bit);
    default: throw Error(std::string("unknown Pauli letter '") + which + "'");
  }
}

PauliOp PauliOp::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  const std::string_view body = text.substr(pos);
  require(!body.empty(), "empty Pauli string");
  require(static_cast<int>(body.size()) <= kMaxPauliQubits, "Pauli string longer than 64 qubits");
  std::uint64_t x = 0, z = 0;
  for (std::size_t q = 0; q < body.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (body[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw Error("invalid character '" + std::string(1, body[q]) + "' in Pauli string \"" +
                    std::string(text) + "\"");
    }
  }
  return PauliOp(static_cast<int>(body.size()), x, z, phase);
}

int PauliOp::sign() const {
  require(is_hermitian(), "sign() of a non-Hermitian Pauli");
  return phase_ == 0 ? 1 : -1;
}

char PauliOp::letter(int qubit) const {
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliOp::to_string() const {
  static const char* kPrefix[4] = {"", "+i", "-", "-i"};
  std::string out = kPrefix[phase_];
  out.reserve(out.size() + static_cast<std::size_t>(n_));
  for (int q = 0; q < n_; ++q) out.push_back(letter(q));
  return out;
}

bool commutes(const PauliOp& p, const PauliOp& q) {
  require(p.num_qubits() == q.num_qubits(), "Pauli dimension mismatch");
  const int parity = std::popcount((p.x_bits() & q.z_bits()) ^ (p.z_bits() & q.x_bits())) & 1;
  return parity == 0;
}

PauliOp multiply(const PauliOp& p, const PauliOp& q) {
  require(p.num_qubits() == q.num_qubits(), "Pauli dimension mismatch");
  const std::uint64_t x1 = p.x_bits(), z1 = p.z_bits(), x2 = q.x_bits(), z2 = q.z_bits();
  const std::uint64_t px = x1 & ~z1, py = x1 & z1, pz = ~x1 & z1;
  const std::uint64_t qx = x2 & ~z2, qy = x2 & z2, qz = ~x2 & z2;
  // XY = iZ, YZ = iX, ZX = iY and the reversed products carry -i.
  const std::uint64_t plus = (px & qy) | (py & qz) | (pz & qx);
  const std::uint64_t minus = (py & qx) | (pz & qy) | (px & qz);
  const int phase = p.phase() + q.phase() + std::popcount(plus) - std::popcount(minus);
  return PauliOp(p.num_qubits(), x1 ^ x2, z1 ^ z2, phase);
}

std::uint64_t to_basis_layout(int num_qubits, std::uint64_t qubit_bits) {
  std::uint64_t out = 0;
  for (int q = 0; q < num_qubits; ++q)
    if ((qubit_bits >> q) & 1U) out |= basis_mask(num_qubits, q);
  return out;
}

CMatrix dense_matrix(const PauliOp& p) {
  const int n = p.num_qubits();
  if (n > kDenseOperatorCap)
    throw Error("dense cap exceeded: " + std::to_string(n) + " qubits > " +
                std::to_string(kDenseOperatorCap));
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t xm = to_basis_layout(n, p.x_bits());
  const std::uint64_t zm = to_basis_layout(n, p.z_bits());
  const int base = (p.phase() + std::popcount(p.x_bits() & p.z_bits())) & 3;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t j = 0; j < dim; ++j) {
    const int ph = (base + 2 * (std::popcount(j & zm) & 1)) & 3;
    m(static_cast<Eigen::Index>(j ^ xm), static_cast<Eigen::Index>(j)) = kIPow[ph];
  }
  return m;
}

std::vector<PauliOp> enumerate_local(int num_qubits, int k) {
  require(k >= 0 && k <= num_qubits, "enumerate_local requires 0 <= k <= n");
  std::vector<PauliOp> out;
  std::vector<int> support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), 0);
  while (true) {
    // All 3^k letter assignments on this support.
    std::vector<int> letters(static_cast<std::size_t>(k), 0);
    while (true) {
      std::uint64_t x = 0, z = 0;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << support[static_cast<std::size_t>(i)];
        const int l = letters[static_cast<std::size_t>(i)];
        if (l == 0 || l == 1) x |= bit;  // X, Y
        if (l == 1 || l == 2) z |= bit;  // Y, Z
      }
      out.emplace_back(num_qubits, x, z);
      int i = 0;
      while (i < k && ++letters[static_cast<std::size_t>(i)] == 3) letters[static_cast<std::size_t>(i++)] = 0;
      if (i == k) break;
    }
    int i = k - 1;
    while (i >= 0 && support[static_cast<std::size_t>(i)] == num_qubits - k + i) --i;
    if (i < 0) break;
    ++support[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PauliOp> enumerate_all(int num_qubits) {
  require(num_qubits >= 0 && num_qubits <= 16, "enumerate_all is limited to 16 qubits");
  std::vector<PauliOp> out;
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  out.reserve(static_cast<std::size_t>(dim * dim));
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z) out.emplace_back(num_qubits, x, z);
  return out;
}

}  // namespace shadowtomo
