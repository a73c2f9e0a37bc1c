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

#include "shadowtomo/fermion.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace shadowtomo {

namespace {

int hermitization_exponent(int degree) { return (degree * (degree - 1) / 2) & 3; }

std::uint64_t bits_above(int index) {
  return index >= 63 ? 0 : ~((std::uint64_t{2} << index) - 1);
}

}  // namespace

std::string MajoranaMonomial::to_string() const {
  std::ostringstream os;
  os << "G[";
  bool first = true;
  for (int a : support_indices(support)) {
    if (!first) os << ',';
    os << a;
    first = false;
  }
  os << ']';
  if (coefficient != 1.0) {
    os.precision(17);
    os << '*' << coefficient;
  }
  return os.str();
}

MajoranaMonomial MajoranaMonomial::parse(std::string_view text, int n_modes) {
  auto fail = [&](const std::string& why) {
    return Error("invalid monomial \"" + std::string(text) + "\": " + why);
  };
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos + 1 >= text.size() || text[pos] != 'G' || text[pos + 1] != '[') throw fail("expected G[");
  pos += 2;
  const std::size_t close = text.find(']', pos);
  if (close == std::string_view::npos) throw fail("missing ]");
  MajoranaSupport support = 0;
  int max_index = 0;
  std::string_view list = text.substr(pos, close - pos);
  while (!list.empty()) {
    const std::size_t comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int index = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), index);
    if (ec != std::errc() || ptr != item.data() + item.size() || index < 1 || index > 2 * kMaxModes)
      throw fail("bad Majorana index");
    const MajoranaSupport bit = MajoranaSupport{1} << (index - 1);
    if (support & bit) throw fail("repeated Majorana index");
    support |= bit;
    max_index = std::max(max_index, index);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  double coefficient = 1.0;
  std::string_view rest = text.substr(close + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty()) {
    if (rest.front() != '*') throw fail("expected *coeff");
    const std::string number(rest.substr(1));
    char* end = nullptr;
    coefficient = std::strtod(number.c_str(), &end);
    if (end == number.c_str()) throw fail("bad coefficient");
  }
  const int needed = (max_index + 1) / 2;
  if (n_modes == 0) n_modes = std::max(needed, 1);
  if (needed > n_modes) throw fail("index exceeds 2 * n_modes");
  return MajoranaMonomial{n_modes, support, coefficient};
}

MonomialProduct monomial_product(MajoranaSupport x, MajoranaSupport y) {
  // Sorting c_x c_y into ascending order costs one sign per pair (i in x, j in y, i > j);
  // repeated factors then cancel since c_j^2 = 1.
  int inversions = 0;
  for (MajoranaSupport rest = y; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(x & bits_above(j));
  }
  const MajoranaSupport z = x ^ y;
  const int phase = hermitization_exponent(std::popcount(x)) + hermitization_exponent(std::popcount(y)) +
                    2 * inversions - hermitization_exponent(std::popcount(z));
  return MonomialProduct{((phase % 4) + 4) % 4, z};
}

std::string to_string(MappingKind kind) {
  return kind == MappingKind::ternary_tree ? "ternary" : "jw";
}

MappingKind parse_mapping_kind(std::string_view text) {
  if (text == "ternary" || text == "ternary_tree") return MappingKind::ternary_tree;
  if (text == "jw" || text == "jordan_wigner") return MappingKind::jordan_wigner;
  throw Error("unknown mapping \"" + std::string(text) + "\" (expected ternary or jw)");
}

FermionMapping::FermionMapping(int n_modes, std::vector<PauliOp> majoranas, MappingKind kind)
    : n_modes_(n_modes), majoranas_(std::move(majoranas)), kind_(kind) {
  require(n_modes >= 1, "fermion mapping needs at least one mode");
  require(static_cast<int>(majoranas_.size()) == 2 * n_modes, "mapping must list 2n Majorana images");
  for (std::size_t a = 0; a < majoranas_.size(); ++a) {
    require(majoranas_[a].is_hermitian(), "Majorana image is not Hermitian");
    require(multiply(majoranas_[a], majoranas_[a]).is_identity() &&
                multiply(majoranas_[a], majoranas_[a]).phase() == 0,
            "Majorana image does not square to identity");
    for (std::size_t b = a + 1; b < majoranas_.size(); ++b)
      require(!commutes(majoranas_[a], majoranas_[b]), "Majorana images must pairwise anticommute");
  }
}

FermionMapping ternary_tree_mapping(int n_modes) {
  require(n_modes >= 1, "ternary tree mapping needs n_modes >= 1");
  require(n_modes <= kMaxModes, "too many modes for packed supports");
  const int n = n_modes;
  std::vector<PauliOp> leaves;
  leaves.reserve(static_cast<std::size_t>(2 * n + 1));
  // Depth-first walk; node ids >= n are leaves.
  struct Frame {
    int node;
    std::uint64_t x, z;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.node >= n) {
      leaves.emplace_back(n, f.x, f.z);
      continue;
    }
    const std::uint64_t bit = std::uint64_t{1} << f.node;
    // Push Z, Y, X so that X is visited first.
    stack.push_back({3 * f.node + 3, f.x, f.z | bit});
    stack.push_back({3 * f.node + 2, f.x | bit, f.z | bit});
    stack.push_back({3 * f.node + 1, f.x | bit, f.z});
  }
  leaves.pop_back();
  return FermionMapping(n_modes, std::move(leaves), MappingKind::ternary_tree);
}

FermionMapping jordan_wigner_mapping(int n_modes) {
  require(n_modes >= 1, "Jordan-Wigner mapping needs n_modes >= 1");
  require(n_modes <= kMaxModes, "too many modes for packed supports");
  std::vector<PauliOp> ops;
  for (int j = 0; j < n_modes; ++j) {
    const std::uint64_t string = (std::uint64_t{1} << j) - 1;
    const std::uint64_t bit = std::uint64_t{1} << j;
    ops.emplace_back(n_modes, bit, string);
    ops.emplace_back(n_modes, bit, string | bit);
  }
  return FermionMapping(n_modes, std::move(ops), MappingKind::jordan_wigner);
}

FermionMapping make_mapping(MappingKind kind, int n_modes) {
  return kind == MappingKind::ternary_tree ? ternary_tree_mapping(n_modes) : jordan_wigner_mapping(n_modes);
}

PauliOp monomial_to_pauli(MajoranaSupport support, const FermionMapping& mapping) {
  require(support >> (2 * mapping.n_modes()) == 0 || 2 * mapping.n_modes() >= 64,
          "monomial support exceeds the mapping's modes");
  PauliOp out = PauliOp::identity(mapping.num_qubits());
  for (MajoranaSupport rest = support; rest != 0; rest &= rest - 1)
    out = multiply(out, mapping.majorana(std::countr_zero(rest)));
  const int degree = std::popcount(support);
  out = PauliOp(out.num_qubits(), out.x_bits(), out.z_bits(), out.phase() + hermitization_exponent(degree));
  require(out.is_hermitian(), "internal: monomial image is not Hermitian");
  return out;
}

std::vector<MajoranaSupport> enumerate_degree(int n_modes, int degree) {
  const int m = 2 * n_modes;
  require(degree >= 0 && degree <= m, "degree must lie in [0, 2n]");
  require(m <= 64, "too many modes for packed supports");
  std::vector<MajoranaSupport> out;
  std::vector<int> idx(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    MajoranaSupport s = 0;
    for (int i : idx) s |= MajoranaSupport{1} << i;
    out.push_back(s);
    int i = degree - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - degree + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < degree; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<MajoranaMonomial> enumerate_kbody(int n_modes, int k) {
  require(k >= 1 && 2 * k <= 2 * n_modes, "enumerate_kbody requires 1 <= 2k <= 2n");
  std::vector<MajoranaMonomial> out;
  for (MajoranaSupport s : enumerate_degree(n_modes, 2 * k)) out.push_back({n_modes, s, 1.0});
  return out;
}

std::vector<int> support_indices(MajoranaSupport support) {
  std::vector<int> out;
  for (MajoranaSupport rest = support; rest != 0; rest &= rest - 1)
    out.push_back(std::countr_zero(rest) + 1);
  return out;
}

}  // namespace shadowtomo
