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

#include "shadowtomo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace shadowtomo {

namespace {

std::string trim(std::string s) {
  const auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  const auto end = s.find_last_not_of(" \t\r\n");
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

int int_arg(const std::map<std::string, std::string>& kv, const std::string& key, int fallback = -1) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    require(fallback >= 0, "state generator needs " + key + "=");
    return fallback;
  }
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    require(used == it->second.size(), "");
    return v;
  } catch (const std::exception&) {
    throw Error("state generator argument " + key + "=" + it->second + " is not an integer");
  }
}

std::uint64_t seed_arg(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("seed");
  if (it == kv.end()) return 0;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw Error("state generator seed " + it->second + " is not an integer");
  }
}

QuantumState read_ket_file(const std::string& path) {
  std::vector<std::pair<std::string, Complex>> entries;
  for (const auto& line : read_lines(path)) {
    std::istringstream in(line);
    std::string label;
    double re = 0.0, im = 0.0;
    in >> label >> re;
    require(!in.fail(), "ket line \"" + line + "\" needs a basis label and an amplitude");
    if (!(in >> im)) im = 0.0;
    if (label.size() > 2 && label.front() == '|' && label.back() == '>') label = label.substr(1, label.size() - 2);
    entries.push_back({label, Complex(re, im)});
  }
  require(!entries.empty(), "ket file " + path + " has no amplitudes");
  const std::size_t n = entries.front().first.size();
  require(n >= 1 && n <= static_cast<std::size_t>(kDenseStateCap), "ket labels need 1..10 qubits");
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  for (const auto& [label, amp] : entries) {
    require(label.size() == n, "ket labels differ in length");
    std::uint64_t index = 0;
    for (char c : label) {
      require(c == '0' || c == '1', "ket label \"" + label + "\" must be a bitstring");
      index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    v(static_cast<Eigen::Index>(index)) += amp;
  }
  require(std::abs(v.norm() - 1.0) < 1e-6, "ket amplitudes are not normalized");
  v.normalize();
  return QuantumState::pure(std::move(v));
}

}  // namespace

QuantumState gaussian_state(int n_modes, const FermionMapping& mapping, CounterRng& rng) {
  require(mapping.n_modes() == n_modes, "mapping mode count differs");
  require(mapping.num_qubits() <= kDenseStateCap, "dense cap exceeded");
  const Eigen::Index dim = Eigen::Index{1} << mapping.num_qubits();
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int a = 0; a < 2 * n_modes; ++a)
    for (int b = a + 1; b < 2 * n_modes; ++b) {
      const MajoranaSupport s = (MajoranaSupport{1} << a) | (MajoranaSupport{1} << b);
      h += standard_normal(rng) * dense_matrix(monomial_to_pauli(s, mapping));
    }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  require(es.info() == Eigen::Success, "Gaussian state eigendecomposition failed");
  return QuantumState::pure(es.eigenvectors().col(0).normalized());
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos && eq > 0, "expected key=value, got \"" + token + "\"");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

QuantumState parse_state_spec(const std::string& spec) {
  const std::string s = trim(spec);
  require(!s.empty(), "empty state specification");
  const auto space = s.find(' ');
  const std::string name = s.substr(0, space);
  const std::string rest = space == std::string::npos ? "" : s.substr(space + 1);
  if (name == "product") return product_state(trim(rest));
  if (name == "ghz") return ghz_state(int_arg(parse_key_values(rest), "n"));
  if (name == "maximally_mixed") return maximally_mixed_state(int_arg(parse_key_values(rest), "n"));
  if (name == "haar_random") {
    const auto kv = parse_key_values(rest);
    CounterRng rng(seed_arg(kv));
    return haar_random_state(int_arg(kv, "n"), rng);
  }
  if (name == "random_mixed") {
    const auto kv = parse_key_values(rest);
    CounterRng rng(seed_arg(kv));
    return random_mixed_state(int_arg(kv, "n"), int_arg(kv, "rank", 2), rng);
  }
  if (name == "basis") {
    const auto kv = parse_key_values(rest);
    return basis_state(int_arg(kv, "n"), static_cast<std::uint64_t>(int_arg(kv, "index", 0)));
  }
  if (name == "gaussian") {
    const auto kv = parse_key_values(rest);
    const int n_modes = int_arg(kv, "n_modes");
    const auto it = kv.find("mapping");
    const MappingKind kind = it == kv.end() ? MappingKind::ternary_tree : parse_mapping_kind(it->second);
    CounterRng rng(seed_arg(kv));
    return gaussian_state(n_modes, make_mapping(kind, n_modes), rng);
  }
  return read_ket_file(s);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<PauliOp> parse_pauli_list(const std::vector<std::string>& lines) {
  std::vector<PauliOp> out;
  for (const auto& l : lines) out.push_back(PauliOp::parse(l));
  return out;
}

std::vector<MajoranaMonomial> parse_monomial_list(const std::vector<std::string>& lines, int n_modes) {
  std::vector<MajoranaMonomial> out;
  int needed = n_modes;
  for (const auto& l : lines) {
    out.push_back(MajoranaMonomial::parse(l, n_modes));
    needed = std::max(needed, out.back().n_modes);
  }
  for (auto& m : out) m.n_modes = needed;
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace shadowtomo
