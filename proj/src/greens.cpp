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

#include "shadowtomo/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "shadowtomo/graph.hpp"

namespace shadowtomo {

namespace {

const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

constexpr double kMergeThreshold = 1e-12;

MajoranaSupport single_majorana(int a) { return MajoranaSupport{1} << a; }

}  // namespace

int SparseHamiltonian::body_order() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.degree());
  return d / 2;
}

int SparseHamiltonian::sparsity() const {
  int s = 0;
  for (int a = 0; a < 2 * n_modes; ++a) {
    int count = 0;
    for (const auto& t : terms) count += static_cast<int>((t.support >> a) & 1U);
    s = std::max(s, count);
  }
  return s;
}

void SparseHamiltonian::validate() const {
  require(n_modes >= 1 && n_modes <= kMaxModes, "Hamiltonian mode count outside [1, 32]");
  const MajoranaSupport allowed = (2 * n_modes >= 64) ? ~MajoranaSupport{0} : (MajoranaSupport{1} << (2 * n_modes)) - 1;
  for (const auto& t : terms) {
    require(t.degree() >= 2 && t.degree() % 2 == 0, "Hamiltonian terms must have even degree >= 2");
    require((t.support & ~allowed) == 0, "Hamiltonian term uses a Majorana beyond the mode count");
    require(std::abs(t.coefficient) <= 1.0, "Hamiltonian coefficients must lie in [-1, 1]");
  }
}

SparseHamiltonian SparseHamiltonian::parse(const std::string& text, int n_modes) {
  SparseHamiltonian h;
  std::istringstream in(text);
  std::string line;
  int needed = 1;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    MajoranaMonomial m = MajoranaMonomial::parse(line, n_modes);
    needed = std::max(needed, m.n_modes);
    h.terms.push_back(m);
  }
  h.n_modes = n_modes > 0 ? n_modes : needed;
  for (auto& t : h.terms) t.n_modes = h.n_modes;
  h.validate();
  return h;
}

SparseHamiltonian random_sparse_hamiltonian(int n_modes, int k, int s, int num_terms, CounterRng& rng) {
  require(k >= 1 && 2 * k <= 2 * n_modes, "body order must satisfy 1 <= 2k <= 2n");
  require(s >= 1, "sparsity must be positive");
  SparseHamiltonian h;
  h.n_modes = n_modes;
  std::vector<int> occupancy(static_cast<std::size_t>(2 * n_modes), 0);
  std::vector<int> pool(static_cast<std::size_t>(2 * n_modes));
  for (int attempt = 0; attempt < num_terms; ++attempt) {
    for (int i = 0; i < 2 * n_modes; ++i) pool[static_cast<std::size_t>(i)] = i;
    MajoranaSupport support = 0;
    for (int i = 0; i < 2 * k; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(2 * n_modes - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      support |= single_majorana(pool[static_cast<std::size_t>(i)]);
    }
    const double coefficient = 2.0 * rng.uniform() - 1.0;
    bool ok = true;
    for (const auto& t : h.terms) ok = ok && t.support != support;
    for (int a : support_indices(support)) ok = ok && occupancy[static_cast<std::size_t>(a - 1)] < s;
    if (!ok) continue;
    for (int a : support_indices(support)) ++occupancy[static_cast<std::size_t>(a - 1)];
    h.terms.push_back({n_modes, support, coefficient});
  }
  return h;
}

GreensExpansion lie_expand(const SparseHamiltonian& h, int a, int q) {
  require(q >= 0, "derivative order must be nonnegative");
  require(a >= 0 && a < 2 * h.n_modes, "Majorana index out of range");
  GreensExpansion e;
  e.a = a;
  e.q = q;
  e.terms[single_majorana(a)] = 1.0;
  for (int step = 0; step < q; ++step) {
    std::map<MajoranaSupport, double> next;
    for (const auto& [x, cx] : e.terms)
      for (const auto& t : h.terms) {
        if (monomial_commutes(t.support, x)) continue;
        // i [G_t, G_x] = 2 i G_t G_x = 2 i^(phi + 1) G(t ^ x), real since phi is odd.
        const MonomialProduct p = monomial_product(t.support, x);
        require(p.phase % 2 == 1, "internal: anticommuting Hermitian product must be anti-Hermitian");
        const double sign = (p.phase == 3) ? 1.0 : -1.0;
        next[p.support] += 2.0 * sign * t.coefficient * cx;
      }
    std::erase_if(next, [](const auto& kv) { return std::abs(kv.second) < kMergeThreshold; });
    e.terms = std::move(next);
  }
  return e;
}

double num_terms_bound(int k, int s, int q) {
  if (q == 0) return 1.0;
  return std::pow(s, q) * std::pow(2.0 * k, q - 1) * std::tgamma(static_cast<double>(q));
}

double greens_coloring_bound(int k, int s, int q, int omega) {
  const int qq = std::max(q, 1);
  return 4.0 * std::pow(s, qq) * std::pow(2.0 * k, qq + 2) * qq * qq * std::tgamma(qq + 1.0) * omega;
}

namespace {

class ExpectationCache {
 public:
  ExpectationCache(const QuantumState& rho, const FermionMapping& mapping) : rho_(rho), mapping_(mapping) {}

  double operator()(MajoranaSupport x) {
    if (x == 0) return 1.0;
    auto it = cache_.find(x);
    if (it == cache_.end()) it = cache_.emplace(x, expectation(rho_, monomial_to_pauli(x, mapping_))).first;
    return it->second;
  }

 private:
  const QuantumState& rho_;
  const FermionMapping& mapping_;
  std::map<MajoranaSupport, double> cache_;
};

template <class Lookup>
CMatrix assemble(const SparseHamiltonian& h, int q, Lookup&& value) {
  const int m = 2 * h.n_modes;
  CMatrix g = CMatrix::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    const GreensExpansion e = lie_expand(h, a, q);
    for (int b = 0; b < m; ++b) {
      Complex total = 0.0;
      for (const auto& [x, coefficient] : e.terms) {
        // Gamma(x) c_b = i^phi Gamma(x ^ e_b).
        const MonomialProduct p = monomial_product(x, single_majorana(b));
        total += Complex(0, 1) * coefficient * kIPow[p.phase] * value(p.support);
      }
      g(a, b) = total;
    }
  }
  return g;
}

}  // namespace

CMatrix greens_derivative_exact(const QuantumState& rho, const SparseHamiltonian& h, int q,
                                const FermionMapping& mapping) {
  h.validate();
  require(mapping.n_modes() == h.n_modes, "mapping and Hamiltonian mode counts differ");
  require(rho.num_qubits() == mapping.num_qubits(), "state qubit count does not match the mapping");
  ExpectationCache cache(rho, mapping);
  return assemble(h, q, cache);
}

CMatrix hamiltonian_matrix(const SparseHamiltonian& h, const FermionMapping& mapping) {
  const Eigen::Index dim = Eigen::Index{1} << mapping.num_qubits();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : h.terms) m += t.coefficient * dense_matrix(monomial_to_pauli(t.support, mapping));
  return m;
}

CMatrix greens_function_dense(const QuantumState& rho, const SparseHamiltonian& h, double t,
                              const FermionMapping& mapping) {
  const CMatrix hm = hamiltonian_matrix(h, mapping);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hm);
  const Eigen::VectorXcd phases = (Complex(0, -1) * t * es.eigenvalues().cast<Complex>()).array().exp();
  const CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();  // e^{-iHt}
  const CMatrix r = rho.density_matrix();
  const int m = 2 * h.n_modes;
  std::vector<CMatrix> c;
  for (int a = 0; a < m; ++a) c.push_back(dense_matrix(mapping.majorana(a)));
  CMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    const CMatrix ca_t = u.adjoint() * c[static_cast<std::size_t>(a)] * u;
    for (int b = 0; b < m; ++b) g(a, b) = Complex(0, 1) * (ca_t * c[static_cast<std::size_t>(b)] * r).trace();
  }
  return g;
}

GreensLearning learn_greens_derivative(const QuantumState& rho, const SparseHamiltonian& h, int q, double epsilon,
                                       std::uint64_t seed, const FermionMapping& mapping,
                                       const ProtocolConstants& c) {
  h.validate();
  require(mapping.n_modes() == h.n_modes, "mapping and Hamiltonian mode counts differ");
  require(rho.num_qubits() == mapping.num_qubits(), "state qubit count does not match the mapping");
  GreensLearning out;
  const int m = 2 * h.n_modes;
  std::map<MajoranaSupport, std::size_t> index;
  for (int a = 0; a < m; ++a) {
    const GreensExpansion e = lie_expand(h, a, q);
    out.max_terms = std::max(out.max_terms, e.terms.size());
    double weight = 0.0;
    for (const auto& [x, coefficient] : e.terms) {
      weight += std::abs(coefficient);
      for (int b = 0; b < m; ++b) {
        const MajoranaSupport y = x ^ single_majorana(b);
        if (y != 0 && !index.contains(y)) {
          index.emplace(y, out.targets.size());
          out.targets.push_back(y);
        }
      }
    }
    out.max_weight = std::max(out.max_weight, weight);
  }

  std::vector<double> learned(out.targets.size(), 0.0);
  if (!out.targets.empty() && out.max_weight > 0.0) {
    out.term_precision = std::min(epsilon / out.max_weight, 0.99);
    std::vector<PauliOp> ops;
    for (MajoranaSupport y : out.targets) ops.push_back(monomial_to_pauli(y, mapping));
    out.report = learn_two_copy_template(rho, ops, greedy_engine(), out.term_precision, seed, c);
    learned = out.report.estimates;
    out.copies = out.report.total_copies();
    std::vector<PauliOp> s_ops;
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (out.report.in_s_eps[i]) s_ops.push_back(ops[i]);
    if (!s_ops.empty()) {
      const auto cg = build_graph(std::move(s_ops));
      out.colors = greedy_color(cg.graph).num_colors;
      out.omega = max_clique(cg.graph).upper;
    }
    out.coloring_bound = greens_coloring_bound(std::max(h.body_order(), 1), std::max(h.sparsity(), 1), q,
                                               std::max(out.omega, 1));
  }
  out.estimate = assemble(h, q, [&](MajoranaSupport y) { return y == 0 ? 1.0 : learned[index.at(y)]; });
  return out;
}

}  // namespace shadowtomo
