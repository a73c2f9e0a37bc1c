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

#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dense_oracle.hpp"
#include "shadowtomo/compression.hpp"
#include "shadowtomo/fermion.hpp"
#include "shadowtomo/fractional.hpp"
#include "shadowtomo/graph.hpp"
#include "shadowtomo/greens.hpp"
#include "shadowtomo/io.hpp"
#include "shadowtomo/mmw.hpp"
#include "shadowtomo/protocols.hpp"

namespace shadowtomo::acceptance {
namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
};

std::vector<PauliOp> non_identity(int n) {
  std::vector<PauliOp> out;
  for (const auto& p : enumerate_all(n))
    if (!p.is_identity()) out.push_back(p);
  return out;
}

std::vector<std::size_t> random_subset(std::size_t m, std::size_t lo, std::size_t hi, CounterRng& rng) {
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::shuffle(all.begin(), all.end(), rng);
  const std::size_t size = lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
  all.resize(std::min(size, m));
  std::sort(all.begin(), all.end());
  return all;
}

double max_error(const EstimationReport& r, const QuantumState& rho) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.operators.size(); ++i)
    worst = std::max(worst, std::abs(r.estimates[i] - expectation(rho, r.operators[i])));
  return worst;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

void algebra_oracle(Outcome& out) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto ops = enumerate_all(n);
    std::vector<CMatrix> dense;
    for (const auto& p : ops) dense.push_back(oracle::pauli(p));
    for (std::size_t i = 0; i < ops.size(); ++i)
      for (std::size_t j = 0; j < ops.size(); ++j) {
        const CMatrix prod = dense[i] * dense[j];
        worst = std::max(worst, oracle::max_abs(oracle::pauli(multiply(ops[i], ops[j])) - prod));
        const bool dense_commutes = oracle::max_abs(prod - dense[j] * dense[i]) <= 1e-9;
        if (dense_commutes != commutes(ops[i], ops[j])) out.passed = false;
        ++pairs;
      }
  }
  std::size_t mpairs = 0;
  for (int modes = 1; modes <= 3; ++modes)
    for (MappingKind kind : {MappingKind::jordan_wigner, MappingKind::ternary_tree}) {
      const FermionMapping map = make_mapping(kind, modes);
      const MajoranaSupport count = MajoranaSupport{1} << (2 * modes);
      std::vector<CMatrix> dense;
      for (MajoranaSupport x = 0; x < count; ++x) dense.push_back(oracle::pauli(monomial_to_pauli(x, map)));
      for (MajoranaSupport x = 0; x < count; ++x)
        for (MajoranaSupport y = 0; y < count; ++y) {
          const CMatrix prod = dense[x] * dense[y];
          const MonomialProduct mp = monomial_product(x, y);
          const Complex ph = std::pow(Complex(0, 1), mp.phase);
          worst = std::max(worst, oracle::max_abs(ph * dense[mp.support] - prod));
          const bool dense_commutes = oracle::max_abs(prod - dense[y] * dense[x]) <= 1e-9;
          if (dense_commutes != monomial_commutes(x, y)) out.passed = false;
          ++mpairs;
        }
    }
  if (worst > 1e-9) out.passed = false;
  out.detail << pairs << " Pauli pairs, " << mpairs << " Majorana pairs, max deviation " << worst;
}

void uncertainty(Outcome& out) {
  CounterRng rng(0xC2);
  double worst = 0.0;
  std::size_t subsets = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4;
    const int rank = 1 + static_cast<int>(rng.below(1U << n));
    const CMatrix rho = oracle::random_density(n, rank, rng);
    auto ops = non_identity(n);
    for (int rep = 0; rep < 4; ++rep) {
      std::shuffle(ops.begin(), ops.end(), rng);
      std::vector<PauliOp> chosen;
      for (const auto& p : ops)
        if (std::all_of(chosen.begin(), chosen.end(), [&](const PauliOp& c) { return !commutes(c, p); }))
          chosen.push_back(p);
      double total = 0.0;
      for (const auto& p : chosen) {
        const double e = pauli_trace(p, rho).real();
        total += e * e;
      }
      worst = std::max(worst, total);
      ++subsets;
    }
  }
  if (worst > 1 + 1e-9) out.passed = false;
  out.detail << subsets << " maximal anticommuting sets over 1000 states, max sum " << worst;
}

void nfs_gyarfas(Outcome& out) {
  Graph c5(5);
  for (std::size_t i = 0; i < 5; ++i) c5.add_edge(i, (i + 1) % 5);
  const NfsTree t = nfs_tree(c5, 0);
  const bool shape = t.children[0] == std::vector<std::size_t>{1, 4} && t.children[1] == std::vector<std::size_t>{2} &&
                     t.children[2] == std::vector<std::size_t>{3} && t.children[3].empty() &&
                     t.children[4].empty() && t.depth() == 3;
  if (!shape) out.passed = false;
  struct Family {
    Graph graph;
    int ell;
  };
  std::vector<Family> families;
  families.push_back({build_graph(non_identity(3)).graph, longest_induced_path_bound(3)});
  families.push_back({majorana_graph(enumerate_degree(4, 4)), longest_induced_path_bound(4)});
  CounterRng rng(0xC3);
  int improper = 0, over = 0, trials = 0;
  double worst_ratio = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f)
    for (int trial = 0; trial < 200; ++trial) {
      const auto verts = random_subset(families[f].graph.size(), 4, families[f].graph.size(), rng);
      const Graph g = families[f].graph.induced(verts);
      const CliqueResult omega = max_clique(g);
      if (!omega.exact) out.passed = false;
      const Coloring col = gyarfas_color(g, families[f].ell);
      if (!is_proper(g, col)) ++improper;
      const double bound = std::pow(families[f].ell, omega.lower - 1);
      if (col.num_colors > bound) ++over;
      worst_ratio = std::max(worst_ratio, col.num_colors / bound);
      ++trials;
    }
  if (improper || over) out.passed = false;
  out.detail << "C5 tree " << (shape ? "matches" : "differs") << "; " << trials << " subgraphs, " << improper
             << " improper, " << over << " over bound, max colors/bound " << worst_ratio;
}

void misra_gries(Outcome& out) {
  const auto all = enumerate_degree(8, 2);
  CounterRng rng(0xC4);
  int bad = 0, inexact = 0, max_colors = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto idx = random_subset(all.size(), 1, all.size(), rng);
    std::vector<MajoranaSupport> s;
    for (std::size_t i : idx) s.push_back(all[i]);
    const Graph g = majorana_graph(s);
    const CliqueResult omega = max_clique(g);
    if (!omega.exact) ++inexact;
    const Coloring col = misra_gries_1body(s);
    if (!is_proper(g, col) || col.num_colors > omega.lower + 1) ++bad;
    max_colors = std::max(max_colors, col.num_colors);
  }
  if (bad || inexact) out.passed = false;
  out.detail << "200 subsets of F1(8), " << bad << " violations, " << inexact << " inexact cliques, max colors "
             << max_colors;
}

void kbody_coloring(Outcome& out) {
  CounterRng rng(0xC5);
  int not_independent = 0, under = 0, sets = 0;
  double worst_margin = 1e9;
  for (int modes = 2; modes <= 4; ++modes)
    for (int rep = 0; rep < 4; ++rep) {
      const auto all = enumerate_degree(modes, 4);
      const auto idx = rep == 0 ? random_subset(all.size(), all.size(), all.size(), rng)
                                : random_subset(all.size(), 1, all.size(), rng);
      std::vector<MajoranaSupport> s;
      for (std::size_t i : idx) s.push_back(all[i]);
      const FractionalColoring fc = kbody_fractional_coloring(s);
      const int samples = 10000;
      std::vector<int> hits(s.size(), 0);
      for (int k = 0; k < samples; ++k) {
        const VertexSet set = fc.sample(rng);
        for (std::size_t a = 0; a < set.size(); ++a) {
          ++hits[set[a]];
          for (std::size_t b = a + 1; b < set.size(); ++b)
            if (!monomial_commutes(s[set[a]], s[set[b]])) ++not_independent;
        }
      }
      const double p = 1.0 / fc.size_bound;
      const double sigma = std::sqrt(p * (1 - p) / samples);
      for (int h : hits) {
        const double margin = static_cast<double>(h) / samples - (p - 3 * sigma);
        worst_margin = std::min(worst_margin, margin);
        if (margin < 0) ++under;
      }
      ++sets;
    }
  if (not_independent || under) out.passed = false;
  out.detail << sets << " sets x 1e4 samples, " << not_independent << " anticommuting pairs, " << under
             << " vertices under 1/f_r - 3 sigma, min margin " << worst_margin;
}

void clique_bound(Outcome& out) {
  const auto ops = non_identity(3);
  int ok = 0, runs = 0, worst = 0;
  for (double eps : {0.3, 0.5})
    for (int trial = 0; trial < 50; ++trial) {
      CounterRng rng = CounterRng(0xC6).stream(static_cast<std::uint64_t>(runs));
      const QuantumState rho = haar_random_state(3, rng);
      const MagnitudeTable mt = learn_magnitudes(rho, ops, eps, 0.01, rng);
      const int omega = clique_audit(mt);
      worst = std::max(worst, omega);
      if (omega <= 4 / (eps * eps)) ++ok;
      ++runs;
    }
  if (ok < 99) out.passed = false;
  out.detail << ok << "/" << runs << " runs within 4/eps^2, largest clique " << worst;
}

void mmw_exact(Outcome& out) {
  int good = 0, runs = 0;
  double worst_regret_ratio = 0.0;
  int max_iters = 0;
  for (double eps : {0.3, 0.5})
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 3;
      CounterRng rng = CounterRng(0xC7).stream(static_cast<std::uint64_t>(runs));
      const QuantumState rho = trial % 2 ? haar_random_state(n, rng) : random_mixed_state(n, 2, rng);
      std::vector<PauliOp> ops;
      std::vector<double> u;
      for (const auto& p : non_identity(n)) {
        ops.push_back(p);
        u.push_back(std::abs(expectation(rho, p)));
      }
      const MmwConfig cfg = MmwConfig::make(n, eps);
      const MmwResult r = compute_mimicking_state(ops, u, cfg, [&](const PauliOp& p) { return exact_sign(p, rho); });
      const double regret = regret_audit(r.iterates);
      const double ratio = regret / (2 * std::sqrt(n * static_cast<double>(cfg.T)));
      worst_regret_ratio = std::max(worst_regret_ratio, ratio);
      max_iters = std::max(max_iters, r.iterations);
      if (r.converged && r.iterations < cfg.T && satisfies_mimicking(r.sigma, ops, u, eps) && ratio <= 1.0) ++good;
      ++runs;
    }
  if (good != runs) out.passed = false;
  out.detail << good << "/" << runs << " runs converged and mimicking, max iterations " << max_iters
             << ", max regret/(2 sqrt(nT)) " << worst_regret_ratio;
}

std::uint64_t bell_copies(const EstimationReport& r) {
  return r.stage_copies("bell_magnitudes") + r.stage_copies("bell_signs");
}

void all_paulis(Outcome& out) {
  int good = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng = CounterRng(0xC8).stream(static_cast<std::uint64_t>(trial));
    const QuantumState rho = haar_random_state(3, rng);
    const EstimationReport r = learn_all_paulis(rho, 0.4, 1000 + static_cast<std::uint64_t>(trial));
    const double err = max_error(r, rho);
    worst = std::max(worst, err);
    if (err <= 0.4) ++good;
  }
  std::vector<double> ns, copies;
  bool grows = true;
  for (int n = 2; n <= 5; ++n) {
    CounterRng rng = CounterRng(0xC8).stream("scaling").stream(static_cast<std::uint64_t>(n));
    const QuantumState rho = haar_random_state(n, rng);
    const EstimationReport r = learn_all_paulis(rho, 0.4, 77);
    ns.push_back(n);
    copies.push_back(static_cast<double>(bell_copies(r)));
    if (copies.size() > 1 && copies.back() <= copies[copies.size() - 2]) grows = false;
  }
  const double slope = loglog_slope(ns, copies);
  if (good < 95 || !grows || slope > 1.5) out.passed = false;
  out.detail << good << "/100 trials within eps (worst " << worst << "); Bell ledger n=2..5:";
  for (double c : copies) out.detail << " " << static_cast<std::uint64_t>(c);
  out.detail << ", log-log slope " << slope;
}

void fermionic(Outcome& out) {
  const double eps = 0.3;
  std::ostringstream per_size;
  int total_good = 0, total = 0;
  double worst_chi = 0.0;
  for (int modes : {4, 6, 8}) {
    int good = 0;
    const FermionMapping map = ternary_tree_mapping(modes);
    for (int trial = 0; trial < 100; ++trial) {
      CounterRng rng = CounterRng(0xC9).stream(static_cast<std::uint64_t>(modes * 1000 + trial));
      const QuantumState rho = gaussian_state(modes, map, rng);
      const EstimationReport r = learn_fermionic(rho, modes, 1, MappingKind::ternary_tree, eps,
                                                 static_cast<std::uint64_t>(modes * 1000 + trial));
      if (r.operators.size() != static_cast<std::size_t>(modes * (2 * modes - 1))) out.passed = false;
      if (max_error(r, rho) <= eps) ++good;
      const auto it = r.diagnostics.find("size_chi");
      const double chi = it == r.diagnostics.end() ? 1.0 : it->second;
      worst_chi = std::max(worst_chi, chi);
      if (chi > 4 / (eps * eps) + 1) out.passed = false;
    }
    if (good < 95) out.passed = false;
    per_size << " n=" << modes << ":" << good << "/100";
    total_good += good;
    total += 100;
  }
  out.detail << "within eps" << per_size.str() << "; max stage-2 coloring size " << worst_chi << " (bound "
             << 4 / (eps * eps) + 1 << ")";
}

void compression(Outcome& out) {
  bool exact = true, roundtrip = true;
  std::vector<double> ratios;
  for (int n = 2; n <= 5; ++n) {
    CounterRng rng = CounterRng(0xCA).stream(static_cast<std::uint64_t>(n));
    const QuantumState rho = haar_random_state(n, rng);
    const auto targets = enumerate_local(n, 2);
    CompressedRep rep;
    const EstimationReport r = learn_two_copy_template(rho, targets, greedy_engine(), 0.5, 500 + n, {}, &rep);
    const auto bytes = serialize(rep);
    const CompressedRep back = deserialize(bytes);
    if (!(back == rep) || serialize(back) != bytes) roundtrip = false;
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (query(back, targets[i]).estimate != r.estimates[i]) exact = false;
    ratios.push_back(8.0 * static_cast<double>(bytes.size()) / reference_bits(rep));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *hi / *lo;
  if (!exact || !roundtrip || spread > 2.0) out.passed = false;
  out.detail << "queries " << (exact ? "exact" : "differ") << ", round trip " << (roundtrip ? "bit-exact" : "broken")
             << ", size/reference n=2..5:";
  for (double r : ratios) out.detail << " " << r;
  out.detail << " (spread " << spread << ")";
}

void greens(Outcome& out) {
  CounterRng rng(0xCB);
  double worst = 0.0;
  int expansions = 0;
  for (int modes = 1; modes <= 4; ++modes)
    for (MappingKind kind : {MappingKind::jordan_wigner, MappingKind::ternary_tree}) {
      const FermionMapping map = make_mapping(kind, modes);
      for (int rep = 0; rep < 3; ++rep) {
        const int k = modes >= 2 ? 1 + static_cast<int>(rng.below(2)) : 1;
        const SparseHamiltonian h = random_sparse_hamiltonian(modes, k, 3, 2 * modes + 2, rng);
        const CMatrix hm = hamiltonian_matrix(h, map);
        for (int a = 0; a < 2 * modes; ++a) {
          CMatrix nested = oracle::pauli(map.majorana(a));
          for (int q = 0; q <= 3; ++q) {
            if (q > 0) nested = Complex(0, 1) * (hm * nested - nested * hm);
            const GreensExpansion g = lie_expand(h, a, q);
            CMatrix sum = CMatrix::Zero(hm.rows(), hm.cols());
            for (const auto& [support, coeff] : g.terms) sum += coeff * oracle::pauli(monomial_to_pauli(support, map));
            worst = std::max(worst, oracle::max_abs(sum - nested));
            ++expansions;
          }
        }
      }
    }
  int count_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 2;
    const int s = 1 + (trial / 2) % 3;
    const int modes = 3 + trial % 4;
    const SparseHamiltonian h = random_sparse_hamiltonian(modes, k, s, 3 * modes, rng);
    for (int q = 0; q <= 3; ++q)
      for (int a = 0; a < 2 * modes; ++a)
        if (static_cast<double>(lie_expand(h, a, q).terms.size()) >
            num_terms_bound(h.body_order(), std::max(h.sparsity(), 1), q) + 1e-9)
          ++count_violations;
  }
  int good = 0;
  const double eps = 0.3;
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng trng = CounterRng(0xCB).stream(static_cast<std::uint64_t>(trial));
    const int modes = 2 + trial % 2;
    const int q = trial % 2 == 0 ? 1 : 0;
    const FermionMapping map = jordan_wigner_mapping(modes);
    const SparseHamiltonian h = random_sparse_hamiltonian(modes, 1, 2, modes, trng);
    const QuantumState rho = random_mixed_state(map.num_qubits(), 2, trng);
    const GreensLearning gl = learn_greens_derivative(rho, h, q, eps, 9000 + static_cast<std::uint64_t>(trial), map);
    if (oracle::max_abs(gl.estimate - greens_derivative_exact(rho, h, q, map)) <= eps) ++good;
  }
  if (worst > 1e-9 || count_violations || good < 95) out.passed = false;
  out.detail << expansions << " expansions, max deviation " << worst << "; " << count_violations
             << " term-count violations; " << good << "/100 learned derivatives within eps";
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  void (*run)(Outcome&);
};

constexpr Criterion kCriteria[] = {
    {1, "algebra-oracle", 60, algebra_oracle},  {2, "uncertainty", 60, uncertainty},
    {3, "nfs-gyarfas", 120, nfs_gyarfas},       {4, "misra-gries", 60, misra_gries},
    {5, "kbody-coloring", 300, kbody_coloring}, {6, "clique-bound", 300, clique_bound},
    {7, "mmw", 600, mmw_exact},                 {8, "all-paulis", 1800, all_paulis},
    {9, "fermionic-1body", 1200, fermionic},    {10, "compression", 300, compression},
    {11, "greens", 1200, greens},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (const Criterion& c : kCriteria) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << "exception: " << e.what();
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.budget_seconds = c.budget_seconds;
    r.detail = out.detail.str();
    r.passed = out.passed && r.seconds <= c.budget_seconds;
    if (out.passed && !r.passed) r.detail += "; over runtime budget";
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s.precision(3);
  s << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  (" << r.seconds << " s of "
    << r.budget_seconds << " s)  " << r.detail;
  return s.str();
}

}  // namespace shadowtomo::acceptance
