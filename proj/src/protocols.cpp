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

#include "shadowtomo/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shadowtomo/graph.hpp"

namespace shadowtomo {

std::uint64_t EstimationReport::total_copies() const {
  std::uint64_t total = 0;
  for (const auto& s : ledger) total += s.copies;
  return total;
}

std::uint64_t EstimationReport::stage_copies(std::string_view stage) const {
  for (const auto& s : ledger)
    if (s.stage == stage) return s.copies;
  return 0;
}

double median_of_means(std::span<const BatchTally> batches) {
  if (batches.empty()) return 0.0;
  std::vector<double> means;
  means.reserve(batches.size());
  for (const auto& b : batches)
    means.push_back(b.count == 0 ? 0.0 : static_cast<double>(b.sum) / static_cast<double>(b.count));
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  const double m = (means.size() % 2 == 1) ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
  return std::clamp(m, -1.0, 1.0);
}

double magnitude_from_sum(std::int64_t sign_sum, std::uint64_t shots) {
  if (shots == 0) return 0.0;
  return std::sqrt(std::max(0.0, static_cast<double>(sign_sum) / static_cast<double>(shots)));
}

std::int64_t bell_sign_sum(const BellRecord& record, int num_qubits, const PauliOp& p) {
  std::int64_t total = 0;
  for (const auto& [outcome, count] : record.counts) {
    const int s = sign_of(p, BellSample{num_qubits, outcome});
    total += s * static_cast<std::int64_t>(count);
  }
  return total;
}

std::uint64_t SingleCopyRecord::total_shots() const {
  std::uint64_t total = 0;
  for (const auto& s : shots) total += s.count;
  return total;
}

std::uint32_t SingleCopyRecord::intern(std::vector<PauliOp> basis) {
  for (std::size_t i = 0; i < bases.size(); ++i)
    if (bases[i] == basis) return static_cast<std::uint32_t>(i);
  bases.push_back(std::move(basis));
  return static_cast<std::uint32_t>(bases.size() - 1);
}

RecordEstimator::RecordEstimator(const TwoCopyRecord& record) : record_(record) {
  for (std::size_t i = 0; i < record.targets.size(); ++i) target_index_.emplace(record.targets[i].unsigned_part(), i);
  const auto& single = record.single;
  tallies_.assign(record.targets.size(), std::vector<BatchTally>(single.num_batches));
  // Per basis: target index and relative sign of each member.
  std::vector<std::vector<std::pair<std::size_t, int>>> members(single.bases.size());
  for (std::size_t b = 0; b < single.bases.size(); ++b)
    for (const auto& p : single.bases[b]) {
      const auto it = target_index_.find(p.unsigned_part());
      require(it != target_index_.end(), "record basis contains a Pauli outside the target set");
      members[b].push_back({it->second, p.sign() * record.targets[it->second].sign()});
    }
  for (const ShotRecord& shot : single.shots) {
    require(shot.batch < single.num_batches, "record shot references an unknown batch");
    require(shot.basis < members.size(), "record shot references an unknown basis");
    const auto& mem = members[shot.basis];
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const std::int64_t outcome = ((shot.outcomes >> k) & 1U) ? -1 : 1;
      BatchTally& t = tallies_[mem[k].first][shot.batch];
      t.sum += outcome * mem[k].second * static_cast<std::int64_t>(shot.count);
      t.count += shot.count;
    }
  }
}

RecordEstimator::Answer RecordEstimator::query(const PauliOp& p) const {
  require(p.num_qubits() == record_.num_qubits, "query Pauli has the wrong qubit count");
  require(p.is_hermitian(), "query Pauli must be Hermitian");
  Answer a;
  if (p.is_identity()) {
    a.estimate = p.sign();
    a.in_s_eps = true;
    a.magnitude = 1.0;
    return a;
  }
  const auto it = target_index_.find(p.unsigned_part());
  a.extrapolated = it == target_index_.end();
  a.magnitude = magnitude_from_sum(bell_sign_sum(record_.bell, record_.num_qubits, p), record_.bell.shots);
  a.in_s_eps = a.magnitude >= 0.75 * record_.epsilon;
  if (!a.in_s_eps || a.extrapolated) return a;
  const auto& batches = tallies_[it->second];
  for (const auto& b : batches) a.count += b.count;
  a.estimate = median_of_means(batches) * p.sign() * record_.targets[it->second].sign();
  return a;
}

SingleCopyPlan single_copy_plan(double size_chi, std::size_t set_size, double epsilon, double delta_fail,
                                const ProtocolConstants& c) {
  require(size_chi >= 1.0, "fractional coloring size must be at least 1");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(delta_fail > 0.0 && delta_fail < 1.0, "failure probability must lie in (0, 1)");
  SingleCopyPlan plan;
  plan.shots_per_batch =
      static_cast<std::uint64_t>(std::ceil(100.0 * c.batch_constant * size_chi / (epsilon * epsilon) - 1e-9));
  const double l = std::ceil(c.median_constant * std::log(static_cast<double>(std::max<std::size_t>(set_size, 1)) /
                                                          delta_fail));
  plan.num_batches = static_cast<std::uint32_t>(std::max(1.0, l));
  return plan;
}

constexpr double kSamplerDrawCap = 1e9;

EstimationReport learn_single_copy_fractional(const QuantumState& rho, std::span<const PauliOp> ops,
                                              const FractionalColoring& fc, double epsilon, double delta_fail,
                                              CounterRng& rng, const ProtocolConstants& c,
                                              SingleCopyRecord* record) {
  require(fc.num_vertices == ops.size(), "fractional coloring does not match the operator set");
  require(fc.size_chi >= 1.0, "fractional coloring size must be at least 1");
  for (const auto& p : ops) require(p.num_qubits() == rho.num_qubits(), "Pauli and state dimensions differ");
  const SingleCopyPlan plan = single_copy_plan(fc.size_chi, ops.size(), epsilon, delta_fail, c);
  if (!fc.explicit_distribution) {
    const double draws = static_cast<double>(plan.shots_per_batch) * plan.num_batches;
    require(draws <= kSamplerDrawCap, "single-copy stage needs " + std::to_string(static_cast<std::uint64_t>(draws)) +
                                          " independent-set draws from the " + fc.engine +
                                          " sampler, above the cap of 1e9");
  }

  struct CachedBasis {
    std::uint32_t id = 0;
    JointDistribution dist;
  };
  std::map<VertexSet, CachedBasis> cache;
  SingleCopyRecord local;
  SingleCopyRecord& rec = record ? *record : local;
  rec = SingleCopyRecord{};
  rec.num_batches = plan.num_batches;
  rec.shots_per_batch = plan.shots_per_batch;

  // Each batch draws its multiset of independent sets, then the joint outcome counts of
  // each set; this has the law of plan.shots_per_batch independent shots.
  std::vector<std::vector<BatchTally>> tallies(ops.size(), std::vector<BatchTally>(plan.num_batches));
  for (std::uint32_t j = 0; j < plan.num_batches; ++j) {
    std::map<VertexSet, std::uint64_t> set_counts;
    if (fc.explicit_distribution) {
      const auto& dist = *fc.explicit_distribution;
      std::vector<double> probs;
      for (const auto& ws : dist) probs.push_back(ws.probability);
      const auto counts = sample_multinomial(plan.shots_per_batch, probs, rng);
      for (std::size_t i = 0; i < dist.size(); ++i)
        if (counts[i] > 0) set_counts[dist[i].members] += counts[i];
    } else {
      for (std::uint64_t s = 0; s < plan.shots_per_batch; ++s) ++set_counts[fc.sample(rng)];
    }
    for (const auto& [set, count] : set_counts) {
      auto it = cache.find(set);
      if (it == cache.end()) {
        std::vector<PauliOp> basis;
        for (std::uint32_t v : set) basis.push_back(ops[v]);
        CachedBasis cb;
        cb.dist = commuting_distribution(rho, basis);
        cb.id = rec.intern(std::move(basis));
        it = cache.emplace(set, std::move(cb)).first;
      }
      const JointDistribution& jd = it->second.dist;
      const auto outcome_counts = sample_multinomial(count, jd.probabilities, rng);
      for (std::size_t o = 0; o < outcome_counts.size(); ++o) {
        const std::uint64_t hits = outcome_counts[o];
        if (hits == 0) continue;
        const std::uint64_t outcome = jd.outcomes[o];
        rec.shots.push_back({j, it->second.id, outcome, hits});
        for (std::size_t k = 0; k < set.size(); ++k) {
          BatchTally& t = tallies[set[k]][j];
          t.sum += (((outcome >> k) & 1U) ? -1 : 1) * static_cast<std::int64_t>(hits);
          t.count += hits;
        }
      }
    }
  }

  EstimationReport report;
  report.operators.assign(ops.begin(), ops.end());
  report.epsilon = epsilon;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    report.labels.push_back(ops[i].to_string());
    report.estimates.push_back(median_of_means(tallies[i]));
    std::uint64_t n = 0;
    for (const auto& t : tallies[i]) n += t.count;
    report.counts.push_back(n);
    report.in_s_eps.push_back(true);
  }
  report.ledger.push_back({"single_copy", plan.num_batches * plan.shots_per_batch});
  report.diagnostics["size_chi"] = fc.size_chi;
  report.diagnostics["shots_per_batch"] = static_cast<double>(plan.shots_per_batch);
  report.diagnostics["num_batches"] = plan.num_batches;
  report.diagnostics["distinct_bases"] = static_cast<double>(cache.size());
  return report;
}

std::uint64_t bell_shot_count(std::size_t set_size, double epsilon, double delta_fail, const ProtocolConstants& c) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(delta_fail > 0.0 && delta_fail < 1.0, "failure probability must lie in (0, 1)");
  const double accuracy = epsilon * epsilon / 16.0;
  const double m = c.bell_constant * std::log(2.0 * static_cast<double>(std::max<std::size_t>(set_size, 1)) /
                                              delta_fail) / (accuracy * accuracy);
  return static_cast<std::uint64_t>(std::ceil(m));
}

MagnitudeTable learn_magnitudes(const QuantumState& rho, std::span<const PauliOp> ops, double epsilon,
                                double delta_fail, CounterRng& rng, const ProtocolConstants& c,
                                BellRecord* record) {
  for (const auto& p : ops) require(p.num_qubits() == rho.num_qubits(), "Pauli and state dimensions differ");
  MagnitudeTable mt;
  mt.operators.assign(ops.begin(), ops.end());
  mt.epsilon = epsilon;
  mt.shots = bell_shot_count(ops.size(), epsilon, delta_fail, c);
  const BellDistribution dist(rho, rho);
  const std::vector<std::uint64_t> counts = dist.sample_counts(mt.shots, rng);
  BellRecord local;
  BellRecord& rec = record ? *record : local;
  rec = BellRecord{};
  rec.shots = mt.shots;
  for (std::size_t o = 0; o < counts.size(); ++o)
    if (counts[o] > 0) rec.counts.push_back({o, counts[o]});
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::int64_t sum = bell_sign_sum(rec, rho.num_qubits(), ops[i]);
    mt.sign_sums.push_back(sum);
    mt.u.push_back(magnitude_from_sum(sum, mt.shots));
    if (mt.u.back() >= 0.75 * epsilon) mt.s_eps.push_back(i);
  }
  return mt;
}

int clique_audit(const MagnitudeTable& mt) {
  if (mt.s_eps.empty()) return 0;
  std::vector<PauliOp> ops;
  for (std::size_t i : mt.s_eps) ops.push_back(mt.operators[i]);
  const auto cg = build_graph(std::move(ops));
  const CliqueResult r = max_clique(cg.graph);
  require(r.exact, "clique audit needs an exact clique number");
  return r.lower;
}

SignRecovery recover_signs(const QuantumState& rho, const QuantumState& sigma, std::span<const PauliOp> ops,
                           double epsilon, double delta_fail, CounterRng& rng, const ProtocolConstants& c) {
  SignRecovery out;
  if (ops.empty()) return out;
  out.shots = bell_shot_count(ops.size(), epsilon, delta_fail, c);
  const BellDistribution dist(rho, sigma);
  const std::vector<std::uint64_t> counts = dist.sample_counts(out.shots, rng);
  BellRecord rec;
  rec.shots = out.shots;
  for (std::size_t o = 0; o < counts.size(); ++o)
    if (counts[o] > 0) rec.counts.push_back({o, counts[o]});
  const double threshold = epsilon * epsilon / 16.0;
  for (const auto& p : ops) {
    const double m = static_cast<double>(bell_sign_sum(rec, rho.num_qubits(), p)) / static_cast<double>(out.shots);
    const double t_sigma = expectation(sigma, p);
    out.m.push_back(m);
    if (std::abs(m) < threshold) ++out.ambiguous;
    out.signs.push_back(((m >= 0.0) == (t_sigma >= 0.0)) ? 1 : -1);
  }
  return out;
}

ColoringEngine greedy_engine() {
  return [](std::span<const PauliOp> ops, std::span<const std::size_t>) {
    const auto cg = build_graph(std::vector<PauliOp>(ops.begin(), ops.end()));
    const Coloring col = greedy_color(cg.graph);
    check_proper(cg.graph, col);
    return uniform_over_classes(col, "greedy");
  };
}

ColoringEngine gyarfas_engine(int path_bound) {
  return [path_bound](std::span<const PauliOp> ops, std::span<const std::size_t>) {
    const auto cg = build_graph(std::vector<PauliOp>(ops.begin(), ops.end()));
    const Coloring col = gyarfas_color(cg.graph, path_bound);
    check_proper(cg.graph, col);
    FractionalColoring fc = uniform_over_classes(col, "gyarfas");
    fc.omega_used = max_clique(cg.graph).upper;
    fc.size_bound = std::pow(static_cast<double>(path_bound), std::max(fc.omega_used - 1, 0));
    return fc;
  };
}

ColoringEngine majorana_engine(std::vector<MajoranaSupport> target_supports) {
  return [supports = std::move(target_supports)](std::span<const PauliOp>, std::span<const std::size_t> indices) {
    std::vector<MajoranaSupport> sub;
    for (std::size_t i : indices) sub.push_back(supports[i]);
    FractionalColoring fc = kbody_fractional_coloring(sub);
    if (!sub.empty() && std::popcount(sub.front()) == 2) fc.engine = "misra-gries";
    return fc;
  };
}

EstimationReport learn_two_copy_template(const QuantumState& rho, std::span<const PauliOp> targets,
                                         const ColoringEngine& engine, double epsilon, std::uint64_t seed,
                                         const ProtocolConstants& c, TwoCopyRecord* record) {
  const CounterRng root(seed);
  TwoCopyRecord local;
  TwoCopyRecord& rec = record ? *record : local;
  rec = TwoCopyRecord{};
  rec.num_qubits = rho.num_qubits();
  rec.epsilon = epsilon;
  rec.delta_fail = c.delta_fail;
  rec.seed = seed;
  rec.constants = c;
  rec.targets.assign(targets.begin(), targets.end());
  const double stage_delta = c.delta_fail / 2.0;

  CounterRng bell_rng = root.stream("magnitudes");
  const MagnitudeTable mt = learn_magnitudes(rho, targets, epsilon, stage_delta, bell_rng, c, &rec.bell);

  EstimationReport report;
  report.epsilon = epsilon;
  report.seed = seed;
  report.ledger.push_back({"bell_magnitudes", 2 * mt.shots});
  report.diagnostics["s_eps_size"] = static_cast<double>(mt.s_eps.size());
  if (!mt.s_eps.empty()) {
    std::vector<PauliOp> s_ops;
    for (std::size_t i : mt.s_eps) s_ops.push_back(targets[i]);
    const FractionalColoring fc = engine(s_ops, mt.s_eps);
    CounterRng single_rng = root.stream("single_copy");
    const EstimationReport stage2 =
        learn_single_copy_fractional(rho, s_ops, fc, epsilon, stage_delta, single_rng, c, &rec.single);
    report.ledger.push_back(stage2.ledger.front());
    report.diagnostics["size_chi"] = fc.size_chi;
    report.diagnostics["size_bound"] = fc.size_bound;
    report.diagnostics["omega_used"] = fc.omega_used;
    report.diagnostics["shots_per_batch"] = static_cast<double>(rec.single.shots_per_batch);
    report.diagnostics["num_batches"] = rec.single.num_batches;
    report.diagnostics["distinct_bases"] = static_cast<double>(rec.single.bases.size());
  } else {
    report.ledger.push_back({"single_copy", 0});
  }

  const RecordEstimator est(rec);
  for (const auto& p : targets) {
    const auto a = est.query(p);
    report.operators.push_back(p);
    report.labels.push_back(p.to_string());
    report.estimates.push_back(a.estimate);
    report.counts.push_back(a.count);
    report.in_s_eps.push_back(a.in_s_eps);
  }
  return report;
}

EstimationReport learn_all_paulis(const QuantumState& rho, double epsilon, std::uint64_t seed,
                                  const AllPauliOptions& options, MmwResult* mmw_out) {
  const int n = rho.num_qubits();
  require(n <= 6, "learn_all_paulis supports n <= 6");
  const ProtocolConstants& c = options.constants;
  const CounterRng root(seed);
  const double stage_delta = c.delta_fail / 3.0;
  const std::vector<PauliOp> all = enumerate_all(n);
  const std::vector<PauliOp> nontrivial(all.begin() + 1, all.end());

  CounterRng bell_rng = root.stream("magnitudes");
  const MagnitudeTable mt = learn_magnitudes(rho, nontrivial, epsilon, stage_delta, bell_rng, c);

  EstimationReport report;
  report.epsilon = epsilon;
  report.seed = seed;
  report.ledger.push_back({"bell_magnitudes", 2 * mt.shots});
  report.diagnostics["s_eps_size"] = static_cast<double>(mt.s_eps.size());

  std::vector<PauliOp> s_ops;
  std::vector<double> s_u;
  for (std::size_t i : mt.s_eps) {
    s_ops.push_back(nontrivial[i]);
    s_u.push_back(mt.u[i]);
  }
  std::vector<int> signs;
  if (!s_ops.empty()) {
    const MmwConfig cfg = MmwConfig::make(n, epsilon);
    CounterRng probe_rng = root.stream("mmw");
    const SignOracle oracle = [&](const PauliOp& p) {
      return options.exact_probes ? exact_sign(p, rho) : sign_probe(p, rho, cfg.sign_shots, probe_rng);
    };
    MmwResult mmw = compute_mimicking_state(s_ops, s_u, cfg, oracle);
    report.ledger.push_back({"mmw_probes", options.exact_probes ? 0 : mmw.probes * cfg.sign_shots});
    report.diagnostics["mmw_iterations"] = mmw.iterations;
    report.diagnostics["mmw_T"] = cfg.T;
    report.diagnostics["mmw_regret"] = regret_audit(mmw.iterates);
    if (options.exact_probes) report.flags.push_back("exact_probes");
    if (!mmw.converged) report.flags.push_back("mmw_reached_T");
    if (!satisfies_mimicking(mmw.sigma, s_ops, s_u, epsilon)) report.flags.push_back("mimicking_condition_violated");

    const QuantumState sigma = QuantumState::from_density(mmw.sigma);
    CounterRng sign_rng = root.stream("signs");
    const SignRecovery sr = recover_signs(rho, sigma, s_ops, epsilon, stage_delta, sign_rng, c);
    report.ledger.push_back({"bell_signs", sr.shots});
    if (sr.ambiguous > 0) report.flags.push_back("ambiguous_sign");
    report.diagnostics["ambiguous_signs"] = sr.ambiguous;
    signs = sr.signs;
    if (mmw_out) *mmw_out = std::move(mmw);
  } else {
    report.ledger.push_back({"mmw_probes", 0});
    report.ledger.push_back({"bell_signs", 0});
  }

  std::vector<double> y(nontrivial.size(), 0.0);
  std::vector<bool> in(nontrivial.size(), false);
  for (std::size_t k = 0; k < mt.s_eps.size(); ++k) {
    y[mt.s_eps[k]] = mt.u[mt.s_eps[k]] * signs[k];
    in[mt.s_eps[k]] = true;
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    report.operators.push_back(all[i]);
    report.labels.push_back(all[i].to_string());
    report.counts.push_back(0);
    report.estimates.push_back(i == 0 ? 1.0 : y[i - 1]);
    report.in_s_eps.push_back(i == 0 ? true : static_cast<bool>(in[i - 1]));
  }
  return report;
}

EstimationReport learn_fermionic(const QuantumState& rho, int n_modes, int k, MappingKind mapping,
                                 double epsilon, std::uint64_t seed, const ProtocolConstants& c,
                                 TwoCopyRecord* record) {
  require(k == 1 || k == 2, "fermionic learning supports k in {1, 2}");
  const FermionMapping f = make_mapping(mapping, n_modes);
  require(rho.num_qubits() == f.num_qubits(), "state qubit count does not match the fermion mapping");
  const std::vector<MajoranaSupport> supports = enumerate_degree(n_modes, 2 * k);
  std::vector<PauliOp> targets;
  for (MajoranaSupport s : supports) targets.push_back(monomial_to_pauli(s, f));
  EstimationReport report =
      learn_two_copy_template(rho, targets, majorana_engine(supports), epsilon, seed, c, record);
  for (std::size_t i = 0; i < supports.size(); ++i) report.labels[i] = MajoranaMonomial{n_modes, supports[i], 1.0}.to_string();
  report.diagnostics["n_modes"] = n_modes;
  report.diagnostics["k"] = k;
  return report;
}

}  // namespace shadowtomo
