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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "shadowtomo/io.hpp"
#include "shadowtomo/protocols.hpp"

using namespace shadowtomo;

namespace {

double max_error(const EstimationReport& r, const QuantumState& rho) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.operators.size(); ++i)
    worst = std::max(worst, std::abs(r.estimates[i] - expectation(rho, r.operators[i])));
  return worst;
}

std::vector<PauliOp> non_identity(int n) {
  std::vector<PauliOp> out;
  for (const auto& p : enumerate_all(n))
    if (!p.is_identity()) out.push_back(p);
  return out;
}

}  // namespace

TEST_CASE("median of means") {
  const std::vector<BatchTally> odd{{3, 3}, {-1, 1}, {1, 2}};
  CHECK(median_of_means(odd) == doctest::Approx(0.5));
  const std::vector<BatchTally> even{{1, 1}, {0, 2}, {-1, 1}, {2, 4}};
  CHECK(median_of_means(even) == doctest::Approx(0.25));
  const std::vector<BatchTally> empty_batch{{0, 0}, {0, 0}, {1, 1}};
  CHECK(median_of_means(empty_batch) == 0.0);
  CHECK(median_of_means(std::vector<BatchTally>{{5, 5}}) == 1.0);
}

TEST_CASE("magnitudes from Bell sign sums") {
  CHECK(magnitude_from_sum(25, 100) == doctest::Approx(0.5));
  CHECK(magnitude_from_sum(-7, 100) == 0.0);
  CHECK(magnitude_from_sum(0, 0) == 0.0);
}

TEST_CASE("sample-count formulas") {
  const SingleCopyPlan plan = single_copy_plan(3.0, 10, 0.5, 0.005);
  CHECK(plan.shots_per_batch == 4800);
  CHECK(plan.num_batches == static_cast<std::uint32_t>(std::ceil(8 * std::log(10 / 0.005))));
  CHECK(single_copy_plan(1.0, 1, 0.5, 0.9).num_batches == 1);
  CHECK(bell_shot_count(4, 0.5, 0.005) ==
        static_cast<std::uint64_t>(std::ceil(32 * std::log(8 / 0.005) / std::pow(0.25 / 16, 2))));
  CHECK_THROWS_AS(single_copy_plan(0.5, 1, 0.5, 0.1), Error);
  CHECK_THROWS_AS(bell_shot_count(1, 1.5, 0.1), Error);
}

TEST_CASE("bell_sign_sum matches the sign rule") {
  BellRecord rec;
  rec.shots = 5;
  rec.counts = {{0b00, 2}, {0b11, 3}};
  CHECK(bell_sign_sum(rec, 1, PauliOp::parse("X")) == 2 - 3);
  CHECK(bell_sign_sum(rec, 1, PauliOp::parse("Y")) == -2 - 3);
  CHECK(bell_sign_sum(rec, 1, PauliOp::parse("I")) == 5);
}

TEST_CASE("single-copy learning with a fractional coloring") {
  CounterRng rng(12);
  const QuantumState rho = random_mixed_state(2, 2, rng);
  const auto ops = non_identity(2);
  const auto cg = build_graph(ops);
  const FractionalColoring fc = uniform_over_classes(greedy_color(cg.graph), "greedy");
  SingleCopyRecord rec;
  const EstimationReport r = learn_single_copy_fractional(rho, ops, fc, 0.3, 0.01, rng, {}, &rec);
  CHECK(max_error(r, rho) <= 0.3);
  const SingleCopyPlan plan = single_copy_plan(fc.size_chi, ops.size(), 0.3, 0.01);
  CHECK(rec.total_shots() == plan.shots_per_batch * plan.num_batches);
  CHECK(r.total_copies() == rec.total_shots());
  CHECK(r.stage_copies("single_copy") == rec.total_shots());
  for (std::size_t i = 0; i < ops.size(); ++i) CHECK(r.counts[i] > 0);
}

TEST_CASE("magnitude learning") {
  const QuantumState g = ghz_state(2);
  CounterRng rng(3);
  const auto ops = non_identity(2);
  BellRecord rec;
  const MagnitudeTable mt = learn_magnitudes(g, ops, 0.5, 0.005, rng, {}, &rec);
  CHECK(rec.shots == mt.shots);
  CHECK(mt.shots == bell_shot_count(ops.size(), 0.5, 0.005));
  for (std::size_t i = 0; i < ops.size(); ++i)
    CHECK(std::abs(mt.u[i] - std::abs(expectation(g, ops[i]))) <= 0.5 * 0.5 / 4);
  CHECK(mt.s_eps.size() == 3);
  CHECK(clique_audit(mt) == 1);
}

TEST_CASE("sign recovery against a mimicking state") {
  CounterRng rng(2);
  const QuantumState rho = product_state("0+");
  const std::vector<PauliOp> ops{PauliOp::parse("ZI"), PauliOp::parse("-IX"), PauliOp::parse("ZX")};
  const SignRecovery sr = recover_signs(rho, rho, ops, 0.5, 0.005, rng);
  CHECK(sr.signs == std::vector<int>{1, -1, 1});
  CHECK(sr.ambiguous == 0);
}

TEST_CASE("two-copy template") {
  CounterRng rng(30);
  const QuantumState rho = haar_random_state(3, rng);
  const auto targets = enumerate_local(3, 2);
  TwoCopyRecord rec;
  const EstimationReport r = learn_two_copy_template(rho, targets, greedy_engine(), 0.4, 77, {}, &rec);
  CHECK(max_error(r, rho) <= 0.4);
  CHECK(r.stage_copies("bell_magnitudes") == 2 * rec.bell.shots);
  CHECK(r.stage_copies("single_copy") == rec.single.total_shots());
  CHECK(r.total_copies() == 2 * rec.bell.shots + rec.single.total_shots());
  const RecordEstimator est(rec);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(est.query(targets[i]).estimate == r.estimates[i]);
    const PauliOp neg(3, targets[i].x_bits(), targets[i].z_bits(), (targets[i].phase() + 2) & 3);
    CHECK(est.query(neg).estimate == -r.estimates[i]);
  }
  CHECK(est.query(PauliOp::identity(3)).estimate == 1.0);
  TwoCopyRecord again;
  learn_two_copy_template(rho, targets, greedy_engine(), 0.4, 77, {}, &again);
  CHECK(again == rec);
}

TEST_CASE("learning all Paulis") {
  CounterRng rng(4);
  const QuantumState rho = haar_random_state(2, rng);
  MmwResult mmw;
  const EstimationReport r = learn_all_paulis(rho, 0.5, 5, {}, &mmw);
  REQUIRE(r.operators.size() == 16);
  CHECK(r.operators.front().is_identity());
  CHECK(r.estimates.front() == 1.0);
  CHECK(max_error(r, rho) <= 0.5);
  CHECK(r.stage_copies("mmw_probes") > 0);
  CHECK(std::find(r.flags.begin(), r.flags.end(), "mimicking_condition_violated") == r.flags.end());
}

TEST_CASE("fermionic learning, 1-body") {
  for (MappingKind kind : {MappingKind::ternary_tree, MappingKind::jordan_wigner}) {
    const FermionMapping map = make_mapping(kind, 3);
    CounterRng rng(8);
    const QuantumState rho = gaussian_state(3, map, rng);
    const EstimationReport r = learn_fermionic(rho, 3, 1, kind, 0.4, 9);
    CHECK(r.operators.size() == 15);
    CHECK(r.labels.front().rfind("G[", 0) == 0);
    CHECK(max_error(r, rho) <= 0.4);
  }
  CHECK_THROWS_AS(learn_fermionic(basis_state(3, 0), 3, 3, MappingKind::jordan_wigner, 0.4, 1), Error);
}
