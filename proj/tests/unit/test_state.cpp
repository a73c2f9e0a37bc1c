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

#include <map>
#include <numeric>

#include "dense_oracle.hpp"
#include "shadowtomo/state.hpp"

using namespace shadowtomo;

TEST_CASE("state generators") {
  CHECK(expectation(basis_state(2, 1), PauliOp::parse("IZ")) == doctest::Approx(-1.0));
  CHECK(expectation(basis_state(2, 1), PauliOp::parse("ZI")) == doctest::Approx(1.0));
  const QuantumState p = product_state("0+1-rl");
  CHECK(p.num_qubits() == 6);
  CHECK(expectation(p, PauliOp::parse("ZXZXYY")) == doctest::Approx(-1.0));
  CHECK(expectation(p, PauliOp::parse("IIIIYI")) == doctest::Approx(1.0));
  CHECK(expectation(p, PauliOp::parse("IIIIIY")) == doctest::Approx(-1.0));
  const QuantumState ghz = ghz_state(3);
  CHECK(expectation(ghz, PauliOp::parse("XXX")) == doctest::Approx(1.0));
  CHECK(expectation(ghz, PauliOp::parse("ZZI")) == doctest::Approx(1.0));
  CHECK(expectation(ghz, PauliOp::parse("ZII")) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(expectation(maximally_mixed_state(2), PauliOp::parse("XZ")) == doctest::Approx(0.0));
  CHECK(expectation(maximally_mixed_state(2), PauliOp::parse("-II")) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(product_state("0q"), Error);
}

TEST_CASE("expectations match the dense oracle") {
  CounterRng rng(11);
  for (int n = 1; n <= 3; ++n) {
    const QuantumState mixed = random_mixed_state(n, 2, rng);
    const QuantumState pure = haar_random_state(n, rng);
    const CMatrix rm = mixed.density_matrix();
    const CMatrix rp = pure.density_matrix();
    CHECK(rm.trace().real() == doctest::Approx(1.0));
    for (const auto& p : enumerate_all(n)) {
      CHECK(expectation(mixed, p) == doctest::Approx(oracle::expectation(rm, p)).epsilon(1e-10));
      CHECK(expectation(pure, p) == doctest::Approx(oracle::expectation(rp, p)).epsilon(1e-10));
      const Complex tr = pauli_trace(p, rm);
      CHECK(std::abs(tr - (oracle::pauli(p) * rm).trace()) < 1e-10);
      const CVector v = apply_pauli(p, pure.members()[0].amplitudes);
      CHECK((v - oracle::pauli(p) * pure.members()[0].amplitudes).norm() < 1e-12);
    }
  }
}

TEST_CASE("from_density reproduces the matrix") {
  CounterRng rng(2);
  const CMatrix rho = oracle::random_density(2, 3, rng);
  const QuantumState s = QuantumState::from_density(rho);
  CHECK(oracle::max_abs(s.density_matrix() - rho) < 1e-10);
}

TEST_CASE("commuting distribution matches projector oracle") {
  CounterRng rng(4);
  const CMatrix rho = oracle::random_density(2, 2, rng);
  const QuantumState s = QuantumState::from_density(rho);
  const std::vector<PauliOp> ops{PauliOp::parse("XX"), PauliOp::parse("ZZ"), PauliOp::parse("-YY")};
  const JointDistribution jd = commuting_distribution(s, ops);
  double total = 0.0;
  for (std::size_t i = 0; i < jd.outcomes.size(); ++i) {
    const std::uint64_t w = jd.outcomes[i];
    CMatrix proj = CMatrix::Identity(4, 4);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const double sgn = ((w >> k) & 1U) ? -1.0 : 1.0;
      proj = proj * (CMatrix::Identity(4, 4) + sgn * oracle::pauli(ops[k])) * 0.5;
    }
    CHECK(jd.probabilities[i] == doctest::Approx((proj * rho).trace().real()).epsilon(1e-10));
    total += jd.probabilities[i];
  }
  CHECK(total == doctest::Approx(1.0));
  std::vector<PauliOp> bad{PauliOp::parse("XI"), PauliOp::parse("ZI")};
  CHECK_THROWS_AS(commuting_distribution(s, bad), Error);
}

TEST_CASE("measure_commuting_set on eigenstates") {
  CounterRng rng(9);
  const QuantumState bell = QuantumState::pure([] {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v;
  }());
  const std::vector<PauliOp> ops{PauliOp::parse("XX"), PauliOp::parse("ZZ"), PauliOp::parse("YY")};
  for (int i = 0; i < 20; ++i) CHECK(measure_commuting_set(bell, ops, rng) == std::vector<int>{1, 1, -1});
}

TEST_CASE("Bell sign table equals the explicit Bell-basis oracle") {
  CounterRng rng(17);
  for (int n = 1; n <= 2; ++n) {
    const QuantumState a = haar_random_state(n, rng);
    const QuantumState b = haar_random_state(n, rng);
    const BellDistribution bd(a, b);
    const auto want = oracle::bell_probabilities(a.members()[0].amplitudes, b.members()[0].amplitudes, n);
    REQUIRE(bd.probabilities().size() == want.size());
    for (std::size_t w = 0; w < want.size(); ++w) CHECK(bd.probabilities()[w] == doctest::Approx(want[w]).epsilon(1e-10));
    for (const auto& p : enumerate_all(n)) {
      double acc = 0.0;
      for (std::size_t w = 0; w < want.size(); ++w) acc += want[w] * sign_of(p, BellSample{n, w});
      CHECK(acc == doctest::Approx(expectation(a, p) * expectation(b, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Bell table matches the single-qubit sign rule") {
  for (int m = 0; m < 4; ++m) {
    const BellSample s{1, static_cast<std::uint64_t>(m)};
    CHECK(sign_of(PauliOp::parse("I"), s) == kBellSignTable[0][m]);
    CHECK(sign_of(PauliOp::parse("X"), s) == kBellSignTable[1][m]);
    CHECK(sign_of(PauliOp::parse("Z"), s) == kBellSignTable[2][m]);
    CHECK(sign_of(PauliOp::parse("Y"), s) == kBellSignTable[3][m]);
  }
}

TEST_CASE("Bell sampling of mixed states averages to the product of expectations") {
  CounterRng rng(21);
  const QuantumState rho = random_mixed_state(2, 2, rng);
  const BellDistribution bd(rho, rho);
  const auto counts = bd.sample_counts(200000, rng);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 200000);
  for (const auto& p : enumerate_all(2)) {
    double acc = 0.0;
    for (std::size_t w = 0; w < counts.size(); ++w) acc += static_cast<double>(counts[w]) * sign_of(p, BellSample{2, w});
    const double e = expectation(rho, p);
    CHECK(std::abs(acc / 200000 - e * e) < 0.02);
  }
}

TEST_CASE("binomial and multinomial samplers") {
  CounterRng rng(8);
  CHECK(sample_binomial(0, 0.5, rng) == 0);
  CHECK(sample_binomial(10, 0.0, rng) == 0);
  CHECK(sample_binomial(10, 1.0, rng) == 10);
  const std::vector<double> probs{0.5, 0.0, 0.3, 0.2};
  const auto c = sample_multinomial(100000, probs, rng);
  CHECK(c[1] == 0);
  CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == 100000);
  CHECK(std::abs(static_cast<double>(c[0]) / 100000 - 0.5) < 0.01);
  CHECK(std::abs(static_cast<double>(c[2]) / 100000 - 0.3) < 0.01);
}

TEST_CASE("sampling is deterministic per seed") {
  const QuantumState g = ghz_state(2);
  CounterRng r1(5), r2(5);
  const BellDistribution bd(g, g);
  for (int i = 0; i < 50; ++i) CHECK(bd.sample(r1) == bd.sample(r2));
}
