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
#include "shadowtomo/mmw.hpp"

using namespace shadowtomo;

namespace {

struct Instance {
  std::vector<PauliOp> ops;
  std::vector<double> u;
};

Instance exact_instance(const QuantumState& rho) {
  Instance in;
  for (const auto& p : enumerate_all(rho.num_qubits())) {
    if (p.is_identity()) continue;
    in.ops.push_back(p);
    in.u.push_back(std::abs(expectation(rho, p)));
  }
  return in;
}

}  // namespace

TEST_CASE("configuration constants") {
  const MmwConfig c = MmwConfig::make(2, 0.5);
  CHECK(c.T == 64 * 2 * 4 + 1);
  CHECK(c.beta == doctest::Approx(std::sqrt(2.0 / c.T)));
  CHECK(c.sign_shots == static_cast<int>(std::ceil(32 * std::log(100.0 * c.T) / 0.25)));
  CHECK_THROWS_AS(MmwConfig::make(2, 0.0), Error);
}

TEST_CASE("exact signs give a mimicking state") {
  CounterRng rng(3);
  for (int n = 1; n <= 3; ++n) {
    const QuantumState rho = haar_random_state(n, rng);
    const Instance in = exact_instance(rho);
    const MmwConfig cfg = MmwConfig::make(n, 0.4);
    const MmwResult r = compute_mimicking_state(in.ops, in.u, cfg, [&](const PauliOp& p) { return exact_sign(p, rho); });
    CHECK(r.converged);
    CHECK(r.iterations <= cfg.T);
    CHECK(satisfies_mimicking(r.sigma, in.ops, in.u, 0.4));
    CHECK(r.sigma.trace().real() == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r.sigma);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    for (std::size_t i = 0; i < in.ops.size(); ++i) {
      if (in.u[i] < 0.3) continue;
      const double s = pauli_trace(in.ops[i], r.sigma).real();
      CHECK(std::abs(s) >= 0.1 - 1e-12);
    }
  }
}

TEST_CASE("regret audit agrees with the trace and the MMW bound") {
  CounterRng rng(6);
  const QuantumState rho = ghz_state(2);
  const Instance in = exact_instance(rho);
  const MmwConfig cfg = MmwConfig::make(2, 0.5);
  const MmwResult r = compute_mimicking_state(in.ops, in.u, cfg, [&](const PauliOp& p) { return exact_sign(p, rho); });
  REQUIRE(!r.trace.empty());
  const double audit = regret_audit(r.iterates);
  CHECK(audit == doctest::Approx(r.trace.back().regret_partial).epsilon(1e-9));
  const double t = static_cast<double>(r.iterations);
  CHECK(audit <= cfg.beta * t + 2 * std::log(2.0) / cfg.beta + 1e-9);
  for (const auto& step : r.trace) {
    CHECK(std::abs(step.r_p) == 1);
    CHECK(std::abs(step.sign_factor) == 1);
  }
}

TEST_CASE("sign probes") {
  CounterRng rng(1);
  const QuantumState up = basis_state(1, 0);
  CHECK(sign_probe(PauliOp::parse("Z"), up, 11, rng) == 1);
  CHECK(sign_probe(PauliOp::parse("-Z"), up, 11, rng) == -1);
  CHECK(exact_sign(PauliOp::parse("X"), up) == 1);
  CHECK(exact_sign(PauliOp::parse("Z"), basis_state(1, 1)) == -1);
  const QuantumState tilted = product_state("r");
  int plus = 0;
  for (int i = 0; i < 200; ++i) plus += sign_probe(PauliOp::parse("Y"), tilted, 5, rng) > 0;
  CHECK(plus == 200);
}

TEST_CASE("nothing to fix converges immediately") {
  const std::vector<PauliOp> ops{PauliOp::parse("Z")};
  const std::vector<double> u{0.1};
  const MmwResult r = compute_mimicking_state(ops, u, MmwConfig::make(1, 0.5), [](const PauliOp&) { return 1; });
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.probes == 0);
  CHECK(trace_json_lines(r).empty());
}

TEST_CASE("trace json has one object per step") {
  const QuantumState rho = basis_state(1, 1);
  const std::vector<PauliOp> ops{PauliOp::parse("Z")};
  const std::vector<double> u{1.0};
  const MmwResult r = compute_mimicking_state(ops, u, MmwConfig::make(1, 0.5), [&](const PauliOp& p) { return exact_sign(p, rho); });
  const std::string s = trace_json_lines(r);
  CHECK(static_cast<int>(std::count(s.begin(), s.end(), '\n')) == r.iterations);
  CHECK(s.find("\"chosen_pauli\"") != std::string::npos);
  CHECK(pauli_trace(PauliOp::parse("Z"), r.sigma).real() < -0.25);
}
