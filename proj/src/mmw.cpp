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

#include "shadowtomo/mmw.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace shadowtomo {

MmwConfig MmwConfig::make(int num_qubits, double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(num_qubits >= 1, "MMW needs at least one qubit");
  MmwConfig cfg;
  cfg.epsilon = epsilon;
  cfg.num_qubits = num_qubits;
  cfg.T = static_cast<int>(std::ceil(64.0 * num_qubits / (epsilon * epsilon))) + 1;
  cfg.beta = std::sqrt(static_cast<double>(num_qubits) / cfg.T);
  cfg.sign_shots = static_cast<int>(std::ceil(32.0 * std::log(100.0 * cfg.T) / (epsilon * epsilon)));
  return cfg;
}

int sign_probe(const PauliOp& p, const QuantumState& rho, int shots, CounterRng& rng) {
  require(shots >= 1, "sign probe needs at least one shot");
  const double prob_plus = std::clamp((1.0 + expectation(rho, p)) / 2.0, 0.0, 1.0);
  const std::uint64_t plus = sample_binomial(static_cast<std::uint64_t>(shots), prob_plus, rng);
  return 2 * plus >= static_cast<std::uint64_t>(shots) ? 1 : -1;
}

int exact_sign(const PauliOp& p, const QuantumState& rho) { return expectation(rho, p) >= 0.0 ? 1 : -1; }

namespace {

struct Gibbs {
  CMatrix omega;
  double lambda_min = 0.0;
};

Gibbs gibbs(const CMatrix& exponent_sum, double beta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(exponent_sum);
  require(es.info() == Eigen::Success, "Gibbs eigendecomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lmin = lam.minCoeff();
  Eigen::VectorXd w = (-beta * (lam.array() - lmin)).exp();
  w /= w.sum();
  Gibbs g;
  g.omega = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  g.lambda_min = lmin;
  return g;
}

}  // namespace

MmwResult compute_mimicking_state(std::span<const PauliOp> ops, std::span<const double> u,
                                  const MmwConfig& cfg, const SignOracle& oracle) {
  require(ops.size() == u.size(), "ops and magnitudes differ in length");
  require(cfg.num_qubits <= kDenseStateCap, "dense cap exceeded");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require(ops[i].num_qubits() == cfg.num_qubits, "Pauli dimension differs from the MMW qubit count");
    require(u[i] >= 0.0, "magnitude estimates must be nonnegative");
  }
  const double eps = cfg.epsilon;
  const Eigen::Index dim = Eigen::Index{1} << cfg.num_qubits;
  CMatrix exponent_sum = CMatrix::Zero(dim, dim);
  CMatrix omega = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  MmwResult result;
  double loss_total = 0.0;
  for (int t = 0; t < cfg.T; ++t) {
    std::ptrdiff_t violator = -1;
    double violator_value = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (u[i] < 0.75 * eps) continue;
      const double v = pauli_trace(ops[i], omega).real();
      if (std::abs(v - u[i]) > eps / 2 && std::abs(v + u[i]) > eps / 2) {
        violator = static_cast<std::ptrdiff_t>(i);
        violator_value = v;
        break;
      }
    }
    if (violator < 0) {
      result.converged = true;
      break;
    }
    const PauliOp& p = ops[static_cast<std::size_t>(violator)];
    const int r = oracle(p);
    ++result.probes;
    const int factor = (violator_value - r * u[static_cast<std::size_t>(violator)]) >= 0.0 ? 1 : -1;
    const PauliOp m(p.num_qubits(), p.x_bits(), p.z_bits(), (p.phase() + (factor < 0 ? 2 : 0)) & 3);
    loss_total += factor * violator_value;
    result.iterates.push_back({m, omega});
    exponent_sum += dense_matrix(m);
    const Gibbs g = gibbs(exponent_sum, cfg.beta);
    omega = g.omega;
    result.trace.push_back({t, p, r, factor, loss_total - g.lambda_min});
    result.iterations = t + 1;
  }
  result.sigma = std::move(omega);
  return result;
}

double regret_audit(std::span<const MmwIterate> iterates) {
  if (iterates.empty()) return 0.0;
  const Eigen::Index dim = iterates.front().omega.rows();
  CMatrix sum = CMatrix::Zero(dim, dim);
  double loss = 0.0;
  for (const auto& it : iterates) {
    loss += pauli_trace(it.m, it.omega).real();
    sum += dense_matrix(it.m);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sum, Eigen::EigenvaluesOnly);
  return loss - es.eigenvalues().minCoeff();
}

bool satisfies_mimicking(const CMatrix& sigma, std::span<const PauliOp> ops, std::span<const double> u,
                         double epsilon) {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (u[i] >= 0.75 * epsilon && std::abs(pauli_trace(ops[i], sigma).real()) < epsilon / 4) return false;
  return true;
}

std::string trace_json_lines(const MmwResult& result) {
  std::ostringstream out;
  for (const auto& s : result.trace) {
    nlohmann::ordered_json j;
    j["t"] = s.t;
    j["chosen_pauli"] = s.chosen.to_string();
    j["r_P"] = s.r_p;
    j["sign_factor"] = s.sign_factor;
    j["regret_partial"] = s.regret_partial;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace shadowtomo
