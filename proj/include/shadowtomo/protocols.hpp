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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "shadowtomo/fermion.hpp"
#include "shadowtomo/fractional.hpp"
#include "shadowtomo/mmw.hpp"
#include "shadowtomo/pauli.hpp"
#include "shadowtomo/rng.hpp"
#include "shadowtomo/state.hpp"

namespace shadowtomo {

struct ProtocolConstants {
  double batch_constant = 4.0;
  double median_constant = 8.0;
  double bell_constant = 32.0;
  double delta_fail = 0.01;

  friend bool operator==(const ProtocolConstants&, const ProtocolConstants&) = default;
};

/// Copies of rho consumed by one pipeline stage.
struct StageLedger {
  std::string stage;
  std::uint64_t copies = 0;
};

struct EstimationReport {
  std::vector<PauliOp> operators;
  std::vector<std::string> labels;
  std::vector<double> estimates;
  std::vector<std::uint64_t> counts;  // single-copy N_P summed over batches
  std::vector<bool> in_s_eps;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<StageLedger> ledger;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> flags;

  std::uint64_t total_copies() const;
  std::uint64_t stage_copies(std::string_view stage) const;
};

/// Per-batch running sums of +-1 outcomes and measurement counts.
struct BatchTally {
  std::int64_t sum = 0;
  std::uint64_t count = 0;
};

/// Median over batches of the per-batch means (a batch with no data reads 0), clamped
/// to [-1, 1]. An even number of batches averages the two middle values.
double median_of_means(std::span<const BatchTally> batches);

/// sqrt(max(0, sum / shots)).
double magnitude_from_sum(std::int64_t sign_sum, std::uint64_t shots);

/// Bell samples as sorted (outcome, count) pairs with count > 0.
struct BellRecord {
  std::uint64_t shots = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;

  friend bool operator==(const BellRecord&, const BellRecord&) = default;
};

std::int64_t bell_sign_sum(const BellRecord& record, int num_qubits, const PauliOp& p);

/// `count` identical shots of one batch.
struct ShotRecord {
  std::uint32_t batch = 0;
  std::uint32_t basis = 0;
  std::uint64_t outcomes = 0;  // bit i set when basis member i read -1
  std::uint64_t count = 0;

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Single-copy shots in batch order, grouped into runs of identical shots.
struct SingleCopyRecord {
  std::vector<std::vector<PauliOp>> bases;  // distinct measured sets, first-use order
  std::vector<ShotRecord> shots;

  std::uint64_t total_shots() const;
  std::uint32_t num_batches = 0;
  std::uint64_t shots_per_batch = 0;

  std::uint32_t intern(std::vector<PauliOp> basis);

  friend bool operator==(const SingleCopyRecord& a, const SingleCopyRecord& b) {
    return a.bases == b.bases && a.shots == b.shots && a.num_batches == b.num_batches &&
           a.shots_per_batch == b.shots_per_batch;
  }
};

/// Raw data of a two-copy template run; all estimates are recomputed from it.
struct TwoCopyRecord {
  int num_qubits = 0;
  double epsilon = 0.0;
  double delta_fail = 0.0;
  std::uint64_t seed = 0;
  ProtocolConstants constants;
  std::vector<PauliOp> targets;
  BellRecord bell;
  SingleCopyRecord single;

  friend bool operator==(const TwoCopyRecord&, const TwoCopyRecord&) = default;
};

/// Estimates recomputed from a two-copy record in one pass over its data.
class RecordEstimator {
 public:
  explicit RecordEstimator(const TwoCopyRecord& record);

  struct Answer {
    double estimate = 0.0;
    bool in_s_eps = false;
    bool extrapolated = false;
    double magnitude = 0.0;
    std::uint64_t count = 0;
  };

  Answer query(const PauliOp& p) const;

 private:
  const TwoCopyRecord& record_;
  std::map<PauliOp, std::size_t> target_index_;  // keyed by unsigned part
  std::vector<std::vector<BatchTally>> tallies_;  // [target][batch]
};

// Single-copy learning with a fractional coloring.
struct SingleCopyPlan {
  std::uint64_t shots_per_batch = 0;
  std::uint32_t num_batches = 0;
};

SingleCopyPlan single_copy_plan(double size_chi, std::size_t set_size, double epsilon, double delta_fail,
                                const ProtocolConstants& c = {});

EstimationReport learn_single_copy_fractional(const QuantumState& rho, std::span<const PauliOp> ops,
                                              const FractionalColoring& fc, double epsilon, double delta_fail,
                                              CounterRng& rng, const ProtocolConstants& c = {},
                                              SingleCopyRecord* record = nullptr);

struct MagnitudeTable {
  std::vector<PauliOp> operators;
  std::vector<double> u;
  std::vector<std::int64_t> sign_sums;
  std::uint64_t shots = 0;
  double epsilon = 0.0;
  std::vector<std::size_t> s_eps;  // indices with u >= 3 eps / 4
};

std::uint64_t bell_shot_count(std::size_t set_size, double epsilon, double delta_fail,
                              const ProtocolConstants& c = {});

MagnitudeTable learn_magnitudes(const QuantumState& rho, std::span<const PauliOp> ops, double epsilon,
                                double delta_fail, CounterRng& rng, const ProtocolConstants& c = {},
                                BellRecord* record = nullptr);

/// Clique number of G(s_eps).
int clique_audit(const MagnitudeTable& mt);

struct SignRecovery {
  std::vector<int> signs;
  std::vector<double> m;  // Bell estimates of Tr(P rho) Tr(P sigma)
  std::uint64_t shots = 0;
  int ambiguous = 0;
};

SignRecovery recover_signs(const QuantumState& rho, const QuantumState& sigma, std::span<const PauliOp> ops,
                           double epsilon, double delta_fail, CounterRng& rng, const ProtocolConstants& c = {});

/// Builds a fractional coloring of G(s_eps); `indices` are positions in the target list.
using ColoringEngine =
    std::function<FractionalColoring(std::span<const PauliOp> s_eps, std::span<const std::size_t> indices)>;

ColoringEngine greedy_engine();
ColoringEngine gyarfas_engine(int path_bound);
/// Misra-Gries (degree 2) or the recursive k-body coloring, on the Majorana supports
/// of the target list.
ColoringEngine majorana_engine(std::vector<MajoranaSupport> target_supports);

EstimationReport learn_two_copy_template(const QuantumState& rho, std::span<const PauliOp> targets,
                                         const ColoringEngine& engine, double epsilon, std::uint64_t seed,
                                         const ProtocolConstants& c = {}, TwoCopyRecord* record = nullptr);

struct AllPauliOptions {
  bool exact_probes = false;
  ProtocolConstants constants;
};

EstimationReport learn_all_paulis(const QuantumState& rho, double epsilon, std::uint64_t seed,
                                  const AllPauliOptions& options = {}, MmwResult* mmw_out = nullptr);

EstimationReport learn_fermionic(const QuantumState& rho, int n_modes, int k, MappingKind mapping,
                                 double epsilon, std::uint64_t seed, const ProtocolConstants& c = {},
                                 TwoCopyRecord* record = nullptr);

}  // namespace shadowtomo
