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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadowtomo/fermion.hpp"
#include "shadowtomo/graph.hpp"
#include "shadowtomo/rng.hpp"

namespace shadowtomo {

/// Sorted vertex ids of an independent set.
using VertexSet = std::vector<std::uint32_t>;

struct WeightedSet {
  VertexSet members;
  double probability = 0.0;
};

/// A distribution over independent sets that contains every vertex with probability
/// at least 1/size_chi.
struct FractionalColoring {
  std::size_t num_vertices = 0;
  double size_chi = 1.0;
  std::function<VertexSet(CounterRng&)> sample;
  /// Present when the distribution has small finite support.
  std::optional<std::vector<WeightedSet>> explicit_distribution;
  /// Exact inclusion probability of each vertex.
  std::vector<double> coverage;
  std::string engine;
  /// Largest clique witness seen while building (0 when not tracked).
  int omega_used = 0;
  /// Analytic size bound for the engine at omega_used (the color count for plain colorings).
  double size_bound = 0.0;
};

/// Uniform distribution over the color classes of a proper coloring.
FractionalColoring uniform_over_classes(const Coloring& coloring, std::string engine = "coloring");

/// f_r(omega): f_2 = omega + 1, f_r = r omega f_{r-1} for odd r, f_r = f_{r-1}^r for even r >= 4.
double kbody_size_bound(int degree, double omega);

/// Recursive fractional coloring of a set of degree-r Majorana monomials (r >= 2).
/// Degree 2 uses Misra-Gries; odd degrees split by the first index hit from a greedy
/// maximal anticommuting set; even degrees intersect independent per-index samples.
/// size_chi is the exact reciprocal of the smallest inclusion probability, which never
/// exceeds kbody_size_bound(r, omega_used).
FractionalColoring kbody_fractional_coloring(std::span<const MajoranaSupport> supports);

}  // namespace shadowtomo
