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
#include <span>
#include <utility>
#include <vector>

#include "shadowtomo/fermion.hpp"
#include "shadowtomo/pauli.hpp"

namespace shadowtomo {

/// Simple undirected graph on vertices 0..size()-1 with bit-row adjacency.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_vertices);

  std::size_t size() const { return n_; }
  std::size_t num_edges() const;

  void add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const {
    return (rows_[u][v >> 6] >> (v & 63)) & 1U;
  }
  std::size_t degree(std::size_t v) const;
  std::size_t max_degree() const;
  std::vector<std::size_t> neighbors(std::size_t v) const;
  std::span<const std::uint64_t> row(std::size_t v) const { return rows_[v]; }

  /// Subgraph induced by `vertices`; vertex i of the result is vertices[i].
  Graph induced(std::span<const std::size_t> vertices) const;

  /// Connected components, each sorted ascending, ordered by smallest vertex.
  std::vector<std::vector<std::size_t>> components() const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> rows_;
};

/// Operators with their anticommutation graph (edge = anticommuting pair).
template <class Op>
struct CommutationGraph {
  std::vector<Op> vertices;
  Graph graph;
};

CommutationGraph<PauliOp> build_graph(std::vector<PauliOp> ops);
CommutationGraph<MajoranaMonomial> build_graph(std::vector<MajoranaMonomial> ops);

/// Anticommutation graph of raw Majorana supports (vertex i = supports[i]).
Graph majorana_graph(std::span<const MajoranaSupport> supports);

struct Coloring {
  std::vector<int> color_of;
  int num_colors = 0;
};

bool is_proper(const Graph& g, const Coloring& c);

/// Throws Error unless `c` is a proper coloring of `g` with colors in [0, num_colors).
void check_proper(const Graph& g, const Coloring& c);

/// First-fit coloring in vertex-ID order.
Coloring greedy_color(const Graph& g);

struct CliqueResult {
  int lower = 0;  // size of `witness`
  int upper = 0;
  bool exact = false;
  std::vector<std::size_t> witness;
};

/// Clique number. Branch-and-bound when g.size() <= exact_cap, otherwise a greedy
/// lower bound and the degeneracy + 1 upper bound.
CliqueResult max_clique(const Graph& g, std::size_t exact_cap = 128);

/// Greedy maximal clique grown from `start`, scanning candidates in vertex-ID order.
std::vector<std::size_t> greedy_maximal_clique(const Graph& g, std::size_t start = 0);

/// Longest induced path bound for any induced subgraph of G(P^(n)): 2n + 1.
inline int longest_induced_path_bound(int num_qubits) { return 2 * num_qubits + 1; }

/// Exact number of vertices on a longest induced path (exhaustive; g.size() <= 20).
int longest_induced_path_exact(const Graph& g);

struct NfsTree {
  std::size_t root = 0;
  std::vector<std::ptrdiff_t> parent;  // -1 for the root
  std::vector<int> depth_of;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<std::size_t>> levels;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

/// Neighbour-first search spanning tree of a connected graph. Children are attached and
/// visited in ascending vertex order.
NfsTree nfs_tree(const Graph& g, std::size_t seed_vertex);

/// Colors g with at most path_bound^(omega-1) colors by recursing on NFS levels with
/// disjoint palettes.
Coloring gyarfas_color(const Graph& g, int path_bound);

/// Misra-Gries edge coloring of a simple graph on `num_vertices` vertices with at most
/// max_degree + 1 colors. Returns one color per edge, in input order.
std::vector<int> misra_gries_edge_coloring(std::size_t num_vertices,
                                           std::span<const std::pair<int, int>> edges);

/// Coloring of G(S) for degree-2 monomials via Misra-Gries on the auxiliary graph whose
/// vertices are Majoranas and whose edges are the observables.
Coloring misra_gries_1body(std::span<const MajoranaSupport> supports);

}  // namespace shadowtomo
