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

#include "shadowtomo/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

namespace shadowtomo {

Graph::Graph(std::size_t num_vertices)
    : n_(num_vertices), words_((num_vertices + 63) / 64),
      rows_(num_vertices, std::vector<std::uint64_t>((num_vertices + 63) / 64, 0)) {}

std::size_t Graph::num_edges() const {
  std::size_t total = 0;
  for (std::size_t v = 0; v < n_; ++v) total += degree(v);
  return total / 2;
}

void Graph::add_edge(std::size_t u, std::size_t v) {
  require(u < n_ && v < n_, "edge endpoint out of range");
  require(u != v, "self-loops are not allowed");
  rows_[u][v >> 6] |= std::uint64_t{1} << (v & 63);
  rows_[v][u >> 6] |= std::uint64_t{1} << (u & 63);
}

std::size_t Graph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::uint64_t w : rows_[v]) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

std::vector<std::size_t> Graph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_; ++w)
    for (std::uint64_t bits = rows_[v][w]; bits != 0; bits &= bits - 1)
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
  return out;
}

Graph Graph::induced(std::span<const std::size_t> vertices) const {
  Graph sub(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (has_edge(vertices[i], vertices[j])) sub.add_edge(i, j);
  return sub;
}

std::vector<std::vector<std::size_t>> Graph::components() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(n_, false);
  for (std::size_t s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (std::size_t w : neighbors(comp[head]))
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

CommutationGraph<PauliOp> build_graph(std::vector<PauliOp> ops) {
  Graph g(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require(ops[i].num_qubits() == ops.front().num_qubits(), "operators have different qubit counts");
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      if (!commutes(ops[i], ops[j])) g.add_edge(i, j);
  }
  return {std::move(ops), std::move(g)};
}

Graph majorana_graph(std::span<const MajoranaSupport> supports) {
  Graph g(supports.size());
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (std::size_t j = i + 1; j < supports.size(); ++j)
      if (!monomial_commutes(supports[i], supports[j])) g.add_edge(i, j);
  return g;
}

CommutationGraph<MajoranaMonomial> build_graph(std::vector<MajoranaMonomial> ops) {
  std::vector<MajoranaSupport> supports;
  for (const auto& m : ops) {
    require(m.n_modes == ops.front().n_modes, "monomials have different mode counts");
    supports.push_back(m.support);
  }
  Graph g = majorana_graph(supports);
  return {std::move(ops), std::move(g)};
}

bool is_proper(const Graph& g, const Coloring& c) {
  if (c.color_of.size() != g.size()) return false;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (c.color_of[v] < 0 || c.color_of[v] >= c.num_colors) return false;
    for (std::size_t w : g.neighbors(v))
      if (c.color_of[v] == c.color_of[w]) return false;
  }
  return true;
}

void check_proper(const Graph& g, const Coloring& c) {
  require(is_proper(g, c), "coloring is not proper");
}

Coloring greedy_color(const Graph& g) {
  Coloring c{std::vector<int>(g.size(), -1), 0};
  std::vector<bool> used;
  for (std::size_t v = 0; v < g.size(); ++v) {
    used.assign(static_cast<std::size_t>(c.num_colors) + 1, false);
    for (std::size_t w : g.neighbors(v))
      if (c.color_of[w] >= 0) used[static_cast<std::size_t>(c.color_of[w])] = true;
    int color = 0;
    while (used[static_cast<std::size_t>(color)]) ++color;
    c.color_of[v] = color;
    c.num_colors = std::max(c.num_colors, color + 1);
  }
  return c;
}

std::vector<std::size_t> greedy_maximal_clique(const Graph& g, std::size_t start) {
  std::vector<std::size_t> clique;
  if (g.size() == 0) return clique;
  clique.push_back(start);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (v == start) continue;
    bool ok = true;
    for (std::size_t u : clique)
      if (!g.has_edge(u, v)) {
        ok = false;
        break;
      }
    if (ok) clique.push_back(v);
  }
  return clique;
}

namespace {

// Branch and bound with greedy-coloring bounds on candidate sets.
class CliqueSearch {
 public:
  explicit CliqueSearch(const Graph& g) : g_(g) {}

  std::vector<std::size_t> run(std::vector<std::size_t> initial_best) {
    best_ = std::move(initial_best);
    std::vector<std::size_t> all(g_.size());
    std::iota(all.begin(), all.end(), 0);
    // Degree-descending initial order tightens the color bound.
    std::stable_sort(all.begin(), all.end(),
                     [&](std::size_t a, std::size_t b) { return g_.degree(a) > g_.degree(b); });
    std::vector<std::size_t> current;
    expand(current, all);
    return best_;
  }

 private:
  void expand(std::vector<std::size_t>& current, const std::vector<std::size_t>& candidates) {
    std::vector<std::size_t> order;
    std::vector<int> bound;
    color_sort(candidates, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + static_cast<std::size_t>(bound[i]) <= best_.size()) return;
      const std::size_t v = order[i];
      current.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < i; ++j)
        if (g_.has_edge(v, order[j])) next.push_back(order[j]);
      if (next.empty()) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, next);
      }
      current.pop_back();
    }
  }

  void color_sort(const std::vector<std::size_t>& candidates, std::vector<std::size_t>& order,
                  std::vector<int>& bound) const {
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t v : candidates) {
      std::size_t k = 0;
      for (; k < classes.size(); ++k) {
        bool conflict = false;
        for (std::size_t u : classes[k])
          if (g_.has_edge(u, v)) {
            conflict = true;
            break;
          }
        if (!conflict) break;
      }
      if (k == classes.size()) classes.emplace_back();
      classes[k].push_back(v);
    }
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (std::size_t v : classes[k]) {
        order.push_back(v);
        bound.push_back(static_cast<int>(k) + 1);
      }
  }

  const Graph& g_;
  std::vector<std::size_t> best_;
};

int degeneracy(const Graph& g) {
  std::vector<std::size_t> deg(g.size());
  std::vector<bool> removed(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) deg[v] = g.degree(v);
  int result = 0;
  for (std::size_t step = 0; step < g.size(); ++step) {
    std::size_t pick = g.size();
    for (std::size_t v = 0; v < g.size(); ++v)
      if (!removed[v] && (pick == g.size() || deg[v] < deg[pick])) pick = v;
    result = std::max(result, static_cast<int>(deg[pick]));
    removed[pick] = true;
    for (std::size_t w : g.neighbors(pick))
      if (!removed[w]) --deg[w];
  }
  return result;
}

}  // namespace

CliqueResult max_clique(const Graph& g, std::size_t exact_cap) {
  CliqueResult r;
  if (g.size() == 0) {
    r.exact = true;
    return r;
  }
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < g.size(); ++s) {
    auto c = greedy_maximal_clique(g, s);
    if (c.size() > best.size()) best = std::move(c);
  }
  if (g.size() <= exact_cap) {
    best = CliqueSearch(g).run(best);
    std::sort(best.begin(), best.end());
    r.lower = r.upper = static_cast<int>(best.size());
    r.exact = true;
  } else {
    r.lower = static_cast<int>(best.size());
    r.upper = std::max(r.lower, degeneracy(g) + 1);
    r.exact = r.lower == r.upper;
  }
  r.witness = std::move(best);
  return r;
}

int longest_induced_path_exact(const Graph& g) {
  require(g.size() <= 20, "exact induced-path search is limited to 20 vertices");
  int best = g.size() > 0 ? 1 : 0;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(g.size(), false);
  std::function<void()> extend = [&]() {
    best = std::max(best, static_cast<int>(path.size()));
    const std::size_t last = path.back();
    for (std::size_t w : g.neighbors(last)) {
      if (on_path[w]) continue;
      bool induced = true;
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (g.has_edge(path[i], w)) {
          induced = false;
          break;
        }
      if (!induced) continue;
      path.push_back(w);
      on_path[w] = true;
      extend();
      on_path[w] = false;
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < g.size(); ++s) {
    path = {s};
    on_path[s] = true;
    extend();
    on_path[s] = false;
  }
  return best;
}

NfsTree nfs_tree(const Graph& g, std::size_t seed_vertex) {
  require(seed_vertex < g.size(), "seed vertex out of range");
  NfsTree t;
  t.root = seed_vertex;
  t.parent.assign(g.size(), -1);
  t.depth_of.assign(g.size(), -1);
  t.children.assign(g.size(), {});
  t.depth_of[seed_vertex] = 0;

  // NFS(v): attach every unvisited neighbour of v as a child, then recurse into the
  // children in order. Explicit stack of (vertex, next child position).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  auto attach = [&](std::size_t v) {
    for (std::size_t w : g.neighbors(v)) {
      if (t.depth_of[w] >= 0) continue;
      t.depth_of[w] = t.depth_of[v] + 1;
      t.parent[w] = static_cast<std::ptrdiff_t>(v);
      t.children[v].push_back(w);
    }
    stack.emplace_back(v, 0);
  };
  attach(seed_vertex);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next == t.children[v].size()) {
      stack.pop_back();
      continue;
    }
    const std::size_t child = t.children[v][next++];
    attach(child);
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    require(t.depth_of[v] >= 0, "nfs_tree requires a connected graph");
    const auto d = static_cast<std::size_t>(t.depth_of[v]);
    if (t.levels.size() <= d) t.levels.resize(d + 1);
    t.levels[d].push_back(v);
  }
  return t;
}

namespace {

// Colors the subgraph induced by `vertices` (ascending ids of g); writes colors into
// `out` starting at palette offset `base` and returns the number of colors used.
int gyarfas_rec(const Graph& g, const std::vector<std::size_t>& vertices, int base,
                std::vector<int>& out) {
  const Graph sub = g.induced(vertices);
  if (sub.num_edges() == 0) {
    for (std::size_t v : vertices) out[v] = base;
    return vertices.empty() ? 0 : 1;
  }
  int used = 0;
  for (const auto& comp : sub.components()) {
    std::vector<std::size_t> comp_vertices;
    for (std::size_t i : comp) comp_vertices.push_back(vertices[i]);
    if (comp.size() == 1) {
      out[comp_vertices.front()] = base;
      used = std::max(used, 1);
      continue;
    }
    const Graph comp_graph = g.induced(comp_vertices);
    const NfsTree tree = nfs_tree(comp_graph, 0);
    int offset = 0;
    for (const auto& level : tree.levels) {
      std::vector<std::size_t> level_vertices;
      for (std::size_t i : level) level_vertices.push_back(comp_vertices[i]);
      std::sort(level_vertices.begin(), level_vertices.end());
      offset += gyarfas_rec(g, level_vertices, base + offset, out);
    }
    used = std::max(used, offset);
  }
  return used;
}

}  // namespace

Coloring gyarfas_color(const Graph& g, int path_bound) {
  require(path_bound >= 1, "induced path bound must be >= 1");
  Coloring c{std::vector<int>(g.size(), -1), 0};
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  c.num_colors = gyarfas_rec(g, all, 0, c.color_of);
  return c;
}

std::vector<int> misra_gries_edge_coloring(std::size_t num_vertices,
                                           std::span<const std::pair<int, int>> edges) {
  const std::size_t nv = num_vertices;
  std::vector<std::vector<int>> color(nv, std::vector<int>(nv, -1));
  std::vector<std::vector<bool>> adjacent(nv, std::vector<bool>(nv, false));
  std::vector<int> degree(nv, 0);
  for (auto [a, b] : edges) {
    require(a != b && a >= 0 && b >= 0 && static_cast<std::size_t>(a) < nv && static_cast<std::size_t>(b) < nv,
            "invalid edge");
    require(!adjacent[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], "duplicate edge");
    adjacent[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    adjacent[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }
  const int palette = (degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end())) + 1;

  auto is_free = [&](std::size_t x, int c) {
    for (std::size_t y = 0; y < nv; ++y)
      if (color[x][y] == c) return false;
    return true;
  };
  auto lowest_free = [&](std::size_t x) {
    for (int c = 0; c < palette; ++c)
      if (is_free(x, c)) return c;
    throw Error("internal: no free color in Misra-Gries");
  };
  auto set_color = [&](std::size_t x, std::size_t y, int c) { color[x][y] = color[y][x] = c; };

  for (auto [ea, eb] : edges) {
    const auto u = static_cast<std::size_t>(ea);
    const auto v = static_cast<std::size_t>(eb);
    // Maximal fan of u starting at v.
    std::vector<std::size_t> fan{v};
    std::vector<bool> in_fan(nv, false);
    in_fan[v] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t w = 0; w < nv; ++w) {
        if (!adjacent[u][w] || in_fan[w] || color[u][w] < 0) continue;
        if (is_free(fan.back(), color[u][w])) {
          fan.push_back(w);
          in_fan[w] = true;
          grew = true;
          break;
        }
      }
    }
    const int c = lowest_free(u);
    const int d = lowest_free(fan.back());
    if (c != d) {
      // Invert the cd-path starting at u (u has no c edge, so it is an endpoint).
      std::vector<std::pair<std::size_t, std::size_t>> path;
      std::size_t x = u;
      int want = d;
      std::size_t prev = nv;
      while (true) {
        std::size_t next = nv;
        for (std::size_t y = 0; y < nv; ++y)
          if (y != prev && color[x][y] == want) {
            next = y;
            break;
          }
        if (next == nv) break;
        path.emplace_back(x, next);
        prev = x;
        x = next;
        want = (want == d) ? c : d;
      }
      for (auto [a, b] : path) set_color(a, b, color[a][b] == d ? c : d);
    }
    // First fan prefix that is still a fan and ends at a vertex where d is free.
    std::size_t w_index = fan.size();
    for (std::size_t i = 0; i < fan.size(); ++i) {
      if (i > 0 && (color[u][fan[i]] < 0 || !is_free(fan[i - 1], color[u][fan[i]]))) break;
      if (is_free(fan[i], d)) {
        w_index = i;
        break;
      }
    }
    require(w_index < fan.size(), "internal: Misra-Gries fan rotation failed");
    for (std::size_t i = 0; i < w_index; ++i) set_color(u, fan[i], color[u][fan[i + 1]]);
    set_color(u, fan[w_index], d);
  }

  std::vector<int> out;
  out.reserve(edges.size());
  for (auto [a, b] : edges) out.push_back(color[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
  return out;
}

Coloring misra_gries_1body(std::span<const MajoranaSupport> supports) {
  std::vector<std::pair<int, int>> edges;
  int num_vertices = 0;
  for (MajoranaSupport s : supports) {
    require(std::popcount(s) == 2, "misra_gries_1body requires degree-2 monomials");
    const int a = std::countr_zero(s);
    const int b = 63 - std::countl_zero(s);
    edges.emplace_back(a, b);
    num_vertices = std::max(num_vertices, b + 1);
  }
  const std::vector<int> edge_colors =
      misra_gries_edge_coloring(static_cast<std::size_t>(num_vertices), edges);
  // Compact the palette to the colors actually used.
  std::vector<int> remap;
  Coloring c;
  for (int col : edge_colors) {
    if (static_cast<std::size_t>(col) >= remap.size()) remap.resize(static_cast<std::size_t>(col) + 1, -1);
    if (remap[static_cast<std::size_t>(col)] < 0) remap[static_cast<std::size_t>(col)] = c.num_colors++;
    c.color_of.push_back(remap[static_cast<std::size_t>(col)]);
  }
  return c;
}

}  // namespace shadowtomo
