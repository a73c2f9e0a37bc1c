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

#include "shadowtomo/fractional.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

namespace shadowtomo {

FractionalColoring uniform_over_classes(const Coloring& coloring, std::string engine) {
  FractionalColoring fc;
  fc.num_vertices = coloring.color_of.size();
  fc.engine = std::move(engine);
  auto classes = std::make_shared<std::vector<VertexSet>>(static_cast<std::size_t>(coloring.num_colors));
  for (std::size_t v = 0; v < coloring.color_of.size(); ++v)
    (*classes)[static_cast<std::size_t>(coloring.color_of[v])].push_back(static_cast<std::uint32_t>(v));
  const int k = std::max(coloring.num_colors, 1);
  fc.size_chi = static_cast<double>(k);
  fc.size_bound = static_cast<double>(k);
  fc.coverage.assign(fc.num_vertices, 1.0 / k);
  std::vector<WeightedSet> dist;
  for (const auto& c : *classes) dist.push_back({c, 1.0 / k});
  fc.explicit_distribution = std::move(dist);
  fc.sample = [classes](CounterRng& rng) -> VertexSet {
    if (classes->empty()) return {};
    return (*classes)[static_cast<std::size_t>(rng.below(classes->size()))];
  };
  return fc;
}

double kbody_size_bound(int degree, double omega) {
  require(degree >= 2, "f_r is defined for r >= 2");
  if (degree == 2) return omega + 1.0;
  const double prev = kbody_size_bound(degree - 1, omega);
  if (degree % 2 == 1) return degree * omega * prev;
  return std::pow(prev, degree);
}

namespace {

struct Node {
  enum class Kind { empty, base, odd, even };
  Kind kind = Kind::empty;
  int degree = 0;
  std::vector<std::uint32_t> ids;  // original vertex ids, ascending
  // base
  std::vector<VertexSet> classes;
  // odd: one child per index of the witness support (null when that part is empty)
  std::size_t num_parts = 0;
  // odd and even children
  std::vector<std::unique_ptr<Node>> children;
  int omega = 0;

  VertexSet sample(CounterRng& rng) const {
    switch (kind) {
      case Kind::empty: return {};
      case Kind::base: return classes[static_cast<std::size_t>(rng.below(classes.size()))];
      case Kind::odd: {
        const auto& child = children[static_cast<std::size_t>(rng.below(num_parts))];
        return child ? child->sample(rng) : VertexSet{};
      }
      case Kind::even: {
        // A vertex survives when every index in its support selected it.
        std::vector<int> hits(ids.size(), 0);
        for (const auto& child : children)
          for (std::uint32_t id : child->sample(rng)) {
            const auto pos = std::lower_bound(ids.begin(), ids.end(), id) - ids.begin();
            ++hits[static_cast<std::size_t>(pos)];
          }
        VertexSet out;
        for (std::size_t i = 0; i < ids.size(); ++i)
          if (hits[i] == degree) out.push_back(ids[i]);
        return out;
      }
    }
    return {};
  }
};

// Builds the sampler tree and writes the exact inclusion probability of each vertex
// (keyed by original id) into `coverage`.
std::unique_ptr<Node> build(std::vector<std::uint32_t> ids, std::vector<MajoranaSupport> supports, int degree,
                            std::vector<double>& coverage) {
  auto node = std::make_unique<Node>();
  node->degree = degree;
  node->ids = ids;
  if (ids.empty()) return node;

  if (degree == 2) {
    node->kind = Node::Kind::base;
    const Coloring c = misra_gries_1body(supports);
    node->classes.assign(static_cast<std::size_t>(c.num_colors), {});
    for (std::size_t i = 0; i < ids.size(); ++i) {
      node->classes[static_cast<std::size_t>(c.color_of[i])].push_back(ids[i]);
      coverage[ids[i]] = 1.0 / c.num_colors;
    }
    // Edges of the auxiliary graph meeting at one Majorana form a clique.
    int max_deg = 0;
    for (int a = 0; a < 64; ++a) {
      int d = 0;
      for (MajoranaSupport s : supports) d += static_cast<int>((s >> a) & 1U);
      max_deg = std::max(max_deg, d);
    }
    node->omega = max_deg;
    return node;
  }

  if (degree % 2 == 1) {
    node->kind = Node::Kind::odd;
    // Greedy maximal anticommuting set, lowest id first, scanning in id order.
    std::vector<std::size_t> witness{0};
    for (std::size_t v = 1; v < supports.size(); ++v) {
      bool anticommutes_all = true;
      for (std::size_t w : witness)
        if (monomial_commutes(supports[v], supports[w])) {
          anticommutes_all = false;
          break;
        }
      if (anticommutes_all) witness.push_back(v);
    }
    MajoranaSupport index_union = 0;
    for (std::size_t w : witness) index_union |= supports[w];
    std::vector<int> index_list;
    for (MajoranaSupport rest = index_union; rest != 0; rest &= rest - 1)
      index_list.push_back(std::countr_zero(rest));
    node->num_parts = index_list.size();
    std::vector<std::vector<std::uint32_t>> part_ids(index_list.size());
    std::vector<std::vector<MajoranaSupport>> part_supports(index_list.size());
    for (std::size_t v = 0; v < supports.size(); ++v) {
      std::size_t p = 0;
      while (p < index_list.size() && !((supports[v] >> index_list[p]) & 1U)) ++p;
      require(p < index_list.size(), "internal: vertex misses the maximal anticommuting set");
      part_ids[p].push_back(ids[v]);
      part_supports[p].push_back(supports[v] ^ (MajoranaSupport{1} << index_list[p]));
    }
    node->omega = static_cast<int>(witness.size());
    for (std::size_t p = 0; p < index_list.size(); ++p) {
      if (part_ids[p].empty()) {
        node->children.push_back(nullptr);
        continue;
      }
      auto child = build(part_ids[p], part_supports[p], degree - 1, coverage);
      for (std::uint32_t id : part_ids[p]) coverage[id] /= static_cast<double>(index_list.size());
      node->omega = std::max(node->omega, child->omega);
      node->children.push_back(std::move(child));
    }
    return node;
  }

  node->kind = Node::Kind::even;
  MajoranaSupport index_union = 0;
  for (MajoranaSupport s : supports) index_union |= s;
  std::vector<double> product(ids.size(), 1.0);
  for (MajoranaSupport rest = index_union; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    std::vector<std::uint32_t> w_ids;
    std::vector<MajoranaSupport> w_supports;
    std::vector<std::size_t> w_local;
    for (std::size_t v = 0; v < supports.size(); ++v)
      if ((supports[v] >> i) & 1U) {
        w_ids.push_back(ids[v]);
        w_supports.push_back(supports[v] ^ (MajoranaSupport{1} << i));
        w_local.push_back(v);
      }
    auto child = build(w_ids, w_supports, degree - 1, coverage);
    for (std::size_t j = 0; j < w_ids.size(); ++j) product[w_local[j]] *= coverage[w_ids[j]];
    node->omega = std::max(node->omega, child->omega);
    node->children.push_back(std::move(child));
  }
  for (std::size_t v = 0; v < ids.size(); ++v) coverage[ids[v]] = product[v];
  return node;
}

using Mask = std::vector<std::uint64_t>;
using Distribution = std::map<Mask, double>;

constexpr std::size_t kExactSupportCap = std::size_t{1} << 20;

void set_bit(Mask& m, std::uint32_t id) { m[id / 64] |= std::uint64_t{1} << (id % 64); }

Mask mask_of(const std::vector<std::uint32_t>& ids, std::size_t words) {
  Mask m(words, 0);
  for (std::uint32_t id : ids) set_bit(m, id);
  return m;
}

// Exact law of Node::sample as a map from vertex mask to probability; empty when the
// support would exceed the cap.
std::optional<Distribution> exact_distribution(const Node& node, std::size_t words) {
  Distribution out;
  switch (node.kind) {
    case Node::Kind::empty: out[Mask(words, 0)] = 1.0; return out;
    case Node::Kind::base:
      for (const auto& c : node.classes) out[mask_of(c, words)] += 1.0 / static_cast<double>(node.classes.size());
      return out;
    case Node::Kind::odd: {
      const double w = 1.0 / static_cast<double>(node.num_parts);
      for (const auto& child : node.children) {
        if (!child) {
          out[Mask(words, 0)] += w;
          continue;
        }
        const auto d = exact_distribution(*child, words);
        if (!d) return std::nullopt;
        for (const auto& [m, p] : *d) out[m] += w * p;
        if (out.size() > kExactSupportCap) return std::nullopt;
      }
      return out;
    }
    case Node::Kind::even: {
      out[mask_of(node.ids, words)] = 1.0;
      for (const auto& child : node.children) {
        const auto d = exact_distribution(*child, words);
        if (!d) return std::nullopt;
        const Mask w = mask_of(child->ids, words);
        Distribution next;
        for (const auto& [alive, p] : out)
          for (const auto& [picked, q] : *d) {
            Mask m = alive;
            for (std::size_t i = 0; i < words; ++i) m[i] &= ~(w[i] & ~picked[i]);
            next[m] += p * q;
            if (next.size() > kExactSupportCap) return std::nullopt;
          }
        out = std::move(next);
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

FractionalColoring kbody_fractional_coloring(std::span<const MajoranaSupport> supports) {
  FractionalColoring fc;
  fc.num_vertices = supports.size();
  fc.engine = "kbody";
  if (supports.empty()) {
    fc.sample = [](CounterRng&) { return VertexSet{}; };
    fc.explicit_distribution = std::vector<WeightedSet>{{{}, 1.0}};
    return fc;
  }
  const int degree = std::popcount(supports.front());
  require(degree >= 2, "k-body fractional coloring needs degree >= 2");
  for (MajoranaSupport s : supports)
    require(std::popcount(s) == degree, "k-body fractional coloring needs uniform degree (mixed degrees given)");
  std::vector<std::uint32_t> ids(supports.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint32_t>(i);
  fc.coverage.assign(supports.size(), 1.0);
  std::shared_ptr<const Node> root =
      build(ids, std::vector<MajoranaSupport>(supports.begin(), supports.end()), degree, fc.coverage);
  fc.omega_used = std::max(root->omega, 1);
  fc.size_bound = kbody_size_bound(degree, fc.omega_used);
  const double min_cov = *std::min_element(fc.coverage.begin(), fc.coverage.end());
  fc.size_chi = 1.0 / min_cov;
  if (const auto exact = exact_distribution(*root, (supports.size() + 63) / 64)) {
    std::vector<WeightedSet> dist;
    for (const auto& [m, p] : *exact) {
      VertexSet set;
      for (std::size_t w = 0; w < m.size(); ++w)
        for (std::uint64_t rest = m[w]; rest != 0; rest &= rest - 1)
          set.push_back(static_cast<std::uint32_t>(64 * w + static_cast<std::size_t>(std::countr_zero(rest))));
      dist.push_back({std::move(set), p});
    }
    fc.explicit_distribution = std::move(dist);
  }
  fc.sample = [root](CounterRng& rng) { return root->sample(rng); };
  return fc;
}

}  // namespace shadowtomo
