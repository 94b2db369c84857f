#pragma once

// Shared helpers for the test suites. The brute-force routines here are
// deliberately independent of the library's solver paths.

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "mrcf/core.hpp"
#include "mrcf/generators.hpp"

namespace mrcf_test {

using namespace mrcf;

// Instance with a uniform zero cost matrix unless entries are given.
inline Instance make_instance(int n, int q, int r,
                              std::vector<Edge> edges,
                              std::vector<Cost> costs = {},
                              std::optional<Cost> budget = std::nullopt) {
  if (costs.empty()) costs.assign((size_t)q * q, 0);
  return Instance(ColoredGraph(n, q, std::move(edges)),
                  CostMatrix(q, std::move(costs)), r, budget);
}

// Raw independent oracle: filter all 2^m edge subsets by degree.
inline std::vector<std::vector<EdgeIndex>> all_r_factors_raw(
    const Instance& inst) {
  const auto& g = inst.graph();
  const int m = g.edge_count();
  std::vector<std::vector<EdgeIndex>> found;
  for (unsigned long long mask = 0; mask < (1ull << m); ++mask) {
    std::vector<int> deg(g.vertex_count(), 0);
    std::vector<EdgeIndex> sel;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) {
        sel.push_back(i);
        ++deg[g.edge(i).u];
        ++deg[g.edge(i).v];
      }
    if (std::all_of(deg.begin(), deg.end(),
                    [&](int d) { return d == inst.r(); }))
      found.push_back(sel);
  }
  std::sort(found.begin(), found.end());
  return found;
}

// All perfect matchings of a small weighted graph, as (weight, pairs).
inline void enumerate_perfect_matchings(
    int n, const std::vector<WeightedEdge>& edges,
    const std::function<void(Cost, const std::vector<std::pair<int, int>>&)>&
        emit) {
  std::vector<std::vector<Cost>> w(n, std::vector<Cost>(n, -1));
  for (const auto& e : edges) {
    w[e.u][e.v] = std::max(w[e.u][e.v], e.weight);
    w[e.v][e.u] = w[e.u][e.v];
  }
  std::vector<int> mate(n, -1);
  std::vector<std::pair<int, int>> current;
  std::function<void(Cost)> rec = [&](Cost acc) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (mate[v] < 0) {
        u = v;
        break;
      }
    if (u < 0) {
      emit(acc, current);
      return;
    }
    for (int v = u + 1; v < n; ++v) {
      if (mate[v] >= 0 || w[u][v] < 0) continue;
      mate[u] = v;
      mate[v] = u;
      current.emplace_back(u, v);
      rec(acc + w[u][v]);
      current.pop_back();
      mate[u] = mate[v] = -1;
    }
  };
  rec(0);
}

// Exhaustive multicolored clique check: one vertex per class, pairwise
// adjacent across classes.
inline bool has_multicolored_clique(const VertexColoredGraph& h) {
  std::vector<std::vector<int>> members(h.class_count);
  for (int v = 0; v < h.vertex_count; ++v) members[h.classes[v]].push_back(v);
  std::vector<std::vector<bool>> adj(h.vertex_count,
                                     std::vector<bool>(h.vertex_count, false));
  for (auto [u, v] : h.edges) adj[u][v] = adj[v][u] = true;
  std::vector<int> pick;
  std::function<bool(int)> rec = [&](int cls) {
    if (cls == h.class_count) return true;
    for (int v : members[cls]) {
      bool ok = true;
      for (int u : pick)
        if (!adj[u][v]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pick.push_back(v);
      if (rec(cls + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

// Random instance with delta >= r and Delta <= r+1, for r in {2, 3}:
// r = 2 takes a Hamiltonian cycle plus a sprinkling of disjoint chords;
// r = 3 (even n) adds a perfect matching first.
inline Instance random_degree_bounded(int n, int r, int q, Cost cost_max,
                                      std::uint64_t seed) {
  if (r != 2 && r != 3) throw std::invalid_argument("r must be 2 or 3");
  SplitMix64 rng{seed};

  // One seed in four plants an off-cycle apex joined to three pairwise
  // non-adjacent base vertices. For r = 2 that makes G[R+] a claw, for
  // r = 3 it makes |R+| odd; either way no r-factor exists.
  bool plant_apex = rng.below(4) == 0;
  int base = n - (plant_apex ? 1 : 0);
  if (base < (plant_apex ? 8 : r + 2)) base = plant_apex ? 8 : r + 2;
  if (r == 3 && base % 2 != 0) ++base;  // 3-regular base needs even order
  n = base + (plant_apex ? 1 : 0);

  std::vector<Vertex> cycle(base);
  for (int i = 0; i < base; ++i) cycle[i] = i;
  for (int i = 1; i < base; ++i) {
    int j = 1 + (int)rng.below(i);  // keep 0 first, shuffle the rest
    std::swap(cycle[i], cycle[j]);
  }

  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::vector<int> deg(n, 0);
  std::vector<Edge> edges;
  auto add = [&](Vertex a, Vertex b) {
    Color c = (Color)rng.below(q);
    edges.push_back({a, b, c});
    used[a][b] = used[b][a] = true;
    ++deg[a];
    ++deg[b];
  };
  for (int i = 0; i < base; ++i) add(cycle[i], cycle[(i + 1) % base]);

  if (r == 3) {
    // random perfect matching over the base, avoiding cycle edges
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::vector<Vertex> order(base);
      for (int i = 0; i < base; ++i) order[i] = i;
      for (int i = 1; i < base; ++i) {
        int j = (int)rng.below(i + 1);
        std::swap(order[i], order[j]);
      }
      bool ok = true;
      for (int i = 0; i < base && ok; i += 2)
        if (used[order[i]][order[i + 1]]) ok = false;
      if (!ok) continue;
      for (int i = 0; i < base; i += 2) add(order[i], order[i + 1]);
      break;
    }
    if (deg[cycle[0]] == 2) {
      // retries exhausted; fall back to the antipodal matching
      for (int i = 0; i < base / 2; ++i)
        if (!used[i][i + base / 2]) add(i, i + base / 2);
    }
  }

  if (plant_apex) {
    // apex lands at degree 3: that is r+1 when r = 2 and exactly r when
    // r = 3, so the degree window stays intact either way
    Vertex apex = n - 1;
    for (int pos : {0, 2, 4}) add(apex, cycle[pos]);
  }

  // chords: raise a few vertices to degree r+1. With an apex planted they
  // keep clear of the hub neighborhood so the claw stays an isolated
  // component of G[R+].
  int lo = plant_apex ? 6 : 0;
  int hi = plant_apex ? base - 2 : base - 1;
  int extra = (int)rng.below(base / 2 + 1);
  for (int tries = 0; tries < 8 * extra && lo < hi; ++tries) {
    Vertex a = cycle[lo + (int)rng.below(hi - lo + 1)];
    Vertex b = cycle[lo + (int)rng.below(hi - lo + 1)];
    if (a == b || used[a][b] || deg[a] != r || deg[b] != r) continue;
    add(a, b);
  }

  std::vector<Cost> costs((size_t)q * q, 0);
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      costs[a * q + b] = costs[b * q + a] =
          (Cost)rng.below((std::uint64_t)cost_max + 1);
  return Instance(ColoredGraph(n, q, std::move(edges)),
                  CostMatrix(q, std::move(costs)), r, std::nullopt);
}

// Random weighted graph for matching tests.
inline std::vector<WeightedEdge> random_weighted_graph(int n, int m,
                                                       Cost w_max,
                                                       std::uint64_t seed) {
  SplitMix64 rng{seed};
  std::vector<std::pair<int, int>> all;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
  m = std::min<int>(m, (int)all.size());
  for (int i = 0; i < m; ++i) {
    size_t j = i + rng.below(all.size() - i);
    std::swap(all[i], all[j]);
  }
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < m; ++i)
    edges.push_back({all[i].first, all[i].second,
                     (Cost)rng.below((std::uint64_t)w_max + 1)});
  return edges;
}

inline EdgeSubgraph full_subgraph(const Instance& inst) {
  std::vector<EdgeIndex> idx(inst.graph().edge_count());
  for (int i = 0; i < (int)idx.size(); ++i) idx[i] = i;
  return EdgeSubgraph(inst.graph(), idx);
}

}  // namespace mrcf_test
