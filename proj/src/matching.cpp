#include "mrcf/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace mrcf {

namespace {

// Maximum-weight matching on a general graph in O(n^3), primal-dual with
// blossom shrinking. Vertices are 1..n internally; ids n+1..2n are blossom
// slots. Weights enter doubled through e_delta so dual adjustments stay
// integral. Matched weight is maximized; vertices may stay unmatched.
class WeightedBlossom {
 public:
  explicit WeightedBlossom(int n) : n_(n), max_id_(n) {
    int cap = 2 * n_ + 1;
    weight_.assign(cap, std::vector<EdgeSlot>(cap));
    for (int u = 0; u < cap; ++u)
      for (int v = 0; v < cap; ++v) weight_[u][v] = EdgeSlot{u, v, 0};
    label_.assign(cap, 0);
    match_.assign(cap, 0);
    slack_.assign(cap, 0);
    top_.assign(cap, 0);
    parent_.assign(cap, 0);
    side_.assign(cap, kFree);
    visit_.assign(cap, 0);
    ring_.assign(cap, {});
    ring_from_.assign(cap, std::vector<int>(n_ + 1, 0));
  }

  void add_edge(int u, int v, Cost w) {  // 0-based endpoints
    ++u, ++v;
    if (w > weight_[u][v].w) weight_[u][v].w = weight_[v][u].w = w;
  }

  // Returns (total matched weight, matched pair count).
  std::pair<Cost, int> run() {
    Cost w_max = 0;
    for (int u = 1; u <= n_; ++u) {
      top_[u] = u;
      ring_[u].clear();
      for (int v = 1; v <= n_; ++v) {
        ring_from_[u][v] = (u == v ? u : 0);
        w_max = std::max(w_max, weight_[u][v].w);
      }
    }
    max_id_ = n_;
    for (int u = 1; u <= n_; ++u) label_[u] = w_max;
    int pairs = 0;
    while (grow()) ++pairs;
    Cost total = 0;
    for (int u = 1; u <= n_; ++u)
      if (match_[u] && match_[u] < u)
        total = checked_add(total, weight_[u][match_[u]].w);
    return {total, pairs};
  }

  int mate(int u) const { return match_[u + 1] - 1; }  // -1 if unmatched

 private:
  struct EdgeSlot {
    int u = 0, v = 0;
    Cost w = 0;
  };
  static constexpr int kEven = 0;  // S-side of the alternating forest
  static constexpr int kOdd = 1;
  static constexpr int kFree = -1;

  Cost e_delta(const EdgeSlot& e) const {
    return label_[e.u] + label_[e.v] - weight_[e.u][e.v].w * 2;
  }

  void update_slack(int u, int x) {
    if (!slack_[x] || e_delta(weight_[u][x]) < e_delta(weight_[slack_[x]][x]))
      slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (weight_[u][x].w > 0 && top_[u] != x && side_[top_[u]] == kEven)
        update_slack(u, x);
  }

  void push_even(int x) {
    if (x <= n_) {
      queue_.push_back(x);
      return;
    }
    for (int sub : ring_[x]) push_even(sub);
  }

  void set_top(int x, int b) {
    top_[x] = b;
    if (x > n_)
      for (int sub : ring_[x]) set_top(sub, b);
  }

  // Position of xr inside blossom b's ring, rotated so it is even.
  int ring_pos(int b, int xr) {
    int pr = static_cast<int>(
        std::find(ring_[b].begin(), ring_[b].end(), xr) - ring_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(ring_[b].begin() + 1, ring_[b].end());
      return static_cast<int>(ring_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = weight_[u][v].v;
    if (u <= n_) return;
    EdgeSlot e = weight_[u][v];
    int xr = ring_from_[u][e.u];
    int pr = ring_pos(u, xr);
    for (int i = 0; i < pr; ++i) set_match(ring_[u][i], ring_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(ring_[u].begin(), ring_[u].begin() + pr, ring_[u].end());
  }

  void augment(int u, int v) {
    while (true) {
      int xnv = top_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, top_[parent_[xnv]]);
      u = top_[parent_[xnv]];
      v = xnv;
    }
  }

  int lowest_common_blossom(int u, int v) {
    ++stamp_;
    while (u || v) {
      if (u) {
        if (visit_[u] == stamp_) return u;
        visit_[u] = stamp_;
        u = top_[match_[u]];
        if (u) u = top_[parent_[u]];
      }
      std::swap(u, v);
    }
    return 0;
  }

  void add_blossom(int u, int anchor, int v) {
    int b = n_ + 1;
    while (b <= max_id_ && top_[b]) ++b;
    if (b > max_id_) ++max_id_;
    label_[b] = 0;
    side_[b] = kEven;
    match_[b] = match_[anchor];
    ring_[b].clear();
    ring_[b].push_back(anchor);
    for (int x = u, y; x != anchor; x = top_[parent_[y]]) {
      ring_[b].push_back(x);
      ring_[b].push_back(y = top_[match_[x]]);
      push_even(y);
    }
    std::reverse(ring_[b].begin() + 1, ring_[b].end());
    for (int x = v, y; x != anchor; x = top_[parent_[y]]) {
      ring_[b].push_back(x);
      ring_[b].push_back(y = top_[match_[x]]);
      push_even(y);
    }
    set_top(b, b);
    for (int x = 1; x <= max_id_; ++x)
      weight_[b][x].w = weight_[x][b].w = 0;
    for (int x = 1; x <= n_; ++x) ring_from_[b][x] = 0;
    for (int xs : ring_[b]) {
      for (int x = 1; x <= max_id_; ++x)
        if (weight_[b][x].w == 0 ||
            e_delta(weight_[xs][x]) < e_delta(weight_[b][x])) {
          weight_[b][x] = weight_[xs][x];
          weight_[x][b] = weight_[x][xs];
        }
      for (int x = 1; x <= n_; ++x)
        if (ring_from_[xs][x]) ring_from_[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {  // side_[b] == kOdd and label_[b] == 0
    for (int sub : ring_[b]) set_top(sub, sub);
    int xr = ring_from_[b][weight_[b][parent_[b]].u];
    int pr = ring_pos(b, xr);
    for (int i = 0; i < pr; i += 2) {
      int xs = ring_[b][i];
      int xns = ring_[b][i + 1];
      parent_[xs] = weight_[xns][xs].u;
      side_[xs] = kOdd;
      side_[xns] = kEven;
      slack_[xs] = 0;
      set_slack(xns);
      push_even(xns);
    }
    side_[xr] = kOdd;
    parent_[xr] = parent_[b];
    for (int i = pr + 1; i < static_cast<int>(ring_[b].size()); ++i) {
      int xs = ring_[b][i];
      side_[xs] = kFree;
      set_slack(xs);
    }
    top_[b] = 0;
  }

  bool on_tight_edge(const EdgeSlot& e) {
    int u = top_[e.u], v = top_[e.v];
    if (side_[v] == kFree) {
      parent_[v] = e.u;
      side_[v] = kOdd;
      int nu = top_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      side_[nu] = kEven;
      push_even(nu);
    } else if (side_[v] == kEven) {
      int anchor = lowest_common_blossom(u, v);
      if (!anchor) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, anchor, v);
    }
    return false;
  }

  bool grow() {
    std::fill(side_.begin() + 1, side_.begin() + max_id_ + 1, kFree);
    std::fill(slack_.begin() + 1, slack_.begin() + max_id_ + 1, 0);
    queue_.clear();
    for (int x = 1; x <= max_id_; ++x)
      if (top_[x] == x && !match_[x]) {
        parent_[x] = 0;
        side_[x] = kEven;
        push_even(x);
      }
    if (queue_.empty()) return false;
    while (true) {
      while (!queue_.empty()) {
        int u = queue_.front();
        queue_.pop_front();
        if (side_[top_[u]] == kOdd) continue;
        for (int v = 1; v <= n_; ++v)
          if (weight_[u][v].w > 0 && top_[u] != top_[v]) {
            if (e_delta(weight_[u][v]) == 0) {
              if (on_tight_edge(weight_[u][v])) return true;
            } else {
              update_slack(u, top_[v]);
            }
          }
      }
      Cost d = std::numeric_limits<Cost>::max();
      for (int b = n_ + 1; b <= max_id_; ++b)
        if (top_[b] == b && side_[b] == kOdd) d = std::min(d, label_[b] / 2);
      for (int x = 1; x <= max_id_; ++x)
        if (top_[x] == x && slack_[x]) {
          if (side_[x] == kFree)
            d = std::min(d, e_delta(weight_[slack_[x]][x]));
          else if (side_[x] == kEven)
            d = std::min(d, e_delta(weight_[slack_[x]][x]) / 2);
        }
      for (int u = 1; u <= n_; ++u) {
        if (side_[top_[u]] == kEven) {
          if (label_[u] <= d) return false;  // duals exhausted: optimum
          label_[u] -= d;
        } else if (side_[top_[u]] == kOdd) {
          label_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= max_id_; ++b)
        if (top_[b] == b) {
          if (side_[b] == kEven)
            label_[b] += d * 2;
          else if (side_[b] == kOdd)
            label_[b] -= d * 2;
        }
      queue_.clear();
      for (int x = 1; x <= max_id_; ++x)
        if (top_[x] == x && slack_[x] && top_[slack_[x]] != x &&
            e_delta(weight_[slack_[x]][x]) == 0)
          if (on_tight_edge(weight_[slack_[x]][x])) return true;
      for (int b = n_ + 1; b <= max_id_; ++b)
        if (top_[b] == b && side_[b] == kOdd && label_[b] == 0)
          expand_blossom(b);
    }
  }

  int n_;
  int max_id_;
  std::vector<std::vector<EdgeSlot>> weight_;
  std::vector<Cost> label_;
  std::vector<int> match_, slack_, top_, parent_, side_, visit_;
  std::vector<std::vector<int>> ring_;
  std::vector<std::vector<int>> ring_from_;
  std::deque<int> queue_;
  int stamp_ = 0;
};

}  // namespace

DegreePartition degree_partition(const Instance& inst) {
  const ColoredGraph& g = inst.graph();
  DegreePartition part;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    int d = g.degree(v);
    if (d == inst.r())
      part.degree_r.push_back(v);
    else if (d == inst.r() + 1)
      part.degree_r_plus.push_back(v);
    else
      throw UnsupportedInstance(
          "degree-bounded solver needs every degree in {r, r+1}; vertex " +
          std::to_string(v) + " has degree " + std::to_string(d));
  }
  return part;
}

Cost derived_edge_weight(const Instance& inst, EdgeIndex e) {
  const ColoredGraph& g = inst.graph();
  const Edge& edge = g.edge(e);
  Cost w = 0;
  for (Vertex endpoint : {edge.u, edge.v})
    for (EdgeIndex other : g.incident_edges(endpoint))
      if (other != e) w = checked_add(w, traversal_cost(inst, e, other));
  return w;
}

std::optional<Matching> max_weight_perfect_matching(
    int vertex_count, const std::vector<WeightedEdge>& edges) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  if (vertex_count % 2 != 0) return std::nullopt;
  if (vertex_count == 0) return Matching{};
  if (vertex_count > 2048)
    throw UnsupportedInstance("matching engine capped at 2048 vertices");

  // Uniform offset per edge makes maximum weight imply maximum cardinality,
  // which reduces perfect to plain maximum-weight matching.
  Cost offset = 1;
  for (const WeightedEdge& e : edges) {
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count ||
        e.u == e.v)
      throw std::invalid_argument("bad matching edge");
    if (e.weight < 0) throw std::invalid_argument("negative edge weight");
    offset = checked_add(offset, e.weight);
  }
  if (offset > (std::numeric_limits<Cost>::max() >> 4) / (vertex_count + 1))
    throw std::overflow_error("matching weights too large");

  WeightedBlossom engine(vertex_count);
  std::map<std::pair<int, int>, Cost> plain;
  for (const WeightedEdge& e : edges) {
    auto key = std::minmax(e.u, e.v);
    auto it = plain.find(key);
    if (it == plain.end() || it->second < e.weight) plain[key] = e.weight;
  }
  for (const auto& [key, w] : plain)
    engine.add_edge(key.first, key.second, w + offset);
  int pair_count = engine.run().second;
  if (pair_count * 2 != vertex_count) return std::nullopt;

  Matching result;
  for (int u = 0; u < vertex_count; ++u) {
    int v = engine.mate(u);
    if (v > u) {
      result.pairs.emplace_back(u, v);
      result.weight = checked_add(result.weight, plain.at({u, v}));
    }
  }
  return result;
}

std::optional<Solution> solve_degree_bounded(const Instance& inst) {
  const ColoredGraph& g = inst.graph();
  DegreePartition part = degree_partition(inst);

  // Any r-factor is G minus a perfect matching of G[R+], so maximizing the
  // removed weight minimizes the reload cost that remains.
  std::vector<int> local(g.vertex_count(), -1);
  for (size_t i = 0; i < part.degree_r_plus.size(); ++i)
    local[part.degree_r_plus[i]] = static_cast<int>(i);
  std::vector<WeightedEdge> candidates;
  std::map<std::pair<int, int>, EdgeIndex> by_pair;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (local[edge.u] < 0 || local[edge.v] < 0) continue;
    WeightedEdge we;
    we.u = local[edge.u];
    we.v = local[edge.v];
    we.weight = derived_edge_weight(inst, e);
    candidates.push_back(we);
    by_pair[std::minmax(we.u, we.v)] = e;
  }

  auto matching = max_weight_perfect_matching(
      static_cast<int>(part.degree_r_plus.size()), candidates);
  if (!matching) return std::nullopt;

  std::vector<EdgeIndex> all_idx(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) all_idx[i] = i;
  Cost full_cost = total_reload_cost(inst, EdgeSubgraph(g, all_idx));

  std::vector<bool> removed(g.edge_count(), false);
  Cost removed_weight = 0;
  for (auto [a, b] : matching->pairs) {
    EdgeIndex e = by_pair.at(std::minmax(a, b));
    removed[e] = true;
    removed_weight = checked_add(removed_weight, derived_edge_weight(inst, e));
  }

  Solution sol;
  sol.cost = full_cost - removed_weight;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    if (!removed[e]) sol.edges.push_back(e);
  return sol;
}

}  // namespace mrcf
