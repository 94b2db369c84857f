#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mrcf {

using Vertex = int;
using EdgeIndex = int;
using Color = int;

// All reload costs are non-negative integers; no floating point anywhere in
// the objective.
using Cost = long long;

// Adds non-negative costs, refusing to wrap around.
Cost checked_add(Cost a, Cost b);

struct Edge {
  Vertex u = -1;
  Vertex v = -1;
  Color color = -1;

  Vertex other(Vertex w) const { return w == u ? v : u; }
  bool touches(Vertex w) const { return w == u || w == v; }
  bool operator==(const Edge&) const = default;
};

// Undirected edge-colored graph. Vertices are 0..vertex_count-1, colors
// 0..color_count-1. Self loops and parallel edges are rejected.
class ColoredGraph {
 public:
  ColoredGraph() = default;
  ColoredGraph(int vertex_count, int color_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int color_count() const { return color_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

  std::span<const EdgeIndex> incident_edges(Vertex v) const;
  int degree(Vertex v) const;
  int max_degree() const;  // 0 for an empty graph
  int min_degree() const;  // 0 for an empty graph

  // Index of the edge {u, v}, if present.
  std::optional<EdgeIndex> find_edge(Vertex u, Vertex v) const;

 private:
  int vertex_count_ = 0;
  int color_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> incidence_;
};

// Symmetric matrix of traversal costs between colors.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int color_count, std::vector<Cost> entries);  // row-major q*q

  int color_count() const { return color_count_; }
  Cost cost(Color a, Color b) const;
  Cost min_entry() const { return min_entry_; }     // c_min (0 if q = 0)
  int distinct_count() const { return distinct_; }  // d

  bool operator==(const CostMatrix&) const = default;

 private:
  int color_count_ = 0;
  std::vector<Cost> entries_;
  Cost min_entry_ = 0;
  int distinct_ = 0;
};

inline constexpr Cost kUnbounded = -1;

// One problem instance: graph, costs, target degree r, and budget k.
// budget == nullopt means the budget is unbounded ("inf" in files).
class Instance {
 public:
  Instance() = default;
  Instance(ColoredGraph graph, CostMatrix costs, int r,
           std::optional<Cost> budget);

  const ColoredGraph& graph() const { return graph_; }
  const CostMatrix& costs() const { return costs_; }
  int r() const { return r_; }
  const std::optional<Cost>& budget() const { return budget_; }

 private:
  ColoredGraph graph_;
  CostMatrix costs_;
  int r_ = 2;
  std::optional<Cost> budget_;
};

// A subset of the instance's edges, kept sorted and duplicate-free.
class EdgeSubgraph {
 public:
  EdgeSubgraph() = default;
  EdgeSubgraph(const ColoredGraph& graph, std::vector<EdgeIndex> selected);

  const std::vector<EdgeIndex>& selected() const { return selected_; }
  int size() const { return static_cast<int>(selected_.size()); }
  bool contains(EdgeIndex e) const;

  bool operator==(const EdgeSubgraph&) const = default;

 private:
  std::vector<EdgeIndex> selected_;
};

// c(chi(e1), chi(e2)) for two distinct edges sharing exactly one endpoint.
Cost traversal_cost(const Instance& inst, EdgeIndex e1, EdgeIndex e2);

// Sum of traversal costs over unordered pairs of selected edges at v.
Cost vertex_reload_cost(const Instance& inst, const EdgeSubgraph& sub,
                        Vertex v);

// rc(H): sum of vertex_reload_cost over all vertices.
Cost total_reload_cost(const Instance& inst, const EdgeSubgraph& sub);

struct FactorReport {
  bool ok = true;
  std::vector<std::pair<Vertex, int>> bad_degrees;  // (vertex, actual degree)
};

// ok iff every vertex has exactly r selected incident edges.
FactorReport validate_r_factor(const Instance& inst, const EdgeSubgraph& sub);

// Universal lower bound c_min * |V| * C(r, 2) on any r-factor's reload cost.
Cost k_min(const Instance& inst);

// A solver answer: the optimum cost together with a witness factor.
struct Solution {
  Cost cost = 0;
  std::vector<EdgeIndex> edges;
};

// Plain weighted graph vocabulary shared by the matching solver and its
// brute-force oracle.
struct WeightedEdge {
  int u = -1;
  int v = -1;
  Cost weight = 0;
};

struct Matching {
  Cost weight = 0;
  std::vector<std::pair<int, int>> pairs;
};

// Thrown by solvers that refuse an instance outside their contract.
struct UnsupportedInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mrcf
