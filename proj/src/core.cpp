#include "mrcf/core.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mrcf {

Cost checked_add(Cost a, Cost b) {
  Cost out;
  if (__builtin_add_overflow(a, b, &out))
    throw std::overflow_error("reload cost sum overflows 64-bit range");
  return out;
}

ColoredGraph::ColoredGraph(int vertex_count, int color_count,
                           std::vector<Edge> edges)
    : vertex_count_(vertex_count),
      color_count_(color_count),
      edges_(std::move(edges)) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  if (color_count < 0) throw std::invalid_argument("negative color count");
  incidence_.assign(vertex_count_, {});
  std::set<std::pair<Vertex, Vertex>> seen;
  for (EdgeIndex i = 0; i < static_cast<int>(edges_.size()); ++i) {
    const Edge& e = edges_[i];
    if (e.u < 0 || e.u >= vertex_count_ || e.v < 0 || e.v >= vertex_count_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self loop rejected");
    if (e.color < 0 || e.color >= color_count_)
      throw std::invalid_argument("edge color out of range");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      throw std::invalid_argument("parallel edge rejected");
    incidence_[e.u].push_back(i);
    incidence_[e.v].push_back(i);
  }
}

std::span<const EdgeIndex> ColoredGraph::incident_edges(Vertex v) const {
  return incidence_.at(v);
}

int ColoredGraph::degree(Vertex v) const {
  return static_cast<int>(incidence_.at(v).size());
}

int ColoredGraph::max_degree() const {
  int d = 0;
  for (const auto& inc : incidence_) d = std::max(d, (int)inc.size());
  return d;
}

int ColoredGraph::min_degree() const {
  if (vertex_count_ == 0) return 0;
  int d = std::numeric_limits<int>::max();
  for (const auto& inc : incidence_) d = std::min(d, (int)inc.size());
  return d;
}

std::optional<EdgeIndex> ColoredGraph::find_edge(Vertex u, Vertex v) const {
  if (u < 0 || u >= vertex_count_ || v < 0 || v >= vertex_count_)
    return std::nullopt;
  for (EdgeIndex e : incidence_[u])
    if (edges_[e].other(u) == v) return e;
  return std::nullopt;
}

CostMatrix::CostMatrix(int color_count, std::vector<Cost> entries)
    : color_count_(color_count), entries_(std::move(entries)) {
  if (color_count < 0) throw std::invalid_argument("negative color count");
  if ((long long)entries_.size() != (long long)color_count_ * color_count_)
    throw std::invalid_argument("cost matrix size mismatch");
  std::set<Cost> values;
  for (int a = 0; a < color_count_; ++a) {
    for (int b = 0; b < color_count_; ++b) {
      Cost c = entries_[a * color_count_ + b];
      if (c < 0) throw std::invalid_argument("negative traversal cost");
      if (c != entries_[b * color_count_ + a])
        throw std::invalid_argument("cost matrix not symmetric");
      values.insert(c);
    }
  }
  min_entry_ = values.empty() ? 0 : *values.begin();
  distinct_ = static_cast<int>(values.size());
}

Cost CostMatrix::cost(Color a, Color b) const {
  if (a < 0 || a >= color_count_ || b < 0 || b >= color_count_)
    throw std::invalid_argument("color out of range in cost lookup");
  return entries_[a * color_count_ + b];
}

Instance::Instance(ColoredGraph graph, CostMatrix costs, int r,
                   std::optional<Cost> budget)
    : graph_(std::move(graph)),
      costs_(std::move(costs)),
      r_(r),
      budget_(budget) {
  if (costs_.color_count() != graph_.color_count())
    throw std::invalid_argument("cost matrix and graph disagree on q");
  if (r_ < 2) throw std::invalid_argument("r must be at least 2");
  if (budget_ && *budget_ < 0)
    throw std::invalid_argument("negative budget");
}

EdgeSubgraph::EdgeSubgraph(const ColoredGraph& graph,
                           std::vector<EdgeIndex> selected)
    : selected_(std::move(selected)) {
  std::sort(selected_.begin(), selected_.end());
  for (size_t i = 0; i < selected_.size(); ++i) {
    if (selected_[i] < 0 || selected_[i] >= graph.edge_count())
      throw std::invalid_argument("edge index out of range");
    if (i > 0 && selected_[i] == selected_[i - 1])
      throw std::invalid_argument("duplicate edge index");
  }
}

bool EdgeSubgraph::contains(EdgeIndex e) const {
  return std::binary_search(selected_.begin(), selected_.end(), e);
}

Cost traversal_cost(const Instance& inst, EdgeIndex e1, EdgeIndex e2) {
  const ColoredGraph& g = inst.graph();
  if (e1 < 0 || e1 >= g.edge_count() || e2 < 0 || e2 >= g.edge_count())
    throw std::invalid_argument("edge index out of range");
  if (e1 == e2) throw std::invalid_argument("traversal needs two distinct edges");
  const Edge& a = g.edge(e1);
  const Edge& b = g.edge(e2);
  if (!(b.touches(a.u) || b.touches(a.v)))
    throw std::invalid_argument("edges are not incident");
  return inst.costs().cost(a.color, b.color);
}

Cost vertex_reload_cost(const Instance& inst, const EdgeSubgraph& sub,
                        Vertex v) {
  const ColoredGraph& g = inst.graph();
  if (v < 0 || v >= g.vertex_count())
    throw std::invalid_argument("vertex id out of range");
  std::vector<Color> colors;
  for (EdgeIndex e : g.incident_edges(v))
    if (sub.contains(e)) colors.push_back(g.edge(e).color);
  Cost sum = 0;
  for (size_t i = 0; i < colors.size(); ++i)
    for (size_t j = i + 1; j < colors.size(); ++j)
      sum = checked_add(sum, inst.costs().cost(colors[i], colors[j]));
  return sum;
}

Cost total_reload_cost(const Instance& inst, const EdgeSubgraph& sub) {
  Cost sum = 0;
  for (Vertex v = 0; v < inst.graph().vertex_count(); ++v)
    sum = checked_add(sum, vertex_reload_cost(inst, sub, v));
  return sum;
}

FactorReport validate_r_factor(const Instance& inst, const EdgeSubgraph& sub) {
  const ColoredGraph& g = inst.graph();
  std::vector<int> deg(g.vertex_count(), 0);
  for (EdgeIndex e : sub.selected()) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  FactorReport report;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (deg[v] != inst.r()) {
      report.ok = false;
      report.bad_degrees.emplace_back(v, deg[v]);
    }
  }
  return report;
}

static Cost checked_mul(Cost a, Cost b) {
  Cost out;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::overflow_error("reload cost product overflows 64-bit range");
  return out;
}

Cost k_min(const Instance& inst) {
  Cost pairs = (Cost)inst.r() * (inst.r() - 1) / 2;  // C(r, 2)
  Cost per_vertex = checked_mul(inst.costs().min_entry(), pairs);
  return checked_mul(per_vertex, inst.graph().vertex_count());
}

}  // namespace mrcf
