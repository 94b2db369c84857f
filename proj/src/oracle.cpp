#include "mrcf/oracle.hpp"

#include <algorithm>

namespace mrcf {

namespace {
constexpr std::uint8_t kNone = 0;
constexpr std::uint8_t kTake = 1;
constexpr std::uint8_t kSkip = 2;
}  // namespace

RFactorEnumerator::RFactorEnumerator(const Instance& inst,
                                     std::uint64_t node_budget)
    : inst_(&inst), budget_(node_budget) {}

bool RFactorEnumerator::apply(int i, bool take) {
  const Edge& e = inst_->graph().edge(i);
  ++nodes_;
  if (take) {
    taken_[i] = true;
    ++deg_[e.u];
    ++deg_[e.v];
  }
  --rem_[e.u];
  --rem_[e.v];
  const int r = inst_->r();
  return deg_[e.u] <= r && deg_[e.v] <= r && deg_[e.u] + rem_[e.u] >= r &&
         deg_[e.v] + rem_[e.v] >= r;
}

void RFactorEnumerator::undo(int i) {
  const Edge& e = inst_->graph().edge(i);
  ++rem_[e.u];
  ++rem_[e.v];
  if (taken_[i]) {
    taken_[i] = false;
    --deg_[e.u];
    --deg_[e.v];
  }
}

std::optional<EdgeSubgraph> RFactorEnumerator::next() {
  const ColoredGraph& g = inst_->graph();
  const int m = g.edge_count();
  const int r = inst_->r();
  if (done_) return std::nullopt;

  if (!started_) {
    started_ = true;
    deg_.assign(g.vertex_count(), 0);
    rem_.assign(g.vertex_count(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      rem_[v] = g.degree(v);
      if (rem_[v] < r) {  // that vertex can never reach degree r
        done_ = true;
        return std::nullopt;
      }
    }
    taken_.assign(m, false);
    phase_.assign(m, kNone);
    depth_ = 0;
    if (m == 0) {  // only the vertexless graph reaches here with r >= 2
      done_ = true;
      return EdgeSubgraph(g, {});
    }
  }

  bool backtracking = resume_;
  resume_ = false;
  while (true) {
    if (!backtracking) {
      if (depth_ == m) {
        // pruning kept deg + rem >= r and deg <= r, so all degrees equal r
        std::vector<EdgeIndex> sel;
        for (int i = 0; i < m; ++i)
          if (taken_[i]) sel.push_back(i);
        resume_ = true;
        return EdgeSubgraph(g, std::move(sel));
      }
      if (nodes_ >= budget_) {
        exceeded_ = done_ = true;
        return std::nullopt;
      }
      bool ok = apply(depth_, true);
      phase_[depth_] = kTake;
      ++depth_;
      if (!ok) backtracking = true;
      continue;
    }
    if (depth_ == 0) {
      done_ = true;
      return std::nullopt;
    }
    int i = depth_ - 1;
    undo(i);
    if (phase_[i] == kTake) {
      if (nodes_ >= budget_) {
        exceeded_ = done_ = true;
        return std::nullopt;
      }
      bool ok = apply(i, false);
      phase_[i] = kSkip;
      if (ok) backtracking = false;
    } else {
      phase_[i] = kNone;
      --depth_;
    }
  }
}

OracleResult solve_bruteforce(const Instance& inst,
                              std::uint64_t node_budget) {
  RFactorEnumerator en(inst, node_budget);
  OracleResult result;
  while (auto sub = en.next()) {
    Cost c = total_reload_cost(inst, *sub);
    if (!result.best || c < result.best->cost)
      result.best = Solution{c, sub->selected()};
  }
  result.nodes_visited = en.nodes_visited();
  if (en.budget_exceeded())
    result.status = OracleResult::Status::BudgetExceeded;
  else
    result.status = result.best ? OracleResult::Status::Solved
                                : OracleResult::Status::Infeasible;
  return result;
}

namespace {

struct PmSearch {
  int n;
  std::vector<std::vector<Cost>> weight;  // -1 = no edge
  std::vector<int> mate;
  std::vector<std::pair<int, int>> current;
  std::optional<Matching> best;

  void run(Cost acc) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (mate[v] < 0) {
        u = v;
        break;
      }
    if (u < 0) {
      if (!best || acc > best->weight) best = Matching{acc, current};
      return;
    }
    for (int v = u + 1; v < n; ++v) {
      if (mate[v] >= 0 || weight[u][v] < 0) continue;
      mate[u] = v;
      mate[v] = u;
      current.emplace_back(u, v);
      run(checked_add(acc, weight[u][v]));
      current.pop_back();
      mate[u] = mate[v] = -1;
    }
  }
};

}  // namespace

std::optional<Matching> max_weight_pm_bruteforce(
    int vertex_count, const std::vector<WeightedEdge>& edges) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  if (vertex_count % 2 != 0) return std::nullopt;
  PmSearch s;
  s.n = vertex_count;
  s.weight.assign(vertex_count, std::vector<Cost>(vertex_count, -1));
  s.mate.assign(vertex_count, -1);
  for (const WeightedEdge& e : edges) {
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count ||
        e.u == e.v)
      throw std::invalid_argument("bad matching edge");
    if (e.weight < 0) throw std::invalid_argument("negative edge weight");
    s.weight[e.u][e.v] = std::max(s.weight[e.u][e.v], e.weight);
    s.weight[e.v][e.u] = s.weight[e.u][e.v];
  }
  s.run(0);
  return s.best;
}

}  // namespace mrcf
