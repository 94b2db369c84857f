#pragma once

#include <cstdint>
#include <optional>

#include "mrcf/core.hpp"

namespace mrcf {

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

// Streams every r-factor of the instance exactly once, in lexicographic
// order of the sorted edge-index sets. Backtracks over edges in index order,
// pruning branches where some vertex can no longer reach degree r. A node
// budget turns runaway searches into an explicit "budget exceeded" outcome.
class RFactorEnumerator {
 public:
  explicit RFactorEnumerator(const Instance& inst,
                             std::uint64_t node_budget = kDefaultNodeBudget);

  // Next factor, or nullopt when exhausted or out of budget.
  std::optional<EdgeSubgraph> next();

  bool budget_exceeded() const { return exceeded_; }
  std::uint64_t nodes_visited() const { return nodes_; }

 private:
  bool apply(int i, bool take);
  void undo(int i);

  const Instance* inst_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool started_ = false;
  bool done_ = false;
  bool exceeded_ = false;
  bool resume_ = false;
  int depth_ = 0;
  std::vector<std::uint8_t> phase_;
  std::vector<bool> taken_;
  std::vector<int> deg_;
  std::vector<int> rem_;
};

struct OracleResult {
  enum class Status { Solved, Infeasible, BudgetExceeded };
  Status status = Status::Infeasible;
  // Best factor seen; authoritative only when status == Solved.
  std::optional<Solution> best;
  std::uint64_t nodes_visited = 0;
};

// Reference optimum by exhaustive enumeration; ties broken by enumeration
// order. Intended for desk-scale inputs.
OracleResult solve_bruteforce(const Instance& inst,
                              std::uint64_t node_budget = kDefaultNodeBudget);

// Maximum-weight perfect matching by exhaustive pairing, for small vertex
// counts. nullopt when no perfect matching exists.
std::optional<Matching> max_weight_pm_bruteforce(
    int vertex_count, const std::vector<WeightedEdge>& edges);

}  // namespace mrcf
