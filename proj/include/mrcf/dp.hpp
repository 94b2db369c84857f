#pragma once

#include <cstdint>
#include <optional>

#include "mrcf/core.hpp"
#include "mrcf/treewidth.hpp"

namespace mrcf {

// Per-vertex color-count vector over an explicit color universe. The DP
// keeps one such vector per bag vertex, restricted to the colors actually
// incident to that vertex.
struct StateVector {
  std::vector<Color> universe;  // sorted global color ids
  std::vector<int> counts;      // parallel to universe

  int norm() const;
};

// Bilinear form sum_{a,b} c(a, b) * E[a] * E'[b] between two disjoint edge
// sets at a vertex. Both vectors must share one universe.
Cost cross_cost(const CostMatrix& costs, const StateVector& e1,
                const StateVector& e2);

struct DpNodeStats {
  int node = -1;
  int bag_size = 0;
  std::uint64_t table_size = 0;
  // Product over bag vertices of the availability-limited state counts.
  unsigned long long realizable_bound = 1;
  // C(min{q, Delta} + r, r) ^ bag_size, saturating.
  unsigned long long closed_form_bound = 1;
};

struct DpStats {
  std::vector<DpNodeStats> nodes;
  std::uint64_t max_table_size = 0;
};

// Full table dump for small-instance verification.
struct DpTableDump {
  int node = -1;
  std::vector<Vertex> bag;
  std::vector<std::vector<Color>> universes;  // per bag vertex
  // Flat per-bag-vertex counts (concatenated by bag order) with the table
  // cost for that state.
  std::vector<std::pair<std::vector<int>, Cost>> entries;
};

struct DpTrace {
  std::vector<DpTableDump> tables;
};

// Bottom-up dynamic program over the nice pair; returns the minimum reload
// cost together with a witness factor, or nullopt when no r-factor exists.
// Throws std::invalid_argument when the nice pair does not fit the graph.
std::optional<Solution> solve_dp(const Instance& inst, const NicePair& nice,
                                 DpStats* stats = nullptr,
                                 DpTrace* trace = nullptr);

struct StateSpaceBound {
  // Max over nodes of the product of per-vertex realizable state counts.
  unsigned long long realizable = 1;
  // Max over nodes of the closed-form bound C(min{q, Delta} + r, r)^|bag|.
  unsigned long long closed_form = 1;
};

// Pre-run size estimate used for budgeting and the scaling checks.
StateSpaceBound state_space_bound(const Instance& inst, const NicePair& nice);

}  // namespace mrcf
