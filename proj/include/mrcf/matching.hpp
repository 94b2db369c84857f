#pragma once

#include <optional>

#include "mrcf/core.hpp"

namespace mrcf {

// Split of V(G) by degree, defined when delta(G) >= r and Delta(G) <= r+1.
struct DegreePartition {
  std::vector<Vertex> degree_r;       // R
  std::vector<Vertex> degree_r_plus;  // R+
};

// Throws UnsupportedInstance unless every degree is r or r+1.
DegreePartition degree_partition(const Instance& inst);

// w(e): sum of traversal costs of e against every other edge incident to
// either endpoint. Equals the reload-cost drop caused by deleting e.
Cost derived_edge_weight(const Instance& inst, EdgeIndex e);

// Exact maximum-weight perfect matching on a general graph, blossom based.
// Weights must be non-negative. nullopt when no perfect matching exists.
std::optional<Matching> max_weight_perfect_matching(
    int vertex_count, const std::vector<WeightedEdge>& edges);

// Polynomial exact solver for instances with delta >= r and Delta <= r+1:
// the optimum factor is G minus a maximum-w-weight perfect matching of
// G[R+]. Throws UnsupportedInstance when degrees are out of range; returns
// nullopt when G[R+] has no perfect matching.
std::optional<Solution> solve_degree_bounded(const Instance& inst);

}  // namespace mrcf
