#pragma once

#include <array>
#include <optional>
#include <string>

#include "mrcf/core.hpp"

namespace mrcf {

// Bag tree over the vertices; tree_edges index into bags.
struct TreeDecomposition {
  std::vector<std::vector<Vertex>> bags;  // each sorted ascending
  std::vector<std::pair<int, int>> tree_edges;

  int width() const;
};

enum class EliminationStrategy { MinDegree, MinFill };

// Heuristic decomposition from an elimination ordering; deterministic for a
// fixed strategy (ties broken by lowest vertex id).
TreeDecomposition decompose_heuristic(const ColoredGraph& g,
                                      EliminationStrategy strategy);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string msg) {
    ok = false;
    violations.push_back(std::move(msg));
  }
};

// Checks vertex coverage, edge containment and the connected-subtree
// condition, reporting every violation.
ValidationReport validate_decomposition(const ColoredGraph& g,
                                        const TreeDecomposition& td);

enum class NiceNodeKind { Leaf, Join, IntroduceVertex, IntroduceEdge, Forget };

struct NiceNode {
  NiceNodeKind kind = NiceNodeKind::Leaf;
  std::vector<Vertex> bag;  // sorted ascending
  int parent = -1;
  std::array<int, 2> children{-1, -1};
  Vertex vertex = -1;   // IntroduceVertex / Forget payload
  EdgeIndex edge = -1;  // IntroduceEdge payload

  int child_count() const {
    return (children[0] >= 0 ? 1 : 0) + (children[1] >= 0 ? 1 : 0);
  }
};

// Rooted normal form: typed nodes with per-node partial graphs G_t implied
// by the edges introduced in each subtree. The root has an empty bag and
// G_root = G; every edge is introduced exactly once.
struct NicePair {
  std::vector<NiceNode> nodes;
  int root = -1;

  int width() const;
};

// Normalizes a valid decomposition into a NicePair of the same width.
// Throws std::invalid_argument when the input decomposition is invalid.
NicePair make_nice(const ColoredGraph& g, const TreeDecomposition& td);

// Checks every NicePair invariant, including the join edge-disjointness.
ValidationReport validate_nice(const ColoredGraph& g, const NicePair& np);

// Node ids in bottom-up (post) order; every child precedes its parent.
std::vector<int> postorder(const NicePair& np);

}  // namespace mrcf
