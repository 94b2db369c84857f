#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mrcf/core.hpp"

namespace mrcf {

// Deterministic generator state; identical seeds reproduce identical output
// on every platform.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~0ull - ~0ull % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }
};

// A labeled graph fragment: the gadget plus its designated vertices by role.
struct GadgetGraph {
  ColoredGraph graph;
  std::map<std::string, std::vector<Vertex>> roles;
};

// Monochromatic diamond (4-cycle plus a chord). Roles: "tip" holds both
// degree-2 vertices, "connecting_tip" the designated one.
GadgetGraph make_joker(Color color);

// 5-cycle plus a chord; the degree-2 vertex of its triangle is the tip.
// Roles: "tip".
GadgetGraph make_5joker(Color color);

// Q_l: clique on l+1 vertices with l-2 edges each subdivided twice and the
// middle edge removed. Roles: "clique", "half_a", "half_b" (the pendant
// halves, one per subdivided edge side).
GadgetGraph make_q_gadget(int ell);

// Result of raising a 2-factor instance to an r-factor instance by
// attaching one Q_r per vertex pair, all new edges in a fresh cost-free
// color.
struct LiftOutput {
  Instance instance;
  Color white = -1;
  std::vector<Vertex> pad_vertices;  // appended triangle when |V| was odd
  struct QCopy {
    Vertex u = -1;
    Vertex v = -1;
    std::vector<Vertex> clique;  // the fresh K_{r+1} vertices of this copy
  };
  std::vector<QCopy> copies;
};

LiftOutput lift_to_r(
    const Instance& src, int r_target,
    const std::optional<std::vector<std::pair<Vertex, Vertex>>>& pairing =
        std::nullopt);

// Source graph of the multicolored-clique reduction: vertices partitioned
// into classes 0..class_count-1.
struct VertexColoredGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> classes;  // per vertex
  int class_count = 0;
};

// Adds a universal vertex in a fresh class; requires class_count even.
VertexColoredGraph make_odd(const VertexColoredGraph& h);

struct EulerArc {
  int from = -1;
  int to = -1;
  int from_occurrence = -1;  // 0-based occurrence index of `from`
  int to_occurrence = -1;
};

struct EulerCircuit {
  int k = 0;
  std::vector<EulerArc> arcs;
};

// Closed walk through every edge of K_k exactly once (k odd, >= 3), with
// per-endpoint occurrence indices; deterministic (lowest-id successor).
EulerCircuit euler_circuit_complete_odd(int k);

struct CliqueReduction {
  Instance instance;
  EulerCircuit circuit;
  Color white = -1;  // class colors are the source vertex ids 0..|V(H)|-1

  enum class Role { U, S, T };
  struct VertexInfo {
    Role role = Role::U;
    // U: (class, copy, source vertex id). S: (arc index, -1, -1).
    // T: (class, chain index, -1).
    int a = -1, b = -1, c = -1;
  };
  std::vector<VertexInfo> vertex_info;  // per generated vertex

  int u_count = 0, s_count = 0, t_count = 0;
};

// Builds the 2-factor instance whose zero-cost factors correspond to
// multicolored k-cliques of h. Requires class_count odd and >= 3 and every
// class nonempty; edges inside one class are ignored (the problem is
// indifferent to them). With k == 3 the chain gadget degenerates, so the
// per-class connector vertices attach to the whole class copy instead, and
// classes of size exactly 2 are rejected.
CliqueReduction clique_to_mrcf(const VertexColoredGraph& h);

// Uniform random simple graph with m edges, uniform colors, symmetric
// random cost matrix with zero diagonal; fully determined by the seed.
Instance random_instance(int n, int m, int q, int r, Cost cost_max,
                         std::uint64_t seed);

}  // namespace mrcf
