#include "mrcf/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mrcf {

GadgetGraph make_joker(Color color) {
  if (color < 0) throw std::invalid_argument("bad color");
  // cycle 0-1-2-3 plus chord 1-3; tips are 0 and 2
  std::vector<Edge> edges = {{0, 1, color}, {1, 2, color}, {2, 3, color},
                             {3, 0, color}, {1, 3, color}};
  GadgetGraph g{ColoredGraph(4, color + 1, std::move(edges)), {}};
  g.roles["tip"] = {0, 2};
  g.roles["connecting_tip"] = {0};
  return g;
}

GadgetGraph make_5joker(Color color) {
  if (color < 0) throw std::invalid_argument("bad color");
  // cycle 0-1-2-3-4 plus chord 1-4; triangle 0-1-4 has the degree-2 tip 0
  std::vector<Edge> edges = {{0, 1, color}, {1, 2, color}, {2, 3, color},
                             {3, 4, color}, {4, 0, color}, {1, 4, color}};
  GadgetGraph g{ColoredGraph(5, color + 1, std::move(edges)), {}};
  g.roles["tip"] = {0};
  return g;
}

GadgetGraph make_q_gadget(int ell) {
  if (ell < 2) throw std::invalid_argument("Q_l needs l >= 2");
  const Color color = 0;
  const int clique = ell + 1;
  const int subdivided = ell - 2;
  std::vector<Edge> edges;
  // subdividing edge (i, i+1) keeps the attachment points of each half
  // pairwise distinct, which the lift relies on to stay simple
  auto is_subdivided = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return b == a + 1 && a < subdivided;
  };
  for (int a = 0; a < clique; ++a)
    for (int b = a + 1; b < clique; ++b)
      if (!is_subdivided(a, b)) edges.push_back({a, b, color});
  std::vector<Vertex> half_a, half_b;
  for (int i = 0; i < subdivided; ++i) {
    Vertex pa = clique + i;
    Vertex pb = clique + subdivided + i;
    edges.push_back({i, pa, color});
    edges.push_back({i + 1, pb, color});
    half_a.push_back(pa);
    half_b.push_back(pb);
  }
  GadgetGraph g{
      ColoredGraph(clique + 2 * subdivided, 1, std::move(edges)), {}};
  g.roles["clique"].resize(clique);
  std::iota(g.roles["clique"].begin(), g.roles["clique"].end(), 0);
  g.roles["half_a"] = std::move(half_a);
  g.roles["half_b"] = std::move(half_b);
  return g;
}

LiftOutput lift_to_r(
    const Instance& src, int r_target,
    const std::optional<std::vector<std::pair<Vertex, Vertex>>>& pairing) {
  if (src.r() != 2)
    throw std::invalid_argument("lift_to_r starts from a 2-factor instance");
  if (r_target < 3) throw std::invalid_argument("lift_to_r needs r >= 3");

  const ColoredGraph& g0 = src.graph();
  const int q0 = g0.color_count();
  int n = g0.vertex_count();
  std::vector<Edge> edges = g0.edges();

  LiftOutput out;
  if (n % 2 == 1) {
    if (pairing)
      throw std::invalid_argument(
          "explicit pairing impossible on an odd vertex set");
    if (q0 < 1)
      throw std::invalid_argument("cannot pad a colorless graph");
    // monochromatic triangle in an existing color evens out |V|
    out.pad_vertices = {n, n + 1, n + 2};
    edges.push_back({n, n + 1, 0});
    edges.push_back({n + 1, n + 2, 0});
    edges.push_back({n + 2, n, 0});
    n += 3;
  }

  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (pairing) {
    std::vector<bool> seen(n, false);
    for (auto [u, v] : *pairing) {
      if (u < 0 || u >= n || v < 0 || v >= n || u == v)
        throw std::invalid_argument("pairing entry out of range");
      if (seen[u] || seen[v])
        throw std::invalid_argument("pairing repeats a vertex");
      seen[u] = seen[v] = true;
      pairs.emplace_back(u, v);
    }
    if (2 * (int)pairs.size() != n)
      throw std::invalid_argument("pairing does not cover every vertex");
  } else {
    for (Vertex v = 0; v + 1 < n; v += 2) pairs.emplace_back(v, v + 1);
  }

  const Color white = q0;
  const int clique = r_target + 1;
  const int subdivided = r_target - 2;
  int next_id = n;
  for (auto [u, v] : pairs) {
    LiftOutput::QCopy copy;
    copy.u = u;
    copy.v = v;
    for (int i = 0; i < clique; ++i) copy.clique.push_back(next_id + i);
    for (int a = 0; a < clique; ++a)
      for (int b = a + 1; b < clique; ++b) {
        bool cut = (b == a + 1 && a < subdivided);
        if (!cut) edges.push_back({next_id + a, next_id + b, white});
      }
    // pendant halves collapse onto u and v
    for (int i = 0; i < subdivided; ++i) {
      edges.push_back({u, next_id + i, white});
      edges.push_back({v, next_id + i + 1, white});
    }
    next_id += clique;
    out.copies.push_back(std::move(copy));
  }

  std::vector<Cost> costs((q0 + 1) * (q0 + 1), 0);
  for (Color a = 0; a < q0; ++a)
    for (Color b = 0; b < q0; ++b)
      costs[a * (q0 + 1) + b] = src.costs().cost(a, b);
  // white traverses everything, including itself, for free

  out.white = white;
  out.instance =
      Instance(ColoredGraph(next_id, q0 + 1, std::move(edges)),
               CostMatrix(q0 + 1, std::move(costs)), r_target, src.budget());
  return out;
}

namespace {

void validate_source(const VertexColoredGraph& h) {
  if (h.vertex_count < 0 || h.class_count < 0)
    throw std::invalid_argument("negative sizes");
  if ((int)h.classes.size() != h.vertex_count)
    throw std::invalid_argument("class assignment size mismatch");
  std::vector<int> sizes(h.class_count, 0);
  for (int c : h.classes) {
    if (c < 0 || c >= h.class_count)
      throw std::invalid_argument("class id out of range");
    ++sizes[c];
  }
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : h.edges) {
    if (u < 0 || u >= h.vertex_count || v < 0 || v >= h.vertex_count ||
        u == v)
      throw std::invalid_argument("bad source edge");
    if (!seen.insert(std::minmax(u, v)).second)
      throw std::invalid_argument("duplicate source edge");
  }
}

}  // namespace

VertexColoredGraph make_odd(const VertexColoredGraph& h) {
  validate_source(h);
  if (h.class_count % 2 != 0)
    throw std::invalid_argument("make_odd expects an even class count");
  VertexColoredGraph out = h;
  int v = out.vertex_count++;
  out.classes.push_back(out.class_count);
  ++out.class_count;
  for (int u = 0; u < v; ++u) out.edges.emplace_back(u, v);
  return out;
}

EulerCircuit euler_circuit_complete_odd(int k) {
  if (k < 3 || k % 2 == 0)
    throw std::invalid_argument(
        "Eulerian circuit of K_k needs odd k >= 3 (all degrees even)");
  std::vector<std::set<int>> remaining(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (a != b) remaining[a].insert(b);

  // Hierholzer with lowest-id successor for determinism.
  std::vector<int> stack{0}, walk;
  while (!stack.empty()) {
    int u = stack.back();
    if (remaining[u].empty()) {
      walk.push_back(u);
      stack.pop_back();
    } else {
      int v = *remaining[u].begin();
      remaining[u].erase(v);
      remaining[v].erase(u);
      stack.push_back(v);
    }
  }
  std::reverse(walk.begin(), walk.end());  // closed: walk.front() == back()

  EulerCircuit circuit;
  circuit.k = k;
  const int arcs = k * (k - 1) / 2;
  if ((int)walk.size() != arcs + 1)
    throw std::logic_error("Eulerian circuit construction failed");
  std::vector<int> occurrence(k, 0);
  std::vector<int> occ_at(arcs);
  for (int t = 0; t < arcs; ++t) occ_at[t] = occurrence[walk[t]]++;
  for (int t = 0; t < arcs; ++t) {
    EulerArc arc;
    arc.from = walk[t];
    arc.from_occurrence = occ_at[t];
    arc.to = walk[t + 1];
    arc.to_occurrence = t + 1 == arcs ? occ_at[0] : occ_at[t + 1];
    circuit.arcs.push_back(arc);
  }
  return circuit;
}

CliqueReduction clique_to_mrcf(const VertexColoredGraph& h) {
  validate_source(h);
  const int k = h.class_count;
  if (k < 3 || k % 2 == 0)
    throw std::invalid_argument(
        "reduction needs an odd class count >= 3; use make_odd first");
  const int kp = (k - 1) / 2;  // copies per class

  // members[i] lists the source vertices of class i; their rank in this
  // list is the index the S-U edge colors refer to.
  std::vector<std::vector<int>> members(k);
  for (int v = 0; v < h.vertex_count; ++v) members[h.classes[v]].push_back(v);
  for (int i = 0; i < k; ++i) {
    if (members[i].empty())
      throw std::invalid_argument("empty class " + std::to_string(i));
    if (kp == 1 && members[i].size() == 2)
      throw std::invalid_argument(
          "k = 3 rejects classes of size exactly 2: the degenerate chain "
          "gadget admits no zero-cost cover for them");
  }

  CliqueReduction out;
  out.circuit = euler_circuit_complete_odd(k);

  // ids: all U vertices (class, copy, member), then S (arc order), then T
  std::vector<std::vector<std::vector<Vertex>>> u_id(k);
  int next = 0;
  for (int i = 0; i < k; ++i) {
    u_id[i].assign(kp, {});
    for (int j = 0; j < kp; ++j) {
      for (size_t l = 0; l < members[i].size(); ++l) {
        u_id[i][j].push_back(next);
        out.vertex_info.push_back(
            {CliqueReduction::Role::U, i, j, members[i][l]});
        ++next;
      }
    }
  }
  out.u_count = next;
  std::vector<Vertex> s_id;
  for (size_t a = 0; a < out.circuit.arcs.size(); ++a) {
    s_id.push_back(next);
    out.vertex_info.push_back(
        {CliqueReduction::Role::S, static_cast<int>(a), -1, -1});
    ++next;
  }
  out.s_count = static_cast<int>(s_id.size());
  std::vector<std::vector<Vertex>> t_id(k);
  for (int i = 0; i < k; ++i) {
    for (size_t l = 0; l + 1 < members[i].size(); ++l) {
      t_id[i].push_back(next);
      out.vertex_info.push_back(
          {CliqueReduction::Role::T, i, static_cast<int>(l), -1});
      ++next;
    }
    out.t_count += static_cast<int>(t_id[i].size());
  }

  const Color white = h.vertex_count;
  out.white = white;
  std::vector<Edge> edges;

  // S-U edges: the s vertex of arc (i at occurrence i', j at occurrence j')
  // joins every vertex of the copies U_{i,i'} and U_{j,j'}; the edge color
  // is the source vertex its U endpoint stands for.
  for (size_t a = 0; a < out.circuit.arcs.size(); ++a) {
    const EulerArc& arc = out.circuit.arcs[a];
    for (auto [cls, occ] :
         {std::pair{arc.from, arc.from_occurrence},
          std::pair{arc.to, arc.to_occurrence}}) {
      for (size_t l = 0; l < members[cls].size(); ++l)
        edges.push_back({s_id[a], u_id[cls][occ][l], members[cls][l]});
    }
  }

  // U-U edges: one path over the copies per source vertex.
  for (int i = 0; i < k; ++i)
    for (size_t l = 0; l < members[i].size(); ++l)
      for (int j = 0; j + 1 < kp; ++j)
        edges.push_back({u_id[i][j][l], u_id[i][j + 1][l], white});

  // T-U edges. For k >= 5 each connector joins the path ends of two
  // consecutive members. With k = 3 the copy paths are single vertices, so
  // the connectors attach to the whole class copy instead; that keeps one
  // coverable cycle space per class without parallel edges.
  for (int i = 0; i < k; ++i) {
    for (size_t l = 0; l < t_id[i].size(); ++l) {
      Vertex t = t_id[i][l];
      if (kp == 1) {
        for (size_t l2 = 0; l2 < members[i].size(); ++l2)
          edges.push_back({t, u_id[i][0][l2], white});
      } else {
        edges.push_back({t, u_id[i][0][l], white});
        edges.push_back({t, u_id[i][0][l + 1], white});
        edges.push_back({t, u_id[i][kp - 1][l], white});
        edges.push_back({t, u_id[i][kp - 1][l + 1], white});
      }
    }
  }

  // Costs: zero between a source vertex and itself or an inter-class
  // neighbor, zero between white and white, one otherwise. Edges inside one
  // class are ignored on purpose.
  const int q = h.vertex_count + 1;
  std::vector<Cost> costs(q * q, 1);
  for (int a = 0; a < q; ++a) costs[a * q + a] = 0;
  costs[white * q + white] = 0;
  for (auto [u, v] : h.edges) {
    if (h.classes[u] == h.classes[v]) continue;
    costs[u * q + v] = costs[v * q + u] = 0;
  }
  for (int v = 0; v < h.vertex_count; ++v)
    costs[v * q + white] = costs[white * q + v] = 1;

  out.instance = Instance(ColoredGraph(next, q, std::move(edges)),
                          CostMatrix(q, std::move(costs)), 2, Cost{0});
  return out;
}

Instance random_instance(int n, int m, int q, int r, Cost cost_max,
                         std::uint64_t seed) {
  if (n < 0 || m < 0 || q < 0 || cost_max < 0)
    throw std::invalid_argument("negative generator parameter");
  long long max_edges = (long long)n * (n - 1) / 2;
  if (m > max_edges) throw std::invalid_argument("too many edges requested");
  if (m > 0 && q < 1)
    throw std::invalid_argument("edges need at least one color");

  SplitMix64 rng{seed};
  std::vector<std::pair<Vertex, Vertex>> all;
  all.reserve(max_edges);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) all.emplace_back(u, v);
  for (int i = 0; i < m; ++i) {
    size_t j = i + rng.below(all.size() - i);
    std::swap(all[i], all[j]);
  }
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    Color c = q > 0 ? static_cast<Color>(rng.below(q)) : 0;
    edges.push_back({all[i].first, all[i].second, c});
  }

  std::vector<Cost> costs((size_t)q * q, 0);
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) {
      Cost c = static_cast<Cost>(rng.below((std::uint64_t)cost_max + 1));
      costs[a * q + b] = costs[b * q + a] = c;
    }

  return Instance(ColoredGraph(n, q, std::move(edges)),
                  CostMatrix(q, std::move(costs)), r, std::nullopt);
}

}  // namespace mrcf
