#include "mrcf/treewidth.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mrcf {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& bag : bags) w = std::max(w, (int)bag.size() - 1);
  return w;
}

int NicePair::width() const {
  int w = -1;
  for (const auto& node : nodes) w = std::max(w, (int)node.bag.size() - 1);
  return w;
}

TreeDecomposition decompose_heuristic(const ColoredGraph& g,
                                      EliminationStrategy strategy) {
  const int n = g.vertex_count();
  std::vector<std::set<Vertex>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }

  std::vector<bool> eliminated(n, false);
  std::vector<int> position(n, -1);
  TreeDecomposition td;
  td.bags.reserve(n);
  std::vector<int> bag_of(n, -1);

  auto fill_count = [&](Vertex v) {
    long long missing = 0;
    std::vector<Vertex> nb(adj[v].begin(), adj[v].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]].count(nb[j])) ++missing;
    return missing;
  };

  for (int step = 0; step < n; ++step) {
    Vertex best = -1;
    long long best_score = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      long long score = strategy == EliminationStrategy::MinDegree
                            ? (long long)adj[v].size()
                            : fill_count(v);
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }

    std::vector<Vertex> bag(adj[best].begin(), adj[best].end());
    bag.push_back(best);
    std::sort(bag.begin(), bag.end());
    bag_of[best] = static_cast<int>(td.bags.size());
    td.bags.push_back(std::move(bag));
    position[best] = step;

    std::vector<Vertex> nb(adj[best].begin(), adj[best].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (Vertex u : nb) adj[u].erase(best);
    adj[best].clear();
    eliminated[best] = true;
  }

  // Parent of v's bag: the bag of its earliest-eliminated bag neighbor.
  std::vector<Vertex> roots;
  for (Vertex v = 0; v < n; ++v) {
    Vertex parent = -1;
    for (Vertex u : td.bags[bag_of[v]]) {
      if (u == v) continue;
      if (parent < 0 || position[u] < position[parent]) parent = u;
    }
    if (parent >= 0)
      td.tree_edges.emplace_back(bag_of[v], bag_of[parent]);
    else
      roots.push_back(v);
  }
  for (size_t i = 1; i < roots.size(); ++i)
    td.tree_edges.emplace_back(bag_of[roots[i - 1]], bag_of[roots[i]]);
  return td;
}

ValidationReport validate_decomposition(const ColoredGraph& g,
                                        const TreeDecomposition& td) {
  ValidationReport report;
  const int n = g.vertex_count();
  const int nodes = static_cast<int>(td.bags.size());

  for (auto [a, b] : td.tree_edges)
    if (a < 0 || a >= nodes || b < 0 || b >= nodes) {
      report.fail("tree edge references a missing node");
      return report;
    }
  if (nodes > 0 &&
      static_cast<int>(td.tree_edges.size()) != nodes - 1)
    report.fail("tree has " + std::to_string(td.tree_edges.size()) +
                " edges for " + std::to_string(nodes) + " nodes");

  std::vector<int> node_count(n, 0), edge_count(n, 0);
  for (const auto& bag : td.bags)
    for (Vertex v : bag) {
      if (v < 0 || v >= n) {
        report.fail("bag contains unknown vertex " + std::to_string(v));
        return report;
      }
      ++node_count[v];
    }
  for (auto [a, b] : td.tree_edges) {
    std::vector<Vertex> common;
    std::set_intersection(td.bags[a].begin(), td.bags[a].end(),
                          td.bags[b].begin(), td.bags[b].end(),
                          std::back_inserter(common));
    for (Vertex v : common) ++edge_count[v];
  }
  for (Vertex v = 0; v < n; ++v) {
    if (node_count[v] == 0)
      report.fail("vertex " + std::to_string(v) + " is in no bag");
    else if (node_count[v] != edge_count[v] + 1)
      report.fail("bags containing vertex " + std::to_string(v) +
                  " do not form a connected subtree");
  }
  for (const Edge& e : g.edges()) {
    bool found = false;
    for (const auto& bag : td.bags)
      if (std::binary_search(bag.begin(), bag.end(), e.u) &&
          std::binary_search(bag.begin(), bag.end(), e.v)) {
        found = true;
        break;
      }
    if (!found)
      report.fail("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  "} is contained in no bag");
  }
  return report;
}

namespace {

// Mutable builder for the nice pair; nodes are linked by parent pointers
// first and children slots are filled in at the end.
struct NiceBuilder {
  std::vector<NiceNode> nodes;

  int add(NiceNodeKind kind, std::vector<Vertex> bag, int child_a = -1,
          int child_b = -1) {
    NiceNode node;
    node.kind = kind;
    node.bag = std::move(bag);
    node.children = {child_a, child_b};
    nodes.push_back(std::move(node));
    int id = static_cast<int>(nodes.size()) - 1;
    if (child_a >= 0) nodes[child_a].parent = id;
    if (child_b >= 0) nodes[child_b].parent = id;
    return id;
  }

  // Chain of introduce nodes lifting `from` up to bag `to` (to ⊇ from).
  int introduce_chain(int top, std::vector<Vertex> from,
                      const std::vector<Vertex>& to) {
    for (Vertex v : to) {
      if (std::binary_search(from.begin(), from.end(), v)) continue;
      from.insert(std::upper_bound(from.begin(), from.end(), v), v);
      int id = add(NiceNodeKind::IntroduceVertex, from, top);
      nodes[id].vertex = v;
      top = id;
    }
    return top;
  }

  // Chain of forget nodes dropping everything in `from` missing from `to`.
  int forget_chain(int top, std::vector<Vertex> from,
                   const std::vector<Vertex>& to) {
    for (Vertex v : std::vector<Vertex>(from)) {
      if (std::binary_search(to.begin(), to.end(), v)) continue;
      from.erase(std::find(from.begin(), from.end(), v));
      int id = add(NiceNodeKind::Forget, from, top);
      nodes[id].vertex = v;
      top = id;
    }
    return top;
  }
};

}  // namespace

NicePair make_nice(const ColoredGraph& g, const TreeDecomposition& td) {
  ValidationReport check = validate_decomposition(g, td);
  if (!check.ok)
    throw std::invalid_argument("invalid tree decomposition: " +
                                check.violations.front());

  NiceBuilder builder;
  int top;
  if (td.bags.empty()) {
    top = builder.add(NiceNodeKind::Leaf, {});
  } else {
    const int count = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> adj(count);
    for (auto [a, b] : td.tree_edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    // Iterative DFS from node 0; children processed before their parent.
    std::vector<int> parent(count, -2), order;
    order.reserve(count);
    std::vector<int> stack{0};
    parent[0] = -1;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      order.push_back(t);
      for (int c : adj[t])
        if (parent[c] == -2) {
          parent[c] = t;
          stack.push_back(c);
        }
    }
    std::vector<int> built(count, -1);
    for (int idx = count - 1; idx >= 0; --idx) {
      int t = order[idx];
      std::vector<int> tops;
      for (int c : adj[t]) {
        if (c == parent[t]) continue;
        int adapted = builder.forget_chain(built[c], td.bags[c], td.bags[t]);
        adapted = builder.introduce_chain(adapted, builder.nodes[adapted].bag,
                                          td.bags[t]);
        tops.push_back(adapted);
      }
      int here;
      if (tops.empty()) {
        here = builder.add(NiceNodeKind::Leaf, {});
        here = builder.introduce_chain(here, {}, td.bags[t]);
      } else {
        here = tops[0];
        for (size_t i = 1; i < tops.size(); ++i)
          here = builder.add(NiceNodeKind::Join, td.bags[t], here, tops[i]);
      }
      built[t] = here;
    }
    top = builder.forget_chain(built[0], td.bags[0], {});
  }

  NicePair np;
  np.nodes = std::move(builder.nodes);
  np.root = top;

  // Each edge is introduced once, directly above the topmost node whose bag
  // holds both endpoints; ties between edges chain in index order.
  auto depth_of = [&](int node) {
    int d = 0;
    for (int t = node; np.nodes[t].parent >= 0; t = np.nodes[t].parent) ++d;
    return d;
  };
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    int anchor = -1, anchor_depth = 0;
    for (int t = 0; t < static_cast<int>(np.nodes.size()); ++t) {
      const auto& bag = np.nodes[t].bag;
      if (!std::binary_search(bag.begin(), bag.end(), edge.u) ||
          !std::binary_search(bag.begin(), bag.end(), edge.v))
        continue;
      int d = depth_of(t);
      if (anchor < 0 || d < anchor_depth) {
        anchor = t;
        anchor_depth = d;
      }
    }
    if (anchor < 0)
      throw std::logic_error("edge lost during nice normalization");

    NiceNode node;
    node.kind = NiceNodeKind::IntroduceEdge;
    node.bag = np.nodes[anchor].bag;
    node.edge = e;
    node.children = {anchor, -1};
    node.parent = np.nodes[anchor].parent;
    int id = static_cast<int>(np.nodes.size());
    np.nodes.push_back(std::move(node));
    int up = np.nodes[id].parent;
    if (up >= 0) {
      for (int& slot : np.nodes[up].children)
        if (slot == anchor) {
          slot = id;
          break;
        }
    } else {
      np.root = id;
    }
    np.nodes[anchor].parent = id;
  }
  return np;
}

std::vector<int> postorder(const NicePair& np) {
  std::vector<int> order;
  order.reserve(np.nodes.size());
  std::vector<std::pair<int, int>> stack{{np.root, 0}};
  while (!stack.empty()) {
    auto& [t, state] = stack.back();
    if (state < 2) {
      int c = np.nodes[t].children[state];
      ++state;
      if (c >= 0) stack.emplace_back(c, 0);
      continue;
    }
    order.push_back(t);
    stack.pop_back();
  }
  return order;
}

ValidationReport validate_nice(const ColoredGraph& g, const NicePair& np) {
  ValidationReport report;
  const int count = static_cast<int>(np.nodes.size());
  if (np.root < 0 || np.root >= count) {
    report.fail("missing root");
    return report;
  }
  if (np.nodes[np.root].parent != -1) report.fail("root has a parent");
  if (!np.nodes[np.root].bag.empty()) report.fail("root bag not empty");

  std::vector<int> order = postorder(np);
  if (static_cast<int>(order.size()) != count)
    report.fail("tree is not connected under the root");

  // Per subtree: vertex set and edge set of G_t, maintained as sorted ids.
  std::vector<std::set<Vertex>> vertices(count);
  std::vector<std::set<EdgeIndex>> edges(count);
  std::vector<int> introduced_count(g.edge_count(), 0);

  for (int t : order) {
    const NiceNode& node = np.nodes[t];
    if (!std::is_sorted(node.bag.begin(), node.bag.end()))
      report.fail("bag not sorted at node " + std::to_string(t));
    for (int c : node.children)
      if (c >= 0 && np.nodes[c].parent != t)
        report.fail("parent/child links disagree at node " +
                    std::to_string(t));
    switch (node.kind) {
      case NiceNodeKind::Leaf:
        if (node.child_count() != 0) report.fail("leaf with children");
        if (!node.bag.empty()) report.fail("leaf bag not empty");
        break;
      case NiceNodeKind::Join: {
        if (node.child_count() != 2) {
          report.fail("join without two children");
          break;
        }
        int a = node.children[0], b = node.children[1];
        if (np.nodes[a].bag != node.bag || np.nodes[b].bag != node.bag)
          report.fail("join bags differ at node " + std::to_string(t));
        std::vector<EdgeIndex> common;
        std::set_intersection(edges[a].begin(), edges[a].end(),
                              edges[b].begin(), edges[b].end(),
                              std::back_inserter(common));
        if (!common.empty())
          report.fail("join children share edges at node " +
                      std::to_string(t));
        vertices[t] = vertices[a];
        vertices[t].insert(vertices[b].begin(), vertices[b].end());
        edges[t] = edges[a];
        edges[t].insert(edges[b].begin(), edges[b].end());
        break;
      }
      case NiceNodeKind::IntroduceVertex: {
        if (node.child_count() != 1) {
          report.fail("vertex-introduce without one child");
          break;
        }
        int c = node.children[0];
        std::vector<Vertex> expect = np.nodes[c].bag;
        expect.insert(
            std::upper_bound(expect.begin(), expect.end(), node.vertex),
            node.vertex);
        if (std::binary_search(np.nodes[c].bag.begin(), np.nodes[c].bag.end(),
                               node.vertex) ||
            expect != node.bag)
          report.fail("vertex-introduce bag mismatch at node " +
                      std::to_string(t));
        if (vertices[c].count(node.vertex))
          report.fail("vertex " + std::to_string(node.vertex) +
                      " reintroduced while still in scope");
        vertices[t] = vertices[c];
        vertices[t].insert(node.vertex);
        edges[t] = edges[c];
        break;
      }
      case NiceNodeKind::IntroduceEdge: {
        if (node.child_count() != 1) {
          report.fail("edge-introduce without one child");
          break;
        }
        int c = node.children[0];
        if (np.nodes[c].bag != node.bag)
          report.fail("edge-introduce bag mismatch at node " +
                      std::to_string(t));
        if (node.edge < 0 || node.edge >= g.edge_count()) {
          report.fail("edge-introduce with bad edge index");
          break;
        }
        const Edge& e = g.edge(node.edge);
        if (!std::binary_search(node.bag.begin(), node.bag.end(), e.u) ||
            !std::binary_search(node.bag.begin(), node.bag.end(), e.v))
          report.fail("edge introduced outside its endpoints' bag at node " +
                      std::to_string(t));
        ++introduced_count[node.edge];
        vertices[t] = vertices[c];
        edges[t] = edges[c];
        edges[t].insert(node.edge);
        break;
      }
      case NiceNodeKind::Forget: {
        if (node.child_count() != 1) {
          report.fail("forget without one child");
          break;
        }
        int c = node.children[0];
        std::vector<Vertex> expect = np.nodes[c].bag;
        auto it = std::find(expect.begin(), expect.end(), node.vertex);
        if (it == expect.end()) {
          report.fail("forget of a vertex missing from the child bag");
          break;
        }
        expect.erase(it);
        if (expect != node.bag)
          report.fail("forget bag mismatch at node " + std::to_string(t));
        vertices[t] = vertices[c];
        edges[t] = edges[c];
        break;
      }
    }
  }

  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    if (introduced_count[e] != 1)
      report.fail("edge " + std::to_string(e) + " introduced " +
                  std::to_string(introduced_count[e]) + " times");
  if (report.ok) {
    if (static_cast<int>(vertices[np.root].size()) != g.vertex_count())
      report.fail("root graph misses vertices");
    if (static_cast<int>(edges[np.root].size()) != g.edge_count())
      report.fail("root graph misses edges");
  }
  return report;
}

}  // namespace mrcf
