#include "mrcf/dp.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <unordered_map>

namespace mrcf {

int StateVector::norm() const {
  int sum = 0;
  for (int c : counts) sum += c;
  return sum;
}

Cost cross_cost(const CostMatrix& costs, const StateVector& e1,
                const StateVector& e2) {
  if (e1.universe != e2.universe)
    throw std::invalid_argument("cross_cost needs one shared color universe");
  if (e1.counts.size() != e1.universe.size() ||
      e2.counts.size() != e2.universe.size())
    throw std::invalid_argument("state vector shape mismatch");
  Cost sum = 0;
  for (size_t i = 0; i < e1.universe.size(); ++i) {
    if (e1.counts[i] == 0) continue;
    for (size_t j = 0; j < e2.universe.size(); ++j) {
      if (e2.counts[j] == 0) continue;
      Cost term = costs.cost(e1.universe[i], e2.universe[j]);
      __int128 wide = (__int128)term * e1.counts[i] * e2.counts[j];
      if (wide > std::numeric_limits<Cost>::max())
        throw std::overflow_error("cross cost overflows 64-bit range");
      sum = checked_add(sum, (Cost)wide);
    }
  }
  return sum;
}

namespace {

constexpr unsigned long long kSat = std::numeric_limits<unsigned long long>::max();

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

unsigned long long sat_binomial(unsigned long long n, unsigned long long k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long res = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    unsigned long long factor = n - k + i;
    if (res > kSat / factor) return kSat;
    res = res * factor / i;
  }
  return res;
}

// Number of integer vectors 0 <= x <= avail (componentwise) with sum <= r.
unsigned long long count_bounded_vectors(const std::vector<int>& avail,
                                         int r) {
  std::vector<unsigned long long> ways(r + 1, 0);
  ways[0] = 1;
  for (int a : avail) {
    std::vector<unsigned long long> next(r + 1, 0);
    for (int s = 0; s <= r; ++s) {
      if (ways[s] == 0) continue;
      for (int x = 0; x <= a && s + x <= r; ++x) {
        unsigned long long sum = next[s + x] + ways[s];
        next[s + x] = sum < next[s + x] ? kSat : sum;  // saturate
      }
    }
    ways = std::move(next);
  }
  unsigned long long total = 0;
  for (unsigned long long w : ways) {
    unsigned long long sum = total + w;
    total = sum < total ? kSat : sum;
  }
  return total;
}

using Key = std::vector<std::uint8_t>;

struct KeyHash {
  size_t operator()(const Key& key) const {
    size_t h = 1469598103934665603ull;
    for (std::uint8_t b : key) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct Entry {
  Cost cost = 0;
  Key aux;           // forget: removed segment; join: left child key
  bool took = false; // edge-introduce branch marker
};

using Table = std::unordered_map<Key, Entry, KeyHash>;

// Static description of one node's packed state layout.
struct Layout {
  std::vector<Vertex> bag;
  std::vector<int> offset;  // per bag vertex, into the packed key
  int total = 0;

  int slot_of(Vertex v) const {
    auto it = std::lower_bound(bag.begin(), bag.end(), v);
    assert(it != bag.end() && *it == v);
    return static_cast<int>(it - bag.begin());
  }
};

struct DpEngine {
  const Instance& inst;
  const NicePair& nice;
  std::vector<std::vector<Color>> universe;  // per vertex, sorted
  std::vector<Layout> layout;                // per node
  std::vector<Table> table;                  // per node
  std::vector<std::vector<std::vector<int>>> avail;  // per node, per bag slot

  explicit DpEngine(const Instance& inst_, const NicePair& nice_)
      : inst(inst_), nice(nice_) {
    const ColoredGraph& g = inst.graph();
    universe.assign(g.vertex_count(), {});
    for (const Edge& e : g.edges()) {
      universe[e.u].push_back(e.color);
      universe[e.v].push_back(e.color);
    }
    for (auto& u : universe) {
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
    }
    layout.resize(nice.nodes.size());
    table.resize(nice.nodes.size());
    avail.resize(nice.nodes.size());
    for (size_t t = 0; t < nice.nodes.size(); ++t) {
      layout[t].bag = nice.nodes[t].bag;
      layout[t].offset.clear();
      int off = 0;
      for (Vertex v : layout[t].bag) {
        layout[t].offset.push_back(off);
        off += static_cast<int>(universe[v].size());
      }
      layout[t].total = off;
    }
  }

  int color_slot(Vertex v, Color c) const {
    const auto& u = universe[v];
    auto it = std::lower_bound(u.begin(), u.end(), c);
    assert(it != u.end() && *it == c);
    return static_cast<int>(it - u.begin());
  }

  int segment_norm(const Layout& lay, const Key& key, int slot) const {
    int len = static_cast<int>(universe[lay.bag[slot]].size());
    int sum = 0;
    for (int i = 0; i < len; ++i) sum += key[lay.offset[slot] + i];
    return sum;
  }

  static Cost scaled(Cost c, int a, int b) {
    __int128 wide = (__int128)c * a * b;
    if (wide > std::numeric_limits<Cost>::max())
      throw std::overflow_error("cross cost overflows 64-bit range");
    return (Cost)wide;
  }

  Cost edge_extension_cost(Vertex v, const Layout& lay, const Key& key,
                           Color color) const {
    int slot = lay.slot_of(v);
    const auto& u = universe[v];
    Cost sum = 0;
    for (size_t i = 0; i < u.size(); ++i) {
      int count = key[lay.offset[slot] + i];
      if (count == 0) continue;
      sum = checked_add(sum, scaled(inst.costs().cost(u[i], color), count, 1));
    }
    return sum;
  }

  Cost pairwise_cross(const Layout& lay, const Key& a, const Key& b) const {
    Cost sum = 0;
    for (size_t slot = 0; slot < lay.bag.size(); ++slot) {
      Vertex v = lay.bag[slot];
      const auto& u = universe[v];
      for (size_t i = 0; i < u.size(); ++i) {
        int ca = a[lay.offset[slot] + i];
        if (ca == 0) continue;
        for (size_t j = 0; j < u.size(); ++j) {
          int cb = b[lay.offset[slot] + j];
          if (cb == 0) continue;
          sum = checked_add(sum, scaled(inst.costs().cost(u[i], u[j]), ca, cb));
        }
      }
    }
    return sum;
  }

  static void upsert(Table& tab, Key key, Cost cost, Key aux, bool took) {
    auto it = tab.find(key);
    if (it == tab.end() || cost < it->second.cost)
      tab[std::move(key)] = Entry{cost, std::move(aux), took};
  }

  void run() {
    const int r = inst.r();
    for (int t : postorder(nice)) {
      const NiceNode& node = nice.nodes[t];
      const Layout& lay = layout[t];
      Table& out = table[t];
      switch (node.kind) {
        case NiceNodeKind::Leaf: {
          out.emplace(Key{}, Entry{});
          avail[t] = {};
          break;
        }
        case NiceNodeKind::IntroduceVertex: {
          int c = node.children[0];
          int slot = lay.slot_of(node.vertex);
          int seg = static_cast<int>(universe[node.vertex].size());
          for (const auto& [ckey, centry] : table[c]) {
            Key key(lay.total, 0);
            std::copy(ckey.begin(), ckey.begin() + lay.offset[slot],
                      key.begin());
            std::copy(ckey.begin() + lay.offset[slot], ckey.end(),
                      key.begin() + lay.offset[slot] + seg);
            out.emplace(std::move(key), Entry{centry.cost, {}, false});
          }
          avail[t] = avail[c];
          avail[t].insert(avail[t].begin() + slot,
                          std::vector<int>(seg, 0));
          break;
        }
        case NiceNodeKind::IntroduceEdge: {
          int c = node.children[0];
          const Edge& e = inst.graph().edge(node.edge);
          int su = lay.slot_of(e.u), sv = lay.slot_of(e.v);
          int pu = lay.offset[su] + color_slot(e.u, e.color);
          int pv = lay.offset[sv] + color_slot(e.v, e.color);
          for (const auto& [ckey, centry] : table[c]) {
            upsert(out, ckey, centry.cost, {}, false);
            if (segment_norm(lay, ckey, su) >= r) continue;
            if (segment_norm(lay, ckey, sv) >= r) continue;
            Cost added = checked_add(
                edge_extension_cost(e.u, lay, ckey, e.color),
                edge_extension_cost(e.v, lay, ckey, e.color));
            Key key = ckey;
            ++key[pu];
            ++key[pv];
            upsert(out, std::move(key), checked_add(centry.cost, added), {},
                   true);
          }
          avail[t] = avail[c];
          ++avail[t][su][color_slot(e.u, e.color)];
          ++avail[t][sv][color_slot(e.v, e.color)];
          break;
        }
        case NiceNodeKind::Forget: {
          int c = node.children[0];
          const Layout& clay = layout[c];
          int slot = clay.slot_of(node.vertex);
          int seg = static_cast<int>(universe[node.vertex].size());
          for (const auto& [ckey, centry] : table[c]) {
            if (segment_norm(clay, ckey, slot) != r) continue;
            Key key(clay.total - seg);
            std::copy(ckey.begin(), ckey.begin() + clay.offset[slot],
                      key.begin());
            std::copy(ckey.begin() + clay.offset[slot] + seg, ckey.end(),
                      key.begin() + clay.offset[slot]);
            Key removed(ckey.begin() + clay.offset[slot],
                        ckey.begin() + clay.offset[slot] + seg);
            upsert(out, std::move(key), centry.cost, std::move(removed),
                   false);
          }
          avail[t] = avail[c];
          avail[t].erase(avail[t].begin() + slot);
          break;
        }
        case NiceNodeKind::Join: {
          int a = node.children[0], b = node.children[1];
          // children introduce disjoint edge sets, so componentwise sums
          // encode unions of disjoint partial factors
          for (const auto& [akey, aentry] : table[a]) {
            for (const auto& [bkey, bentry] : table[b]) {
              Key key(lay.total);
              bool ok = true;
              for (size_t slot = 0; ok && slot < lay.bag.size(); ++slot) {
                int len =
                    static_cast<int>(universe[lay.bag[slot]].size());
                int sum = 0;
                for (int i = 0; i < len; ++i) {
                  int p = lay.offset[slot] + i;
                  int combined = (int)akey[p] + (int)bkey[p];
                  sum += combined;
                  if (sum > r) {  // also keeps every component within uint8
                    ok = false;
                    break;
                  }
                  key[p] = static_cast<std::uint8_t>(combined);
                }
              }
              if (!ok) continue;
              Cost cost = checked_add(aentry.cost, bentry.cost);
              cost = checked_add(cost, pairwise_cross(lay, akey, bkey));
              upsert(out, std::move(key), cost, akey, false);
            }
          }
          avail[t] = avail[a];
          for (size_t slot = 0; slot < avail[t].size(); ++slot)
            for (size_t i = 0; i < avail[t][slot].size(); ++i)
              avail[t][slot][i] += avail[b][slot][i];
          break;
        }
      }
    }
  }

  std::vector<EdgeIndex> reconstruct() const {
    std::vector<EdgeIndex> chosen;
    std::vector<std::pair<int, Key>> stack;
    stack.emplace_back(nice.root, Key{});
    while (!stack.empty()) {
      auto [t, key] = std::move(stack.back());
      stack.pop_back();
      const NiceNode& node = nice.nodes[t];
      const Entry& entry = table[t].at(key);
      switch (node.kind) {
        case NiceNodeKind::Leaf:
          break;
        case NiceNodeKind::IntroduceVertex: {
          const Layout& lay = layout[t];
          int slot = lay.slot_of(node.vertex);
          int seg = static_cast<int>(universe[node.vertex].size());
          Key ckey(key.size() - seg);
          std::copy(key.begin(), key.begin() + lay.offset[slot],
                    ckey.begin());
          std::copy(key.begin() + lay.offset[slot] + seg, key.end(),
                    ckey.begin() + lay.offset[slot]);
          stack.emplace_back(node.children[0], std::move(ckey));
          break;
        }
        case NiceNodeKind::IntroduceEdge: {
          Key ckey = key;
          if (entry.took) {
            const Edge& e = inst.graph().edge(node.edge);
            const Layout& lay = layout[t];
            chosen.push_back(node.edge);
            --ckey[lay.offset[lay.slot_of(e.u)] + color_slot(e.u, e.color)];
            --ckey[lay.offset[lay.slot_of(e.v)] + color_slot(e.v, e.color)];
          }
          stack.emplace_back(node.children[0], std::move(ckey));
          break;
        }
        case NiceNodeKind::Forget: {
          const Layout& clay = layout[node.children[0]];
          int slot = clay.slot_of(node.vertex);
          Key ckey(clay.total);
          std::copy(key.begin(), key.begin() + clay.offset[slot],
                    ckey.begin());
          std::copy(entry.aux.begin(), entry.aux.end(),
                    ckey.begin() + clay.offset[slot]);
          std::copy(key.begin() + clay.offset[slot], key.end(),
                    ckey.begin() + clay.offset[slot] +
                        static_cast<int>(entry.aux.size()));
          stack.emplace_back(node.children[0], std::move(ckey));
          break;
        }
        case NiceNodeKind::Join: {
          Key right(key.size());
          for (size_t i = 0; i < key.size(); ++i)
            right[i] = static_cast<std::uint8_t>(key[i] - entry.aux[i]);
          stack.emplace_back(node.children[0], entry.aux);
          stack.emplace_back(node.children[1], std::move(right));
          break;
        }
      }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }
};

}  // namespace

std::optional<Solution> solve_dp(const Instance& inst, const NicePair& nice,
                                 DpStats* stats, DpTrace* trace) {
  ValidationReport check = validate_nice(inst.graph(), nice);
  if (!check.ok)
    throw std::invalid_argument("invalid nice pair: " +
                                check.violations.front());
  if (inst.r() > 250)
    throw UnsupportedInstance("dp state encoding caps r at 250");

  DpEngine engine(inst, nice);
  engine.run();

  if (stats) {
    stats->nodes.clear();
    stats->max_table_size = 0;
    unsigned long long q_eff =
        std::min<unsigned long long>(inst.graph().color_count(),
                                     inst.graph().max_degree());
    unsigned long long per_vertex = sat_binomial(q_eff + inst.r(), inst.r());
    for (size_t t = 0; t < nice.nodes.size(); ++t) {
      DpNodeStats ns;
      ns.node = static_cast<int>(t);
      ns.bag_size = static_cast<int>(nice.nodes[t].bag.size());
      ns.table_size = engine.table[t].size();
      ns.closed_form_bound = 1;
      for (int i = 0; i < ns.bag_size; ++i)
        ns.closed_form_bound = sat_mul(ns.closed_form_bound, per_vertex);
      ns.realizable_bound = 1;
      for (const auto& a : engine.avail[t])
        ns.realizable_bound =
            sat_mul(ns.realizable_bound, count_bounded_vectors(a, inst.r()));
      stats->max_table_size = std::max(stats->max_table_size, ns.table_size);
      stats->nodes.push_back(std::move(ns));
    }
  }
  if (trace) {
    trace->tables.clear();
    for (size_t t = 0; t < nice.nodes.size(); ++t) {
      DpTableDump dump;
      dump.node = static_cast<int>(t);
      dump.bag = nice.nodes[t].bag;
      for (Vertex v : dump.bag) dump.universes.push_back(engine.universe[v]);
      for (const auto& [key, entry] : engine.table[t])
        dump.entries.emplace_back(std::vector<int>(key.begin(), key.end()),
                                  entry.cost);
      trace->tables.push_back(std::move(dump));
    }
  }

  auto it = engine.table[nice.root].find(Key{});
  if (it == engine.table[nice.root].end()) return std::nullopt;
  Solution sol;
  sol.cost = it->second.cost;
  sol.edges = engine.reconstruct();
  return sol;
}

StateSpaceBound state_space_bound(const Instance& inst, const NicePair& nice) {
  ValidationReport check = validate_nice(inst.graph(), nice);
  if (!check.ok)
    throw std::invalid_argument("invalid nice pair: " +
                                check.violations.front());

  const ColoredGraph& g = inst.graph();
  const int r = inst.r();
  std::vector<std::vector<Color>> universe(g.vertex_count());
  for (const Edge& e : g.edges()) {
    universe[e.u].push_back(e.color);
    universe[e.v].push_back(e.color);
  }
  for (auto& u : universe) {
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }

  unsigned long long q_eff = std::min<unsigned long long>(
      g.color_count(), g.max_degree());
  unsigned long long per_vertex = sat_binomial(q_eff + r, r);

  StateSpaceBound bound;
  // availability per node, bag-slot aligned, universe-indexed
  std::vector<std::vector<std::vector<int>>> avail(nice.nodes.size());
  for (int t : postorder(nice)) {
    const NiceNode& node = nice.nodes[t];
    switch (node.kind) {
      case NiceNodeKind::Leaf:
        avail[t] = {};
        break;
      case NiceNodeKind::IntroduceVertex: {
        avail[t] = avail[node.children[0]];
        auto it = std::lower_bound(node.bag.begin(), node.bag.end(),
                                   node.vertex);
        avail[t].insert(
            avail[t].begin() + (it - node.bag.begin()),
            std::vector<int>(universe[node.vertex].size(), 0));
        break;
      }
      case NiceNodeKind::IntroduceEdge: {
        avail[t] = avail[node.children[0]];
        const Edge& e = g.edge(node.edge);
        for (Vertex v : {e.u, e.v}) {
          auto slot = std::lower_bound(node.bag.begin(), node.bag.end(), v) -
                      node.bag.begin();
          auto pos = std::lower_bound(universe[v].begin(), universe[v].end(),
                                      e.color) -
                     universe[v].begin();
          ++avail[t][slot][pos];
        }
        break;
      }
      case NiceNodeKind::Forget: {
        const auto& cbag = nice.nodes[node.children[0]].bag;
        auto slot = std::lower_bound(cbag.begin(), cbag.end(), node.vertex) -
                    cbag.begin();
        avail[t] = avail[node.children[0]];
        avail[t].erase(avail[t].begin() + slot);
        break;
      }
      case NiceNodeKind::Join: {
        avail[t] = avail[node.children[0]];
        const auto& other = avail[node.children[1]];
        for (size_t slot = 0; slot < avail[t].size(); ++slot)
          for (size_t i = 0; i < avail[t][slot].size(); ++i)
            avail[t][slot][i] += other[slot][i];
        break;
      }
    }
    unsigned long long realizable = 1;
    for (const auto& a : avail[t])
      realizable = sat_mul(realizable, count_bounded_vectors(a, r));
    unsigned long long closed = 1;
    for (size_t i = 0; i < node.bag.size(); ++i)
      closed = sat_mul(closed, per_vertex);
    bound.realizable = std::max(bound.realizable, realizable);
    bound.closed_form = std::max(bound.closed_form, closed);
  }
  return bound;
}

}  // namespace mrcf
