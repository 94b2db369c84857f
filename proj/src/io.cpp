#include "mrcf/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mrcf/dp.hpp"
#include "mrcf/matching.hpp"

#include "json.hpp"

namespace mrcf {

namespace {

// Token stream over content lines; comments ('#') and blank lines skipped.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next content line as tokens; nullopt at end of input.
  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return tokens;
    }
    return std::nullopt;
  }

  std::vector<std::string> expect(const std::string& what) {
    auto tokens = next();
    if (!tokens) throw ParseError(line_, "unexpected end of input: " + what);
    return *tokens;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

long long to_int(const LineReader& reader, const std::string& tok,
                 const std::string& what) {
  try {
    size_t used = 0;
    long long value = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return value;
  } catch (const std::exception&) {
    throw ParseError(reader.line(), "bad " + what + " token '" + tok + "'");
  }
}

}  // namespace

Instance parse_instance(std::istream& in) {
  LineReader reader(in);
  auto header = reader.expect("mrcf header");
  if (header.size() != 6 || header[0] != "mrcf")
    throw ParseError(reader.line(), "expected 'mrcf n m q r k'");
  long long n = to_int(reader, header[1], "vertex count");
  long long m = to_int(reader, header[2], "edge count");
  long long q = to_int(reader, header[3], "color count");
  long long r = to_int(reader, header[4], "degree target");
  std::optional<Cost> budget;
  if (header[5] != "inf") budget = to_int(reader, header[5], "budget");
  if (n < 0 || m < 0 || q < 0)
    throw ParseError(reader.line(), "negative header field");

  std::vector<Cost> costs;
  costs.reserve(q * q);
  for (int row = 0; row < q; ++row) {
    auto tokens = reader.expect("cost matrix row");
    if ((long long)tokens.size() != q)
      throw ParseError(reader.line(), "cost row needs " + std::to_string(q) +
                                          " entries");
    for (const auto& tok : tokens)
      costs.push_back(to_int(reader, tok, "cost"));
  }
  CostMatrix matrix;
  try {
    matrix = CostMatrix((int)q, std::move(costs));
  } catch (const std::invalid_argument& err) {
    throw ParseError(reader.line(), err.what());
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    auto tokens = reader.expect("edge row");
    if (tokens.size() != 4 || tokens[0] != "e")
      throw ParseError(reader.line(), "expected 'e u v color'");
    long long u = to_int(reader, tokens[1], "endpoint");
    long long v = to_int(reader, tokens[2], "endpoint");
    long long c = to_int(reader, tokens[3], "color");
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(reader.line(), "endpoint out of range");
    if (c < 1 || c > q) throw ParseError(reader.line(), "color out of range");
    edges.push_back({(Vertex)(u - 1), (Vertex)(v - 1), (Color)(c - 1)});
  }
  if (reader.next())
    throw ParseError(reader.line(), "trailing content after edges");

  try {
    return Instance(ColoredGraph((int)n, (int)q, std::move(edges)),
                    std::move(matrix), (int)r, budget);
  } catch (const std::invalid_argument& err) {
    throw ParseError(reader.line(), err.what());
  }
}

std::string render_instance(const Instance& inst) {
  const ColoredGraph& g = inst.graph();
  std::ostringstream out;
  out << "mrcf " << g.vertex_count() << ' ' << g.edge_count() << ' '
      << g.color_count() << ' ' << inst.r() << ' ';
  if (inst.budget())
    out << *inst.budget();
  else
    out << "inf";
  out << '\n';
  for (Color a = 0; a < g.color_count(); ++a) {
    for (Color b = 0; b < g.color_count(); ++b) {
      if (b) out << ' ';
      out << inst.costs().cost(a, b);
    }
    out << '\n';
  }
  for (const Edge& e : g.edges())
    out << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.color + 1 << '\n';
  return out.str();
}

SolutionFile parse_solution(std::istream& in) {
  LineReader reader(in);
  auto header = reader.expect("solution header");
  SolutionFile sol;
  if (header.size() == 1 && header[0] == "infeasible") {
    if (reader.next())
      throw ParseError(reader.line(), "trailing content after 'infeasible'");
    return sol;
  }
  if (header.size() != 3 || header[0] != "factor")
    throw ParseError(reader.line(), "expected 'factor cost count'");
  sol.feasible = true;
  sol.cost = to_int(reader, header[1], "cost");
  long long count = to_int(reader, header[2], "edge count");
  if (count < 0) throw ParseError(reader.line(), "negative edge count");
  for (long long i = 0; i < count; ++i) {
    auto tokens = reader.expect("factor edge");
    if (tokens.size() != 3 || tokens[0] != "e")
      throw ParseError(reader.line(), "expected 'e u v'");
    long long u = to_int(reader, tokens[1], "endpoint");
    long long v = to_int(reader, tokens[2], "endpoint");
    if (u < 1 || v < 1) throw ParseError(reader.line(), "bad endpoint");
    sol.edges.emplace_back((Vertex)(u - 1), (Vertex)(v - 1));
  }
  if (reader.next())
    throw ParseError(reader.line(), "trailing content after edges");
  return sol;
}

std::string render_solution(const SolutionFile& sol) {
  std::ostringstream out;
  if (!sol.feasible) {
    out << "infeasible\n";
    return out.str();
  }
  out << "factor " << sol.cost << ' ' << sol.edges.size() << '\n';
  for (auto [u, v] : sol.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

TreeDecomposition parse_decomposition(std::istream& in) {
  LineReader reader(in);
  auto header = reader.expect("decomp header");
  if (header.size() != 3 || header[0] != "decomp")
    throw ParseError(reader.line(), "expected 'decomp nodes width'");
  long long nodes = to_int(reader, header[1], "node count");
  if (nodes < 0) throw ParseError(reader.line(), "negative node count");
  TreeDecomposition td;
  td.bags.assign(nodes, {});
  for (long long i = 0; i < nodes; ++i) {
    auto tokens = reader.expect("bag row");
    if (tokens.size() < 2 || tokens[0] != "b")
      throw ParseError(reader.line(), "expected 'b id v...'");
    long long id = to_int(reader, tokens[1], "node id");
    if (id < 1 || id > nodes) throw ParseError(reader.line(), "bad node id");
    for (size_t j = 2; j < tokens.size(); ++j)
      td.bags[id - 1].push_back(
          (Vertex)(to_int(reader, tokens[j], "vertex") - 1));
  }
  for (long long i = 0; i + 1 < nodes; ++i) {
    auto tokens = reader.expect("tree edge");
    if (tokens.size() != 3 || tokens[0] != "t")
      throw ParseError(reader.line(), "expected 't a b'");
    long long a = to_int(reader, tokens[1], "node id");
    long long b = to_int(reader, tokens[2], "node id");
    if (a < 1 || a > nodes || b < 1 || b > nodes)
      throw ParseError(reader.line(), "tree edge out of range");
    td.tree_edges.emplace_back((int)(a - 1), (int)(b - 1));
  }
  if (reader.next()) throw ParseError(reader.line(), "trailing content");
  return td;
}

std::string render_decomposition(const TreeDecomposition& td) {
  std::ostringstream out;
  out << "decomp " << td.bags.size() << ' ' << td.width() << '\n';
  for (size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : td.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges)
    out << "t " << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

NicePair parse_nice(const ColoredGraph& g, std::istream& in) {
  LineReader reader(in);
  auto header = reader.expect("nice header");
  if (header.size() != 4 || header[0] != "nice")
    throw ParseError(reader.line(), "expected 'nice nodes width root'");
  long long nodes = to_int(reader, header[1], "node count");
  long long root = to_int(reader, header[3], "root id");
  if (nodes < 1) throw ParseError(reader.line(), "nice pair needs nodes");
  if (root < 1 || root > nodes) throw ParseError(reader.line(), "bad root");
  NicePair np;
  np.nodes.assign(nodes, {});
  np.root = (int)(root - 1);
  for (long long i = 0; i < nodes; ++i) {
    auto tokens = reader.expect("bag row");
    if (tokens.size() < 2 || tokens[0] != "b")
      throw ParseError(reader.line(), "expected 'b id v...'");
    long long id = to_int(reader, tokens[1], "node id");
    if (id < 1 || id > nodes) throw ParseError(reader.line(), "bad node id");
    for (size_t j = 2; j < tokens.size(); ++j)
      np.nodes[id - 1].bag.push_back(
          (Vertex)(to_int(reader, tokens[j], "vertex") - 1));
  }
  for (long long i = 0; i < nodes; ++i) {
    auto tokens = reader.expect("kind row");
    if (tokens.size() < 3 || tokens[0] != "k")
      throw ParseError(reader.line(), "expected 'k id kind ...'");
    long long id = to_int(reader, tokens[1], "node id");
    if (id < 1 || id > nodes) throw ParseError(reader.line(), "bad node id");
    NiceNode& node = np.nodes[id - 1];
    const std::string& kind = tokens[2];
    if (kind == "leaf" && tokens.size() == 3) {
      node.kind = NiceNodeKind::Leaf;
    } else if (kind == "join" && tokens.size() == 3) {
      node.kind = NiceNodeKind::Join;
    } else if (kind == "vintro" && tokens.size() == 4) {
      node.kind = NiceNodeKind::IntroduceVertex;
      node.vertex = (Vertex)(to_int(reader, tokens[3], "vertex") - 1);
    } else if (kind == "forget" && tokens.size() == 4) {
      node.kind = NiceNodeKind::Forget;
      node.vertex = (Vertex)(to_int(reader, tokens[3], "vertex") - 1);
    } else if (kind == "eintro" && tokens.size() == 5) {
      node.kind = NiceNodeKind::IntroduceEdge;
      Vertex u = (Vertex)(to_int(reader, tokens[3], "endpoint") - 1);
      Vertex v = (Vertex)(to_int(reader, tokens[4], "endpoint") - 1);
      auto e = g.find_edge(u, v);
      if (!e)
        throw ParseError(reader.line(), "edge-introduce of a missing edge");
      node.edge = *e;
    } else {
      throw ParseError(reader.line(), "bad node kind row");
    }
  }
  for (long long i = 0; i + 1 < nodes; ++i) {
    auto tokens = reader.expect("tree edge");
    if (tokens.size() != 3 || tokens[0] != "t")
      throw ParseError(reader.line(), "expected 't parent child'");
    long long parent = to_int(reader, tokens[1], "node id");
    long long child = to_int(reader, tokens[2], "node id");
    if (parent < 1 || parent > nodes || child < 1 || child > nodes)
      throw ParseError(reader.line(), "tree edge out of range");
    NiceNode& p = np.nodes[parent - 1];
    if (p.children[0] < 0)
      p.children[0] = (int)(child - 1);
    else if (p.children[1] < 0)
      p.children[1] = (int)(child - 1);
    else
      throw ParseError(reader.line(), "node has more than two children");
    np.nodes[child - 1].parent = (int)(parent - 1);
  }
  if (reader.next()) throw ParseError(reader.line(), "trailing content");
  return np;
}

std::string render_nice(const ColoredGraph& g, const NicePair& np) {
  std::ostringstream out;
  out << "nice " << np.nodes.size() << ' ' << np.width() << ' '
      << np.root + 1 << '\n';
  for (size_t i = 0; i < np.nodes.size(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : np.nodes[i].bag) out << ' ' << v + 1;
    out << '\n';
  }
  for (size_t i = 0; i < np.nodes.size(); ++i) {
    const NiceNode& node = np.nodes[i];
    out << "k " << i + 1 << ' ';
    switch (node.kind) {
      case NiceNodeKind::Leaf:
        out << "leaf";
        break;
      case NiceNodeKind::Join:
        out << "join";
        break;
      case NiceNodeKind::IntroduceVertex:
        out << "vintro " << node.vertex + 1;
        break;
      case NiceNodeKind::IntroduceEdge:
        out << "eintro " << g.edge(node.edge).u + 1 << ' '
            << g.edge(node.edge).v + 1;
        break;
      case NiceNodeKind::Forget:
        out << "forget " << node.vertex + 1;
        break;
    }
    out << '\n';
  }
  for (size_t i = 0; i < np.nodes.size(); ++i)
    for (int c : np.nodes[i].children)
      if (c >= 0) out << "t " << i + 1 << ' ' << c + 1 << '\n';
  return out.str();
}

VertexColoredGraph parse_mcc(std::istream& in) {
  LineReader reader(in);
  auto header = reader.expect("mcc header");
  if (header.size() != 4 || header[0] != "mcc")
    throw ParseError(reader.line(), "expected 'mcc n m k'");
  long long n = to_int(reader, header[1], "vertex count");
  long long m = to_int(reader, header[2], "edge count");
  long long k = to_int(reader, header[3], "class count");
  if (n < 0 || m < 0 || k < 0)
    throw ParseError(reader.line(), "negative header field");
  VertexColoredGraph h;
  h.vertex_count = (int)n;
  h.class_count = (int)k;
  h.classes.assign(n, -1);
  for (long long i = 0; i < n; ++i) {
    auto tokens = reader.expect("class row");
    if (tokens.size() != 3 || tokens[0] != "v")
      throw ParseError(reader.line(), "expected 'v vertex class'");
    long long v = to_int(reader, tokens[1], "vertex");
    long long c = to_int(reader, tokens[2], "class");
    if (v < 1 || v > n) throw ParseError(reader.line(), "vertex out of range");
    if (c < 1 || c > k) throw ParseError(reader.line(), "class out of range");
    h.classes[v - 1] = (int)(c - 1);
  }
  for (long long i = 0; i < m; ++i) {
    auto tokens = reader.expect("edge row");
    if (tokens.size() != 3 || tokens[0] != "e")
      throw ParseError(reader.line(), "expected 'e u v'");
    long long u = to_int(reader, tokens[1], "endpoint");
    long long v = to_int(reader, tokens[2], "endpoint");
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(reader.line(), "endpoint out of range");
    h.edges.emplace_back((int)(u - 1), (int)(v - 1));
  }
  if (reader.next()) throw ParseError(reader.line(), "trailing content");
  return h;
}

std::string render_mcc(const VertexColoredGraph& h) {
  std::ostringstream out;
  out << "mcc " << h.vertex_count << ' ' << h.edges.size() << ' '
      << h.class_count << '\n';
  for (int v = 0; v < h.vertex_count; ++v)
    out << "v " << v + 1 << ' ' << h.classes[v] + 1 << '\n';
  for (auto [u, v] : h.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

namespace {

struct SolveReport {
  std::string algorithm;
  std::string status;  // optimal | infeasible | budget-exceeded
  std::optional<Cost> cost;
  std::optional<int> width;
  std::optional<std::string> budget_verdict;  // within | over | unbounded
  std::string note;
};

void print_report(const Instance& inst, const SolveReport& report, bool json,
                  std::ostream& out) {
  if (json) {
    nlohmann::json j;
    j["n"] = inst.graph().vertex_count();
    j["m"] = inst.graph().edge_count();
    j["q"] = inst.graph().color_count();
    j["r"] = inst.r();
    if (inst.budget())
      j["k"] = *inst.budget();
    else
      j["k"] = "inf";
    j["algorithm"] = report.algorithm;
    j["status"] = report.status;
    if (report.cost) j["cost"] = *report.cost;
    if (report.width) j["width"] = *report.width;
    if (report.budget_verdict) j["budget"] = *report.budget_verdict;
    if (!report.note.empty()) j["note"] = report.note;
    out << j.dump() << '\n';
    return;
  }
  out << "instance: n=" << inst.graph().vertex_count()
      << " m=" << inst.graph().edge_count()
      << " q=" << inst.graph().color_count() << " r=" << inst.r() << " k=";
  if (inst.budget())
    out << *inst.budget();
  else
    out << "inf";
  out << '\n';
  out << "algorithm: " << report.algorithm;
  if (report.width) out << " (width " << *report.width << ")";
  out << '\n';
  out << "status: " << report.status << '\n';
  if (report.cost) out << "minimum cost: " << *report.cost << '\n';
  if (report.budget_verdict) out << "budget: " << *report.budget_verdict << '\n';
  if (!report.note.empty()) out << "note: " << report.note << '\n';
}

int finish_solve(const Instance& inst, const SolveOptions& options,
                 SolveReport report, const std::optional<Solution>& solution,
                 std::ostream& out) {
  int code;
  if (solution) {
    report.status = "optimal";
    report.cost = solution->cost;
    if (!inst.budget()) {
      report.budget_verdict = "unbounded";
      code = kExitFactorWithinBudget;
    } else if (solution->cost <= *inst.budget()) {
      report.budget_verdict = "within";
      code = kExitFactorWithinBudget;
    } else {
      report.budget_verdict = "over";
      code = kExitFactorOverBudget;
    }
  } else {
    report.status = "infeasible";
    code = kExitInfeasible;
  }

  if (options.emit_factor) {
    SolutionFile file;
    if (solution) {
      file.feasible = true;
      file.cost = solution->cost;
      for (EdgeIndex e : solution->edges) {
        const Edge& edge = inst.graph().edge(e);
        file.edges.emplace_back(edge.u, edge.v);
      }
    }
    std::ofstream f(*options.emit_factor, std::ios::binary);
    if (!f) {
      out << "error: cannot write " << *options.emit_factor << '\n';
      return kExitInputError;
    }
    f << render_solution(file);
  }

  print_report(inst, report, options.json, out);
  return code;
}

}  // namespace

int cmd_solve(const std::string& instance_path, const SolveOptions& options,
              std::ostream& out) {
  Instance inst;
  try {
    std::ifstream in(instance_path, std::ios::binary);
    if (!in) {
      out << "error: cannot read " << instance_path << '\n';
      return kExitInputError;
    }
    inst = parse_instance(in);
  } catch (const ParseError& err) {
    out << "error: " << instance_path << ": " << err.what() << '\n';
    return kExitInputError;
  }

  const ColoredGraph& g = inst.graph();
  const bool matching_applicable =
      g.vertex_count() > 0 && g.min_degree() >= inst.r() &&
      g.max_degree() <= inst.r() + 1;

  std::string algo = options.algo;
  if (algo == "auto") {
    if (matching_applicable) {
      algo = "matching";
    } else {
      TreeDecomposition td =
          decompose_heuristic(g, EliminationStrategy::MinDegree);
      TreeDecomposition fill =
          decompose_heuristic(g, EliminationStrategy::MinFill);
      if (fill.width() < td.width()) td = std::move(fill);
      NicePair nice = make_nice(g, td);
      StateSpaceBound bound = state_space_bound(inst, nice);
      if (td.width() <= options.dp_width_budget &&
          bound.realizable <= options.dp_state_budget) {
        SolveReport report;
        report.algorithm = "dp";
        report.width = td.width();
        auto solution = solve_dp(inst, nice);
        return finish_solve(inst, options, report, solution, out);
      }
      OracleResult oracle = solve_bruteforce(inst, options.oracle_budget);
      if (oracle.status == OracleResult::Status::BudgetExceeded) {
        SolveReport report;
        report.algorithm = "oracle";
        report.status = "budget-exceeded";
        report.note = "no applicable exact method at this budget";
        print_report(inst, report, options.json, out);
        return kExitBudgetExceeded;
      }
      SolveReport report;
      report.algorithm = "oracle";
      return finish_solve(inst, options, report, oracle.best, out);
    }
  }

  if (algo == "matching") {
    SolveReport report;
    report.algorithm = "matching";
    try {
      auto solution = solve_degree_bounded(inst);
      return finish_solve(inst, options, report, solution, out);
    } catch (const UnsupportedInstance& err) {
      out << "error: " << err.what() << '\n';
      return kExitInputError;
    }
  }
  if (algo == "oracle") {
    OracleResult oracle = solve_bruteforce(inst, options.oracle_budget);
    if (oracle.status == OracleResult::Status::BudgetExceeded) {
      SolveReport report;
      report.algorithm = "oracle";
      report.status = "budget-exceeded";
      report.note = "node budget exhausted before the search finished";
      print_report(inst, report, options.json, out);
      return kExitBudgetExceeded;
    }
    SolveReport report;
    report.algorithm = "oracle";
    return finish_solve(inst, options, report, oracle.best, out);
  }
  if (algo == "dp") {
    TreeDecomposition td =
        decompose_heuristic(g, EliminationStrategy::MinDegree);
    TreeDecomposition fill =
        decompose_heuristic(g, EliminationStrategy::MinFill);
    if (fill.width() < td.width()) td = std::move(fill);
    NicePair nice = make_nice(g, td);
    SolveReport report;
    report.algorithm = "dp";
    report.width = td.width();
    auto solution = solve_dp(inst, nice);
    return finish_solve(inst, options, report, solution, out);
  }
  out << "error: unknown algorithm '" << algo << "'\n";
  return kExitInputError;
}

int cmd_check(const std::string& instance_path,
              const std::string& factor_path, bool json, std::ostream& out) {
  Instance inst;
  SolutionFile sol;
  try {
    std::ifstream in(instance_path, std::ios::binary);
    if (!in) {
      out << "error: cannot read " << instance_path << '\n';
      return kExitInputError;
    }
    inst = parse_instance(in);
    std::ifstream fin(factor_path, std::ios::binary);
    if (!fin) {
      out << "error: cannot read " << factor_path << '\n';
      return kExitInputError;
    }
    sol = parse_solution(fin);
  } catch (const ParseError& err) {
    out << "error: " << err.what() << '\n';
    return kExitInputError;
  }

  auto report = [&](const std::string& status, std::optional<Cost> claimed,
                    std::optional<Cost> actual, int code) {
    if (json) {
      nlohmann::json j;
      j["status"] = status;
      if (claimed) j["claimed_cost"] = *claimed;
      if (actual) j["recomputed_cost"] = *actual;
      out << j.dump() << '\n';
    } else {
      out << "check: " << status << '\n';
      if (claimed) out << "claimed cost: " << *claimed << '\n';
      if (actual) out << "recomputed cost: " << *actual << '\n';
    }
    return code;
  };

  if (!sol.feasible)
    return report("nothing to verify (claimed infeasible)", std::nullopt,
                  std::nullopt, kExitFactorWithinBudget);

  // Map listed endpoint pairs back to instance edges.
  std::vector<EdgeIndex> selected;
  for (auto [u, v] : sol.edges) {
    auto e = inst.graph().find_edge(u, v);
    if (!e)
      return report("edge not present in the instance", sol.cost,
                    std::nullopt, kExitInputError);
    selected.push_back(*e);
  }
  std::sort(selected.begin(), selected.end());
  if (std::adjacent_find(selected.begin(), selected.end()) != selected.end())
    return report("factor lists an edge twice", sol.cost, std::nullopt,
                  kExitInputError);

  EdgeSubgraph sub(inst.graph(), selected);
  FactorReport degrees = validate_r_factor(inst, sub);
  if (!degrees.ok)
    return report("degree violation at vertex " +
                      std::to_string(degrees.bad_degrees.front().first + 1),
                  sol.cost, std::nullopt, kExitDegreeViolation);
  Cost actual = total_reload_cost(inst, sub);
  if (actual != sol.cost)
    return report("cost mismatch", sol.cost, actual, kExitCostMismatch);
  return report("ok", sol.cost, actual, kExitFactorWithinBudget);
}

}  // namespace mrcf
