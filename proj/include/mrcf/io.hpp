#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mrcf/core.hpp"
#include "mrcf/generators.hpp"
#include "mrcf/oracle.hpp"
#include "mrcf/treewidth.hpp"

namespace mrcf {

// File formats use 1-based vertex, color, edge and node ids; everything in
// memory is 0-based. Rendering is canonical, so parse(render(x)) == x and
// render(parse(render(x))) == render(x) byte for byte.

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// Instance files:
//   mrcf <n> <m> <q> <r> <k|inf>
//   <q rows of the cost matrix, q entries each>
//   e <u> <v> <color>          (m rows)
// '#' starts a comment line; blank lines are skipped.
Instance parse_instance(std::istream& in);
std::string render_instance(const Instance& inst);

// Solution files: either a single "infeasible" line or
//   factor <cost> <count>
//   e <u> <v>                  (count rows)
struct SolutionFile {
  bool feasible = false;
  Cost cost = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;  // 0-based endpoints
};
SolutionFile parse_solution(std::istream& in);
std::string render_solution(const SolutionFile& sol);

// Decomposition listings:
//   decomp <nodes> <width>
//   b <id> <v...>
//   t <a> <b>
TreeDecomposition parse_decomposition(std::istream& in);
std::string render_decomposition(const TreeDecomposition& td);

// Nice-pair listings add a root, per-node kinds and directed tree edges:
//   nice <nodes> <width> <root>
//   b <id> <v...>
//   k <id> leaf|join|vintro <v>|eintro <u> <v>|forget <v>
//   t <parent> <child>
NicePair parse_nice(const ColoredGraph& g, std::istream& in);
std::string render_nice(const ColoredGraph& g, const NicePair& np);

// Multicolored-clique source files:
//   mcc <n> <m> <k>
//   v <vertex> <class>         (n rows)
//   e <u> <v>                  (m rows)
VertexColoredGraph parse_mcc(std::istream& in);
std::string render_mcc(const VertexColoredGraph& h);

// Exit codes shared by the CLI.
inline constexpr int kExitFactorWithinBudget = 0;
inline constexpr int kExitFactorOverBudget = 10;
inline constexpr int kExitInfeasible = 20;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitBudgetExceeded = 3;
inline constexpr int kExitCostMismatch = 11;
inline constexpr int kExitDegreeViolation = 12;

struct SolveOptions {
  std::string algo = "auto";  // auto | oracle | matching | dp
  std::optional<std::string> emit_factor;
  bool json = false;
  std::uint64_t oracle_budget = kDefaultNodeBudget;
  unsigned long long dp_state_budget = 2'000'000;
  int dp_width_budget = 24;
};

// Solves the instance file and reports; returns the process exit code.
int cmd_solve(const std::string& instance_path, const SolveOptions& options,
              std::ostream& out);

// Recomputes degree validity and reload cost of a claimed factor from
// scratch, against the core definitions only.
int cmd_check(const std::string& instance_path,
              const std::string& factor_path, bool json, std::ostream& out);

}  // namespace mrcf
