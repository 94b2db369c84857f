#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mrcf/dp.hpp"
#include "mrcf/generators.hpp"
#include "mrcf/io.hpp"
#include "mrcf/matching.hpp"
#include "mrcf/oracle.hpp"
#include "mrcf/treewidth.hpp"

namespace {

int write_output(const std::optional<std::string>& path,
                 const std::string& content) {
  if (!path) {
    std::cout << content;
    return 0;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << *path << '\n';
    return mrcf::kExitInputError;
  }
  out << content;
  return 0;
}

mrcf::Instance gadget_instance(const mrcf::GadgetGraph& gadget, int r) {
  int q = gadget.graph.color_count();
  std::vector<mrcf::Cost> costs(q * q, 0);
  return mrcf::Instance(gadget.graph, mrcf::CostMatrix(q, std::move(costs)),
                        r, std::nullopt);
}

nlohmann::json lift_provenance(const mrcf::LiftOutput& lift) {
  nlohmann::json j;
  j["type"] = "lift";
  j["white_color"] = lift.white + 1;
  j["pad_vertices"] = nlohmann::json::array();
  for (mrcf::Vertex v : lift.pad_vertices) j["pad_vertices"].push_back(v + 1);
  j["copies"] = nlohmann::json::array();
  for (const auto& copy : lift.copies) {
    nlohmann::json c;
    c["pair"] = {copy.u + 1, copy.v + 1};
    c["clique"] = nlohmann::json::array();
    for (mrcf::Vertex v : copy.clique) c["clique"].push_back(v + 1);
    j["copies"].push_back(std::move(c));
  }
  return j;
}

nlohmann::json clique_provenance(const mrcf::CliqueReduction& red) {
  nlohmann::json j;
  j["type"] = "clique";
  j["white_color"] = red.white + 1;
  // non-white color c stands for source vertex c (same 1-based id)
  j["colors"] = nlohmann::json::array();
  for (mrcf::Color c = 0; c < red.white; ++c)
    j["colors"].push_back({{"color", c + 1}, {"source_vertex", c + 1}});
  j["circuit"] = nlohmann::json::array();
  for (const auto& arc : red.circuit.arcs)
    j["circuit"].push_back({{"from", arc.from + 1},
                            {"from_occurrence", arc.from_occurrence + 1},
                            {"to", arc.to + 1},
                            {"to_occurrence", arc.to_occurrence + 1}});
  j["vertices"] = nlohmann::json::array();
  for (size_t v = 0; v < red.vertex_info.size(); ++v) {
    const auto& info = red.vertex_info[v];
    nlohmann::json entry;
    entry["id"] = v + 1;
    switch (info.role) {
      case mrcf::CliqueReduction::Role::U:
        entry["role"] = "U";
        entry["class"] = info.a + 1;
        entry["copy"] = info.b + 1;
        entry["source_vertex"] = info.c + 1;
        break;
      case mrcf::CliqueReduction::Role::S:
        entry["role"] = "S";
        entry["arc"] = info.a + 1;
        break;
      case mrcf::CliqueReduction::Role::T:
        entry["role"] = "T";
        entry["class"] = info.a + 1;
        entry["index"] = info.b + 1;
        break;
    }
    j["vertices"].push_back(std::move(entry));
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solvers and generators for minimum reload cost "
               "r-factors on edge-colored graphs"};
  app.require_subcommand(1);

  // solve
  std::string solve_input;
  mrcf::SolveOptions solve_options;
  std::string emit_factor;
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", solve_input, "instance file")->required();
  solve->add_option("--algo", solve_options.algo,
                    "auto | oracle | matching | dp");
  solve->add_option("--emit-factor", emit_factor, "write the factor here");
  solve->add_flag("--json", solve_options.json, "machine-readable report");
  solve->add_option("--oracle-budget", solve_options.oracle_budget,
                    "search node budget for the oracle");
  solve->add_option("--dp-state-budget", solve_options.dp_state_budget,
                    "max realizable per-node state product for auto dp");
  solve->add_option("--dp-width", solve_options.dp_width_budget,
                    "max decomposition width for auto dp");

  // check
  std::string check_instance, check_factor;
  bool check_json = false;
  auto* check = app.add_subcommand("check", "verify a claimed factor");
  check->add_option("instance", check_instance, "instance file")->required();
  check->add_option("factor", check_factor, "solution file")->required();
  check->add_flag("--json", check_json, "machine-readable report");

  // gen
  auto* gen = app.add_subcommand("gen", "emit generated instances");
  gen->require_subcommand(1);
  std::optional<std::string> gen_out;

  auto* gen_joker = gen->add_subcommand("joker", "monochromatic diamond");
  bool joker_five = false;
  gen_joker->add_flag("--five", joker_five, "5-cycle variant");
  gen_joker->add_option("--out", gen_out, "output path (default stdout)");

  auto* gen_q = gen->add_subcommand("q", "Q_l degree gadget");
  int gen_q_ell = 3;
  gen_q->add_option("--l", gen_q_ell, "gadget parameter l >= 2")->required();
  gen_q->add_option("--out", gen_out, "output path (default stdout)");

  auto* gen_lift = gen->add_subcommand("lift", "raise a 2-factor instance");
  std::string lift_input;
  int lift_r = 3;
  std::optional<std::string> lift_provenance_path;
  gen_lift->add_option("--input", lift_input, "source instance")->required();
  gen_lift->add_option("--r", lift_r, "target degree >= 3")->required();
  gen_lift->add_option("--out", gen_out, "output path (default stdout)");
  gen_lift->add_option("--provenance", lift_provenance_path,
                       "write a JSON provenance sidecar");

  auto* gen_clique =
      gen->add_subcommand("clique", "multicolored-clique reduction");
  std::string clique_graph;
  std::optional<int> clique_classes;
  std::optional<std::string> clique_provenance_path;
  gen_clique->add_option("--graph", clique_graph, "mcc source file")
      ->required();
  gen_clique->add_option("--classes", clique_classes,
                         "expected class count (validated)");
  gen_clique->add_option("--out", gen_out, "output path (default stdout)");
  gen_clique->add_option("--provenance", clique_provenance_path,
                         "write a JSON provenance sidecar");

  auto* gen_random = gen->add_subcommand("random", "seeded random instance");
  int rnd_n = 0, rnd_m = 0, rnd_q = 1, rnd_r = 2;
  mrcf::Cost rnd_cost_max = 9;
  std::uint64_t rnd_seed = 0;
  gen_random->add_option("--n", rnd_n, "vertices")->required();
  gen_random->add_option("--m", rnd_m, "edges")->required();
  gen_random->add_option("--q", rnd_q, "colors")->required();
  gen_random->add_option("--r", rnd_r, "degree target")->required();
  gen_random->add_option("--cost-max", rnd_cost_max, "max matrix entry");
  gen_random->add_option("--seed", rnd_seed, "generator seed")->required();
  gen_random->add_option("--out", gen_out, "output path (default stdout)");

  // decomp
  auto* decomp = app.add_subcommand("decomp", "emit a tree decomposition");
  std::string decomp_input, decomp_strategy = "min-degree";
  bool decomp_nice = false;
  std::optional<std::string> decomp_out;
  decomp->add_option("--input", decomp_input, "instance file")->required();
  decomp->add_option("--strategy", decomp_strategy,
                     "min-degree | min-fill");
  decomp->add_flag("--nice", decomp_nice, "emit the nice normal form");
  decomp->add_option("--out", decomp_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : mrcf::kExitInputError;
  }

  try {
    if (solve->parsed()) {
      if (!emit_factor.empty()) solve_options.emit_factor = emit_factor;
      return mrcf::cmd_solve(solve_input, solve_options, std::cout);
    }
    if (check->parsed())
      return mrcf::cmd_check(check_instance, check_factor, check_json,
                             std::cout);
    if (gen->parsed()) {
      if (gen_joker->parsed()) {
        mrcf::GadgetGraph gadget =
            joker_five ? mrcf::make_5joker(0) : mrcf::make_joker(0);
        return write_output(gen_out,
                            render_instance(gadget_instance(gadget, 2)));
      }
      if (gen_q->parsed()) {
        mrcf::GadgetGraph gadget = mrcf::make_q_gadget(gen_q_ell);
        return write_output(
            gen_out, render_instance(gadget_instance(gadget, gen_q_ell)));
      }
      if (gen_lift->parsed()) {
        std::ifstream in(lift_input, std::ios::binary);
        if (!in) {
          std::cerr << "error: cannot read " << lift_input << '\n';
          return mrcf::kExitInputError;
        }
        mrcf::Instance src = mrcf::parse_instance(in);
        mrcf::LiftOutput lift = mrcf::lift_to_r(src, lift_r);
        if (lift_provenance_path) {
          int rc = write_output(lift_provenance_path,
                                lift_provenance(lift).dump(2) + "\n");
          if (rc != 0) return rc;
        }
        return write_output(gen_out, render_instance(lift.instance));
      }
      if (gen_clique->parsed()) {
        std::ifstream in(clique_graph, std::ios::binary);
        if (!in) {
          std::cerr << "error: cannot read " << clique_graph << '\n';
          return mrcf::kExitInputError;
        }
        mrcf::VertexColoredGraph h = mrcf::parse_mcc(in);
        if (clique_classes && *clique_classes != h.class_count) {
          std::cerr << "error: file declares " << h.class_count
                    << " classes, --classes says " << *clique_classes << '\n';
          return mrcf::kExitInputError;
        }
        mrcf::CliqueReduction red = mrcf::clique_to_mrcf(h);
        if (clique_provenance_path) {
          int rc = write_output(clique_provenance_path,
                                clique_provenance(red).dump(2) + "\n");
          if (rc != 0) return rc;
        }
        return write_output(gen_out, render_instance(red.instance));
      }
      if (gen_random->parsed()) {
        mrcf::Instance inst = mrcf::random_instance(
            rnd_n, rnd_m, rnd_q, rnd_r, rnd_cost_max, rnd_seed);
        return write_output(gen_out, render_instance(inst));
      }
    }
    if (decomp->parsed()) {
      std::ifstream in(decomp_input, std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot read " << decomp_input << '\n';
        return mrcf::kExitInputError;
      }
      mrcf::Instance inst = mrcf::parse_instance(in);
      mrcf::EliminationStrategy strategy;
      if (decomp_strategy == "min-degree")
        strategy = mrcf::EliminationStrategy::MinDegree;
      else if (decomp_strategy == "min-fill")
        strategy = mrcf::EliminationStrategy::MinFill;
      else {
        std::cerr << "error: unknown strategy " << decomp_strategy << '\n';
        return mrcf::kExitInputError;
      }
      mrcf::TreeDecomposition td =
          mrcf::decompose_heuristic(inst.graph(), strategy);
      if (decomp_nice) {
        mrcf::NicePair nice = mrcf::make_nice(inst.graph(), td);
        return write_output(decomp_out,
                            mrcf::render_nice(inst.graph(), nice));
      }
      return write_output(decomp_out, mrcf::render_decomposition(td));
    }
  } catch (const mrcf::ParseError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return mrcf::kExitInputError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return mrcf::kExitInputError;
  }
  return mrcf::kExitInputError;
}
