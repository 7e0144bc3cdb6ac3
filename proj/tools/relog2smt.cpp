#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relog/bench.hpp"
#include "relog/oracle.hpp"
#include "relog/scoper.hpp"
#include "relog/solver.hpp"
#include "relog/translator.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ModeFlags {
  std::string sorts = "typed";
  std::string rels = "predicates";
  std::string scope = "unscoped";

  relog::Options options() const {
    return relog::Options{relog::parse_sort_mode(sorts), relog::parse_rel_mode(rels),
                          relog::parse_scope_mode(scope)};
  }
};

void add_mode_flags(CLI::App* cmd, ModeFlags& flags) {
  cmd->add_option("--sorts", flags.sorts, "typed|untyped")->default_val("typed");
  cmd->add_option("--rels", flags.rels, "predicates|functions")->default_val("predicates");
  cmd->add_option("--scope", flags.scope, "unscoped|expand|fmf")->default_val("unscoped");
}

int run(int argc, char** argv) {
  CLI::App app{"relational-logic to SMT-LIB translation toolkit"};
  app.require_subcommand(1);

  std::string input, output, csv_path;
  std::string solver_cmd = relog::default_solver_command();
  std::string combos = "all";
  int64_t timeout_ms = 60'000;
  uint64_t budget = relog::kDefaultExpandBudget;
  uint64_t oracle_budget = relog::kDefaultOracleBudget;
  int workers = 0;
  bool show_witness = false;

  auto* translate = app.add_subcommand("translate", "compile a .kkir model to SMT-LIB2");
  ModeFlags tflags;
  translate->add_option("model", input, "input .kkir file")->required();
  add_mode_flags(translate, tflags);
  translate->add_option("-o,--output", output, "output file (default stdout)");
  translate->add_option("--budget", budget, "expansion node budget");

  auto* solve = app.add_subcommand("solve", "translate and run the SMT solver");
  ModeFlags sflags;
  solve->add_option("model", input, "input .kkir file")->required();
  add_mode_flags(solve, sflags);
  solve->add_option("--timeout", timeout_ms, "solver timeout in ms")->default_val(60'000);
  solve->add_option("--solver-cmd", solver_cmd, "command template with {file}");
  solve->add_option("--budget", budget, "expansion node budget");

  auto* oracle = app.add_subcommand("oracle", "brute-force verdict for a .kkir model");
  oracle->add_option("model", input, "input .kkir file")->required();
  oracle->add_option("--budget", oracle_budget, "search node budget");
  oracle->add_flag("--witness", show_witness, "print the satisfying interpretation");

  auto* bench = app.add_subcommand("bench", "run combinations over a model directory");
  bench->add_option("dir", input, "directory of .kkir files")->required();
  bench->add_option("--combos", combos, "all|interesting|comma list")->default_val("all");
  bench->add_option("--timeout", timeout_ms, "per-cell timeout in ms")->default_val(60'000);
  bench->add_option("--solver-cmd", solver_cmd, "command template with {file}");
  bench->add_option("--csv", csv_path, "write CSV here (default stdout)");
  bench->add_option("--budget", budget, "expansion node budget");
  bench->add_option("--workers", workers, "solver processes to run in parallel");

  auto* combos_cmd = app.add_subcommand("combos", "list translation combinations");
  combos_cmd->add_option("--combos", combos, "all|interesting|comma list")->default_val("all");

  CLI11_PARSE(app, argc, argv);

  if (translate->parsed()) {
    auto compiled = relog::compile_to_smtlib(read_file(input), tflags.options(), budget);
    if (output.empty()) {
      std::cout << compiled.smtlib;
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + output + "'");
      out << compiled.smtlib;
    }
    return 0;
  }

  if (solve->parsed()) {
    auto compiled = relog::compile_to_smtlib(read_file(input), sflags.options(), budget);
    auto run = relog::run_solver(compiled.smtlib, solver_cmd, timeout_ms);
    std::cout << relog::to_string(run.verdict) << "\n";
    if (run.verdict == relog::Verdict::ERROR && !run.detail.empty())
      std::cerr << run.detail << "\n";
    return 0;
  }

  if (oracle->parsed()) {
    relog::RelModel m = relog::parse_model(read_file(input));
    relog::OracleResult res = relog::brute_force_solve(m, oracle_budget);
    std::cout << (res.sat ? "SAT" : "UNSAT") << "\n";
    if (show_witness && res.witness) {
      for (const auto& [rel, tuples] : res.witness->tuples) {
        std::cout << rel << " =";
        for (const auto& t : tuples) {
          std::cout << " (";
          for (size_t i = 0; i < t.size(); ++i)
            std::cout << (i ? " " : "") << m.universe[t[i]].str();
          std::cout << ")";
        }
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (bench->parsed()) {
    relog::BenchConfig cfg;
    cfg.solver_cmd = solver_cmd;
    cfg.timeout_ms = timeout_ms;
    cfg.expand_budget = budget;
    cfg.workers = workers;
    auto records = relog::run_bench(input, relog::parse_combo_selection(combos), cfg);
    std::string csv = relog::to_csv(records);
    if (csv_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
      out << csv;
    }
    return 0;
  }

  if (combos_cmd->parsed()) {
    for (const auto& o : relog::parse_combo_selection(combos))
      std::cout << relog::to_string(o) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const relog::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const relog::ScopeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const relog::ExpansionBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const relog::OracleBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
