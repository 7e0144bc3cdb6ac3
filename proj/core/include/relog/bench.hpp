#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relog/options.hpp"
#include "relog/scoper.hpp"
#include "relog/solver.hpp"

namespace relog {

struct SolveRecord {
  std::string model;
  Options options;
  int64_t translate_ms = 0;
  int64_t solve_ms = 0;
  Verdict result = Verdict::ERROR;
  std::string solver_id;
  int64_t timeout_ms = 0;
  std::string peak_note;
};

inline constexpr char kCsvHeader[] =
    "model,sort_mode,rel_mode,scope_mode,translate_ms,solve_ms,result,solver_id,timeout_ms";

std::vector<Options> all_combos();

// The check-marked cells of the translation-options table:
// typed/functions/expand, typed/predicates/unscoped,
// untyped/predicates/unscoped, untyped/predicates/solver_fmf.
std::vector<Options> interesting_combos();

// "all", "interesting", or a comma list like
// "typed-functions-expand,untyped-predicates-fmf".
std::vector<Options> parse_combo_selection(const std::string& sel);

std::string to_csv(const std::vector<SolveRecord>& records);

// parse -> translate -> scope -> emit, with the translation time measured
// around the whole pipeline
struct Compiled {
  std::string smtlib;
  int64_t translate_ms = 0;
};
Compiled compile_to_smtlib(const std::string& kkir_text, const Options& opts,
                           uint64_t expand_budget = kDefaultExpandBudget);

struct BenchConfig {
  std::string solver_cmd;
  int64_t timeout_ms = 60'000;
  uint64_t expand_budget = kDefaultExpandBudget;
  int workers = 0;  // 0 = hardware concurrency
};

// Every combo on every .kkir file under dir (file names sorted). Rows come
// back model-major, combo-minor regardless of completion order; cell failures
// become ERROR rows and the run continues.
std::vector<SolveRecord> run_bench(const std::string& dir, const std::vector<Options>& combos,
                                   const BenchConfig& cfg);

}  // namespace relog
