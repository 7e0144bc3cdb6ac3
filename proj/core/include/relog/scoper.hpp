#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "relog/analysis.hpp"
#include "relog/options.hpp"
#include "relog/tfol.hpp"

namespace relog {

class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExpansionBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kDefaultExpandBudget = 10'000'000;

struct ScopedTheory {
  tfol::Theory theory;
  ScopeMode mode = ScopeMode::unscoped;
  std::map<std::string, std::vector<int>> domain_constants;  // sort name -> decl indices
};

// unscoped: identity. solver_fmf: scope constants, distinctness, type
// exactness axioms (untyped) and one range formula per non-Bool function.
// expand: everything solver_fmf adds, then every quantifier is instantiated
// over the scope constants and the result simplified. Expansion aborts with
// ExpansionBudgetError once more than `expand_node_budget` formula nodes have
// been built.
ScopedTheory apply_scope(const tfol::Theory& t, const TypeEnv& env, SortMode sort_mode,
                         ScopeMode mode, uint64_t expand_node_budget = kDefaultExpandBudget);

// Fixpoint constant folding, and/or flattening, duplicate-conjunct removal,
// identical-term equalities, distinct-constant equalities.
tfol::FormulaPtr simplify(const tfol::FormulaPtr& f, const tfol::Theory& th);

}  // namespace relog
