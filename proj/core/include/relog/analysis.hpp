#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relog/relational.hpp"

namespace relog {

// One bit per leaf type, in leaf_types order. At most 64 leaf types.
using LeafMask = uint64_t;

// Everything the relational model does not store explicitly: leaf types,
// per-relation column types, total-function candidates, per-type scopes.
struct TypeEnv {
  std::vector<std::string> leaf_types;              // first-appearance order
  std::map<std::string, int> leaf_index;
  std::map<std::string, std::vector<LeafMask>> column_types;
  std::set<std::string> type_relations;

  struct TotalFunc {
    std::vector<LeafMask> domain_cols;
    LeafMask range = 0;
    std::vector<int> conjuncts;  // indices into top_conjuncts(m.formula)
  };
  std::map<std::string, TotalFunc> total_functions;

  struct ScopeInfo {
    int count = 0;
    bool exact = false;
  };
  std::map<std::string, ScopeInfo> scopes;  // keyed by leaf type

  int universe_size = 0;

  std::vector<int> mask_leaves(LeafMask m) const;  // set bits as leaf indices
  LeafMask mask_of(const std::string& leaf) const;
};

// Populates leaf_types, column_types, type_relations and scopes.
TypeEnv recover_leaf_types(const RelModel& m);

// Adds total_functions by matching the canonical multiplicity conjunct
//   (all ((v1 T1) ... (vk Tk)) (one (join vk (... (join v1 r)))))
// where each Ti is a union of type relations covering column i of r exactly.
// Matched conjunct indices are recorded so the translator can skip them.
void recover_total_functions(const RelModel& m, TypeEnv& env);

// Cartesian product of the relation's per-column leaf sets, leaf order within
// each column, last column varying fastest. Signatures are leaf indices.
std::vector<std::vector<int>> leaf_splits(const std::string& rel, const TypeEnv& env);

// If e is a union closure of type relations, the mask of their leaves.
std::optional<LeafMask> type_union_mask(const RelExprPtr& e, const TypeEnv& env);

// Per-column leaf masks of an expression, given masks for free variables.
std::vector<LeafMask> expr_columns(const RelExprPtr& e, const TypeEnv& env,
                                   const std::map<std::string, LeafMask>& var_masks);

}  // namespace relog
