#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relog/relational.hpp"

namespace relog {

// Tuples of atom indices into the model universe.
using OracleTuple = std::vector<int>;

struct Interpretation {
  std::map<std::string, std::vector<OracleTuple>> tuples;
};

struct OracleResult {
  bool sat = false;
  std::optional<Interpretation> witness;
};

class OracleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kDefaultOracleBudget = uint64_t{1} << 24;

// Enumerates assignments of each relation to a subset of its upper bound
// (tuples decided in declaration order, excluded branch first) and evaluates
// the formula under standard relational semantics, pruning branches whose
// partial evaluation is already decided. Type relations of exact prefixes are
// pinned to their full bound. Throws OracleBudgetError after `node_budget`
// search nodes. Shares no code with the translation pipeline.
OracleResult brute_force_solve(const RelModel& m, uint64_t node_budget = kDefaultOracleBudget);

// 2-valued check used to validate witnesses: true iff the interpretation lies
// within the bounds, pins exact type relations, and satisfies the formula.
bool eval_interpretation(const RelModel& m, const Interpretation& interp);

}  // namespace relog
