#pragma once

#include <stdexcept>
#include <string>

namespace relog {

enum class SortMode { typed, untyped };
enum class RelMode { predicates, functions };
enum class ScopeMode { unscoped, expand, solver_fmf };

// The three translation axes. All twelve combinations are constructible.
struct Options {
  SortMode sorts = SortMode::typed;
  RelMode rels = RelMode::predicates;
  ScopeMode scope = ScopeMode::unscoped;

  bool operator==(const Options&) const = default;
};

std::string to_string(SortMode m);
std::string to_string(RelMode m);
std::string to_string(ScopeMode m);
std::string to_string(const Options& o);  // "typed,predicates,unscoped"

SortMode parse_sort_mode(const std::string& s);    // throws std::invalid_argument
RelMode parse_rel_mode(const std::string& s);
ScopeMode parse_scope_mode(const std::string& s);  // accepts "fmf" for solver_fmf

}  // namespace relog
