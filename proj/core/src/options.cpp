#include "relog/options.hpp"

namespace relog {

std::string to_string(SortMode m) { return m == SortMode::typed ? "typed" : "untyped"; }

std::string to_string(RelMode m) {
  return m == RelMode::predicates ? "predicates" : "functions";
}

std::string to_string(ScopeMode m) {
  switch (m) {
    case ScopeMode::unscoped: return "unscoped";
    case ScopeMode::expand: return "expand";
    case ScopeMode::solver_fmf: return "solver_fmf";
  }
  return "unscoped";
}

std::string to_string(const Options& o) {
  return to_string(o.sorts) + "," + to_string(o.rels) + "," + to_string(o.scope);
}

SortMode parse_sort_mode(const std::string& s) {
  if (s == "typed") return SortMode::typed;
  if (s == "untyped") return SortMode::untyped;
  throw std::invalid_argument("sort mode must be typed or untyped, got '" + s + "'");
}

RelMode parse_rel_mode(const std::string& s) {
  if (s == "predicates") return RelMode::predicates;
  if (s == "functions") return RelMode::functions;
  throw std::invalid_argument("relation mode must be predicates or functions, got '" + s + "'");
}

ScopeMode parse_scope_mode(const std::string& s) {
  if (s == "unscoped") return ScopeMode::unscoped;
  if (s == "expand") return ScopeMode::expand;
  if (s == "fmf" || s == "solver_fmf") return ScopeMode::solver_fmf;
  throw std::invalid_argument("scope mode must be unscoped, expand or fmf, got '" + s + "'");
}

}  // namespace relog
