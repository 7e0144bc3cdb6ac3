#include "relog/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace relog {

std::vector<int> TypeEnv::mask_leaves(LeafMask m) const {
  std::vector<int> out;
  for (size_t i = 0; i < leaf_types.size(); ++i)
    if (m & (LeafMask{1} << i)) out.push_back(static_cast<int>(i));
  return out;
}

LeafMask TypeEnv::mask_of(const std::string& leaf) const {
  auto it = leaf_index.find(leaf);
  if (it == leaf_index.end()) throw std::logic_error("unknown leaf type '" + leaf + "'");
  return LeafMask{1} << it->second;
}

TypeEnv recover_leaf_types(const RelModel& m) {
  TypeEnv env;
  env.universe_size = static_cast<int>(m.universe.size());
  for (const auto& a : m.universe) {
    if (!env.leaf_index.count(a.prefix)) {
      env.leaf_index[a.prefix] = static_cast<int>(env.leaf_types.size());
      env.leaf_types.push_back(a.prefix);
    }
    env.scopes[a.prefix].count += 1;
  }
  if (env.leaf_types.size() > 64)
    throw std::runtime_error("more than 64 leaf types are not supported");
  for (const auto& p : m.exact_prefixes) env.scopes[p].exact = true;

  for (const auto& r : m.relations) {
    std::vector<LeafMask> cols(r.arity, 0);
    for (const auto& tup : r.upper_bound)
      for (int i = 0; i < r.arity; ++i)
        cols[i] |= env.mask_of(tup[i].prefix);
    env.column_types[r.name] = std::move(cols);
  }

  // A type relation: unary, named like a prefix, bounded by exactly that
  // prefix's atoms.
  for (const auto& r : m.relations) {
    if (r.arity != 1 || !env.leaf_index.count(r.name)) continue;
    std::set<Atom> bound;
    for (const auto& tup : r.upper_bound) bound.insert(tup[0]);
    std::set<Atom> prefix_atoms;
    for (const auto& a : m.universe)
      if (a.prefix == r.name) prefix_atoms.insert(a);
    if (bound == prefix_atoms) env.type_relations.insert(r.name);
  }
  return env;
}

std::optional<LeafMask> type_union_mask(const RelExprPtr& e, const TypeEnv& env) {
  if (e->kind == RelExpr::Kind::RelRef && env.type_relations.count(e->name))
    return env.mask_of(e->name);
  if (e->kind == RelExpr::Kind::Union) {
    auto a = type_union_mask(e->lhs, env);
    auto b = type_union_mask(e->rhs, env);
    if (a && b) return *a | *b;
  }
  return std::nullopt;
}

std::vector<LeafMask> expr_columns(const RelExprPtr& e, const TypeEnv& env,
                                   const std::map<std::string, LeafMask>& var_masks) {
  using K = RelExpr::Kind;
  switch (e->kind) {
    case K::RelRef: {
      auto it = env.column_types.find(e->name);
      if (it == env.column_types.end())
        throw std::logic_error("unknown relation '" + e->name + "'");
      return it->second;
    }
    case K::VarRef: {
      auto it = var_masks.find(e->name);
      if (it == var_masks.end())
        throw std::logic_error("unbound variable '" + e->name + "'");
      return {it->second};
    }
    case K::Union: {
      auto a = expr_columns(e->lhs, env, var_masks);
      auto b = expr_columns(e->rhs, env, var_masks);
      for (size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
      return a;
    }
    case K::Inter: {
      auto a = expr_columns(e->lhs, env, var_masks);
      auto b = expr_columns(e->rhs, env, var_masks);
      for (size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
      return a;
    }
    case K::Diff:
      return expr_columns(e->lhs, env, var_masks);
    case K::Transpose: {
      auto a = expr_columns(e->lhs, env, var_masks);
      std::reverse(a.begin(), a.end());
      return a;
    }
    case K::Join: {
      auto a = expr_columns(e->lhs, env, var_masks);
      auto b = expr_columns(e->rhs, env, var_masks);
      std::vector<LeafMask> out(a.begin(), a.end() - 1);
      out.insert(out.end(), b.begin() + 1, b.end());
      return out;
    }
    case K::Product: {
      auto a = expr_columns(e->lhs, env, var_masks);
      auto b = expr_columns(e->rhs, env, var_masks);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
  }
  throw std::logic_error("bad expression kind");
}

namespace {

// Peels (join vk (join ... (join v1 r))) into the variable list v1..vk and r.
bool peel_join_chain(const RelExprPtr& e, std::vector<std::string>& vars_out,
                     std::string& rel_out) {
  if (e->kind == RelExpr::Kind::RelRef) {
    rel_out = e->name;
    return true;
  }
  if (e->kind != RelExpr::Kind::Join || e->lhs->kind != RelExpr::Kind::VarRef)
    return false;
  if (!peel_join_chain(e->rhs, vars_out, rel_out)) return false;
  vars_out.push_back(e->lhs->name);
  return true;
}

}  // namespace

void recover_total_functions(const RelModel& m, TypeEnv& env) {
  auto conjuncts = top_conjuncts(m.formula);
  for (size_t ci = 0; ci < conjuncts.size(); ++ci) {
    const auto& c = conjuncts[ci];
    if (c->kind != RelFormula::Kind::Forall) continue;
    if (c->body->kind != RelFormula::Kind::Mult || c->body->mult != MultKind::one) continue;

    std::vector<std::string> chain_vars;  // v1..vk after peeling
    std::string rel_name;
    if (!peel_join_chain(c->body->e1, chain_vars, rel_name)) continue;
    if (chain_vars.empty()) continue;

    const RelDecl* rel = m.find_relation(rel_name);
    if (!rel || rel->arity < 2) continue;
    if (env.type_relations.count(rel_name)) continue;
    if (chain_vars.size() != static_cast<size_t>(rel->arity - 1)) continue;
    if (c->decls.size() != chain_vars.size()) continue;

    const auto& cols = env.column_types.at(rel_name);
    bool match = true;
    for (size_t i = 0; i < chain_vars.size(); ++i) {
      if (c->decls[i].first != chain_vars[i]) { match = false; break; }
      auto mask = type_union_mask(c->decls[i].second, env);
      if (!mask || *mask != cols[i]) { match = false; break; }
    }
    if (!match) continue;
    // each variable used exactly once is implied by exact-count + distinct
    // binder names, which the parser guarantees
    std::set<std::string> distinct(chain_vars.begin(), chain_vars.end());
    if (distinct.size() != chain_vars.size()) continue;

    auto& tf = env.total_functions[rel_name];
    if (tf.conjuncts.empty()) {
      tf.domain_cols.assign(cols.begin(), cols.end() - 1);
      tf.range = cols.back();
    }
    tf.conjuncts.push_back(static_cast<int>(ci));
  }
}

std::vector<std::vector<int>> leaf_splits(const std::string& rel, const TypeEnv& env) {
  auto it = env.column_types.find(rel);
  if (it == env.column_types.end())
    throw std::logic_error("unknown relation '" + rel + "'");
  std::vector<std::vector<int>> per_col;
  for (LeafMask m : it->second) per_col.push_back(env.mask_leaves(m));
  std::vector<std::vector<int>> out;
  std::vector<int> cur(per_col.size(), 0);
  for (const auto& col : per_col)
    if (col.empty()) return out;  // statically empty relation
  while (true) {
    std::vector<int> sig;
    for (size_t i = 0; i < per_col.size(); ++i) sig.push_back(per_col[i][cur[i]]);
    out.push_back(std::move(sig));
    int i = static_cast<int>(per_col.size()) - 1;
    while (i >= 0) {
      if (++cur[i] < static_cast<int>(per_col[i].size())) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace relog
