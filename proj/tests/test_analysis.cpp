#include <doctest.h>

#include <fstream>
#include <sstream>

#include "relog/analysis.hpp"

using namespace relog;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RelModel corpus_model(const std::string& name) {
  return parse_model(read_file(std::string(RELOG2SMT_CORPUS_DIR) + "/" + name));
}

std::vector<std::string> mask_names(const TypeEnv& env, LeafMask m) {
  std::vector<std::string> out;
  for (int l : env.mask_leaves(m)) out.push_back(env.leaf_types[l]);
  return out;
}

}  // namespace

TEST_CASE("fig1: leaf types, column types, type relations, scopes") {
  RelModel m = corpus_model("fig1.kkir");
  TypeEnv env = recover_leaf_types(m);
  CHECK(env.leaf_types == std::vector<std::string>{"B", "C", "ID"});
  CHECK(mask_names(env, env.column_types.at("id")[0]) == std::vector<std::string>{"B", "C"});
  CHECK(mask_names(env, env.column_types.at("id")[1]) == std::vector<std::string>{"ID"});
  CHECK(env.type_relations == std::set<std::string>{"B", "C", "ID"});
  CHECK(env.scopes.at("B").count == 3);
  CHECK(env.scopes.at("C").count == 3);
  CHECK(env.scopes.at("ID").count == 6);
  CHECK(env.scopes.at("ID").exact);
  int total = 0;
  for (const auto& [leaf, s] : env.scopes) total += s.count;
  CHECK(total == (int)m.universe.size());
}

TEST_CASE("single prefix universe yields a single leaf type") {
  RelModel m = parse_model("(univ A$0 A$1)(formula true)");
  TypeEnv env = recover_leaf_types(m);
  CHECK(env.leaf_types == std::vector<std::string>{"A"});
  CHECK_FALSE(env.scopes.at("A").exact);
}

TEST_CASE("mixed-prefix column types come from scanning the bound") {
  // by hand: column 0 sees prefixes {B, C}, column 1 sees {ID}
  RelModel m = parse_model(
      "(univ B$0 C$0 ID$0 ID$1)"
      "(rel mixed 2 ((B$0 ID$0)(C$0 ID$1)))");
  TypeEnv env = recover_leaf_types(m);
  CHECK(mask_names(env, env.column_types.at("mixed")[0]) ==
        std::vector<std::string>{"B", "C"});
  CHECK(mask_names(env, env.column_types.at("mixed")[1]) == std::vector<std::string>{"ID"});
}

TEST_CASE("a unary relation bounded by a strict prefix subset is not a type relation") {
  RelModel m = parse_model("(univ A$0 A$1)(rel A 1 ((A$0)))(formula true)");
  TypeEnv env = recover_leaf_types(m);
  CHECK(env.type_relations.empty());
}

TEST_CASE("fig1: total function recovery") {
  RelModel m = corpus_model("fig1.kkir");
  TypeEnv env = recover_leaf_types(m);
  recover_total_functions(m, env);
  REQUIRE(env.total_functions.count("id"));
  REQUIRE(env.total_functions.count("toC"));
  CHECK_FALSE(env.total_functions.count("toB"));
  const auto& id = env.total_functions.at("id");
  CHECK(mask_names(env, id.range) == std::vector<std::string>{"ID"});
  CHECK(mask_names(env, id.domain_cols[0]) == std::vector<std::string>{"B", "C"});
  CHECK(id.conjuncts == std::vector<int>{0});
  CHECK(env.total_functions.at("toC").conjuncts == std::vector<int>{1});
}

TEST_CASE("recovery is order-insensitive for unrelated conjuncts") {
  auto base = read_file(std::string(RELOG2SMT_CORPUS_DIR) + "/fig1.kkir");
  RelModel m = parse_model(base);
  // rebuild with the conjuncts reversed
  RelModel rev = m;
  auto cs = top_conjuncts(m.formula);
  std::vector<RelFormulaPtr> reversed(cs.rbegin(), cs.rend());
  rev.formula = RelFormula::mk_and(reversed);
  TypeEnv a = recover_leaf_types(m);
  recover_total_functions(m, a);
  TypeEnv b = recover_leaf_types(rev);
  recover_total_functions(rev, b);
  std::set<std::string> na, nb;
  for (const auto& [k, v] : a.total_functions) na.insert(k);
  for (const auto& [k, v] : b.total_functions) nb.insert(k);
  CHECK(na == nb);
}

TEST_CASE("ternary recovery matches the nested join shape") {
  RelModel m = corpus_model("c09_arity3_fun.kkir");
  TypeEnv env = recover_leaf_types(m);
  recover_total_functions(m, env);
  REQUIRE(env.total_functions.count("g"));
  const auto& g = env.total_functions.at("g");
  CHECK(g.domain_cols.size() == 2);
  CHECK(mask_names(env, g.range) == std::vector<std::string>{"C"});
}

TEST_CASE("non-canonical one constraints are not recovered") {
  RelModel m = corpus_model("c16_one_not_recovered.kkir");
  TypeEnv env = recover_leaf_types(m);
  recover_total_functions(m, env);
  CHECK(env.total_functions.empty());
}

TEST_CASE("lone and someof multiplicities never recover a function") {
  RelModel m = parse_model(
      "(univ A$0 B$0)"
      "(rel A 1 ((A$0)))(rel B 1 ((B$0)))"
      "(rel p 2 ((A$0 B$0)))"
      "(formula (all ((a A)) (lone (join a p))))"
      "(formula (all ((a A)) (someof (join a p))))");
  TypeEnv env = recover_leaf_types(m);
  recover_total_functions(m, env);
  CHECK(env.total_functions.empty());
}

TEST_CASE("partial domain coverage blocks recovery") {
  // binder covers only B but the relation's first column spans B and C
  RelModel m = parse_model(
      "(univ B$0 C$0 ID$0)"
      "(rel B 1 ((B$0)))(rel C 1 ((C$0)))(rel ID 1 ((ID$0)))"
      "(rel id 2 ((B$0 ID$0)(C$0 ID$0)))"
      "(formula (all ((a B)) (one (join a id))))");
  TypeEnv env = recover_leaf_types(m);
  recover_total_functions(m, env);
  CHECK(env.total_functions.empty());
}

TEST_CASE("leaf splits") {
  RelModel m = corpus_model("fig1.kkir");
  TypeEnv env = recover_leaf_types(m);

  auto names = [&](const std::vector<std::vector<int>>& sigs) {
    std::vector<std::vector<std::string>> out;
    for (const auto& sig : sigs) {
      std::vector<std::string> s;
      for (int l : sig) s.push_back(env.leaf_types[l]);
      out.push_back(s);
    }
    return out;
  };

  CHECK(names(leaf_splits("id", env)) ==
        std::vector<std::vector<std::string>>{{"B", "ID"}, {"C", "ID"}});
  CHECK(names(leaf_splits("toC", env)) == std::vector<std::vector<std::string>>{{"B", "C"}});
  CHECK(names(leaf_splits("B", env)) == std::vector<std::vector<std::string>>{{"B"}});
}

TEST_CASE("type union masks") {
  RelModel m = corpus_model("fig1.kkir");
  TypeEnv env = recover_leaf_types(m);
  auto u = RelExpr::binary(RelExpr::Kind::Union, RelExpr::rel("B"), RelExpr::rel("C"));
  auto mask = type_union_mask(u, env);
  REQUIRE(mask.has_value());
  CHECK(mask_names(env, *mask) == std::vector<std::string>{"B", "C"});
  CHECK_FALSE(type_union_mask(RelExpr::rel("id"), env).has_value());
  auto with_non_type = RelExpr::binary(RelExpr::Kind::Union, RelExpr::rel("B"), RelExpr::rel("id"));
  CHECK_FALSE(type_union_mask(with_non_type, env).has_value());
}
