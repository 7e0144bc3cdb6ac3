#include <doctest.h>

#include "relog/tfol.hpp"

using namespace relog;
using tfol::Formula;
using tfol::FuncDecl;
using tfol::kBool;
using tfol::Term;
using tfol::Theory;

TEST_CASE("emit: universal predicate over one sort") {
  Theory t;
  auto univ = t.add_sort("Univ");
  int p = t.add_decl(FuncDecl{"p", {univ}, kBool});
  t.add_assert(Formula::mk_quant(Formula::Kind::Forall, {{"x", univ}},
                                 Formula::mk_pred(p, {Term::var("x", univ)})));
  CHECK(tfol::emit_smtlib(t) ==
        "(set-logic UF)\n"
        "(declare-sort Univ 0)\n"
        "(declare-fun p (Univ) Bool)\n"
        "(assert (forall ((x Univ)) (p x)))\n"
        "(check-sat)\n");
}

TEST_CASE("emit: empty theory") {
  Theory t;
  CHECK(tfol::emit_smtlib(t) == "(set-logic UF)\n(check-sat)\n");
}

TEST_CASE("emit: distinct over three constants") {
  Theory t;
  auto s = t.add_sort("S");
  int c1 = t.add_decl(FuncDecl{"c1", {}, s});
  int c2 = t.add_decl(FuncDecl{"c2", {}, s});
  int c3 = t.add_decl(FuncDecl{"c3", {}, s});
  t.add_assert(Formula::mk_distinct({Term::app(c1), Term::app(c2), Term::app(c3)}));
  std::string out = tfol::emit_smtlib(t);
  CHECK(out.find("(declare-const c1 S)\n") != std::string::npos);
  CHECK(out.find("(assert (distinct c1 c2 c3))\n") != std::string::npos);
}

TEST_CASE("emit: empty and singleton connectives collapse") {
  Theory t;
  t.add_assert(Formula::mk_and({}));
  t.add_assert(Formula::mk_or({}));
  t.add_assert(Formula::mk_and({Formula::mk_false()}));
  std::string out = tfol::emit_smtlib(t);
  CHECK(out.find("(assert true)\n") != std::string::npos);
  CHECK(out.find("(assert false)\n") != std::string::npos);
}

TEST_CASE("emission is deterministic") {
  auto build = [] {
    Theory t;
    auto a = t.add_sort("A");
    int f = t.add_decl(FuncDecl{"f", {a}, a});
    int p = t.add_decl(FuncDecl{"p", {a}, kBool});
    auto x = Term::var("x", a);
    t.add_assert(Formula::mk_quant(
        Formula::Kind::Forall, {{"x", a}},
        Formula::mk_implies(Formula::mk_pred(p, {x}),
                            Formula::mk_eq(Term::app(f, {x}), x))));
    return t;
  };
  CHECK(tfol::emit_smtlib(build()) == tfol::emit_smtlib(build()));
}

TEST_CASE("mangling") {
  CHECK(tfol::mangle("toC") == "toC");
  CHECK(tfol::mangle("B") == "B");
  CHECK(tfol::mangle("and") == "and_");
  CHECK(tfol::mangle("forall") == "forall_");
  CHECK(tfol::mangle("Bool") == "Bool_");
  CHECK(tfol::mangle("a-b") == "a_u2d_b");
}

TEST_CASE("names with # are emitted quoted, names with $ are not") {
  Theory t;
  auto b = t.add_sort("B");
  int split = t.add_decl(FuncDecl{"id#B", {b}, b});
  int c = t.add_decl(FuncDecl{"B$c0", {}, b});
  t.add_assert(Formula::mk_eq(Term::app(split, {Term::app(c)}), Term::app(c)));
  std::string out = tfol::emit_smtlib(t);
  CHECK(out.find("(declare-fun |id#B| (B) B)\n") != std::string::npos);
  CHECK(out.find("(declare-const B$c0 B)\n") != std::string::npos);
  CHECK(out.find("(assert (= (|id#B| B$c0) B$c0))\n") != std::string::npos);
}

TEST_CASE("well-sorted: clean theory has no diagnostics") {
  Theory t;
  auto a = t.add_sort("A");
  int p = t.add_decl(FuncDecl{"p", {a}, kBool});
  t.add_assert(Formula::mk_quant(Formula::Kind::Forall, {{"x", a}},
                                 Formula::mk_pred(p, {Term::var("x", a)})));
  CHECK(tfol::check_well_sorted(t).empty());
}

TEST_CASE("well-sorted: arity mismatch is one diagnostic") {
  Theory t;
  auto a = t.add_sort("A");
  int f = t.add_decl(FuncDecl{"f", {a}, a});
  int p = t.add_decl(FuncDecl{"p", {a}, kBool});
  auto x = Term::var("x", a);
  t.add_assert(Formula::mk_quant(
      Formula::Kind::Forall, {{"x", a}},
      Formula::mk_pred(p, {Term::app(f, {x, x})})));
  auto diags = tfol::check_well_sorted(t);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("takes 1 arguments, got 2") != std::string::npos);
}

TEST_CASE("well-sorted: wrong argument sort is reported") {
  Theory t;
  auto a = t.add_sort("A");
  auto b = t.add_sort("B");
  int p = t.add_decl(FuncDecl{"p", {a}, kBool});
  t.add_assert(Formula::mk_quant(Formula::Kind::Forall, {{"y", b}},
                                 Formula::mk_pred(p, {Term::var("y", b)})));
  auto diags = tfol::check_well_sorted(t);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("has sort B, expected A") != std::string::npos);
}

TEST_CASE("well-sorted: free variables and cross-sort equality are reported") {
  Theory t;
  auto a = t.add_sort("A");
  auto b = t.add_sort("B");
  t.add_assert(Formula::mk_eq(Term::var("x", a), Term::var("x", a)));
  t.add_assert(Formula::mk_quant(
      Formula::Kind::Exists, {{"x", a}, {"y", b}},
      Formula::mk_eq(Term::var("x", a), Term::var("y", b))));
  auto diags = tfol::check_well_sorted(t);
  CHECK(diags.size() == 3);  // two free occurrences + one sort clash
}

TEST_CASE("theory quantifier scan") {
  Theory t;
  auto a = t.add_sort("A");
  int p = t.add_decl(FuncDecl{"p", {a}, kBool});
  int c = t.add_decl(FuncDecl{"c", {}, a});
  t.add_assert(Formula::mk_pred(p, {Term::app(c)}));
  CHECK_FALSE(tfol::theory_has_quantifiers(t));
  t.add_assert(Formula::mk_quant(Formula::Kind::Exists, {{"x", a}},
                                 Formula::mk_pred(p, {Term::var("x", a)})));
  CHECK(tfol::theory_has_quantifiers(t));
}
