#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relog::tfol {

// Sorts are indices into Theory::sorts; kBool marks predicate results.
using SortId = int;
inline constexpr SortId kBool = -1;

struct FuncDecl {
  std::string name;
  std::vector<SortId> args;
  SortId result = kBool;
  bool domain_constant = false;  // set by the scoper for scope constants
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, App };
  Kind kind;
  std::string var_name;  // Var
  SortId var_sort = kBool;
  int decl = -1;  // App: index into Theory::decls
  std::vector<TermPtr> args;

  static TermPtr var(std::string name, SortId sort);
  static TermPtr app(int decl, std::vector<TermPtr> args = {});
};

bool term_equal(const TermPtr& a, const TermPtr& b);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True, False, Not, And, Or, Implies, Iff,
    Eq, PredApp, Forall, Exists, Distinct
  };
  Kind kind;
  std::vector<FormulaPtr> kids;  // Not / And / Or / Implies / Iff
  TermPtr t1, t2;                // Eq
  int decl = -1;                 // PredApp
  std::vector<TermPtr> args;     // PredApp
  std::vector<std::pair<std::string, SortId>> vars;  // quantifiers
  FormulaPtr body;
  std::vector<TermPtr> terms;  // Distinct

  static FormulaPtr mk_true();
  static FormulaPtr mk_false();
  static FormulaPtr mk_bool(bool b) { return b ? mk_true() : mk_false(); }
  static FormulaPtr mk_not(FormulaPtr f);
  static FormulaPtr mk_and(std::vector<FormulaPtr> fs);
  static FormulaPtr mk_or(std::vector<FormulaPtr> fs);
  static FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_eq(TermPtr a, TermPtr b);
  static FormulaPtr mk_pred(int decl, std::vector<TermPtr> args);
  static FormulaPtr mk_quant(Kind k, std::vector<std::pair<std::string, SortId>> vars,
                             FormulaPtr body);
  static FormulaPtr mk_distinct(std::vector<TermPtr> terms);
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

// Declarations and assertions interleave in creation order so that helper
// axioms can sit right after the helper's declaration.
struct Theory {
  struct Item {
    bool is_decl = false;
    int decl = -1;
    FormulaPtr assertion;
  };

  std::vector<std::string> sorts;
  std::vector<FuncDecl> decls;
  std::vector<Item> items;

  // metadata, not emitted
  std::string source_name;
  std::string options_desc;
  std::map<std::string, int> type_pred_decls;  // untyped: leaf type -> is_* decl

  SortId add_sort(const std::string& name);
  SortId find_sort(const std::string& name) const;  // -2 if absent
  int add_decl(FuncDecl d);
  int find_decl(const std::string& name) const;  // -1 if absent
  void add_assert(FormulaPtr f);

  std::vector<FormulaPtr> assertions() const;
  const std::string& sort_name(SortId s) const;
};

// Sort of a term; throws std::logic_error for unsorted constructions.
SortId term_sort(const TermPtr& t, const Theory& th);

// Bit-exact SMT-LIB2 rendering:
//   (set-logic UF) / declare-sorts / items in order / (check-sat)
std::string emit_smtlib(const Theory& t);

// Empty result means every application in every assertion is sort-correct.
std::vector<std::string> check_well_sorted(const Theory& t);

// Source-name mangling: names matching [A-Za-z][A-Za-z0-9_]* pass through
// unless reserved (then a '_' is appended); any other character becomes
// _u<hex>_.
std::string mangle(const std::string& source_name);

bool formula_has_quantifiers(const FormulaPtr& f);
bool theory_has_quantifiers(const Theory& t);

}  // namespace relog::tfol
