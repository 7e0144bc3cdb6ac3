#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relog {

// An element of the finite universe. Rendered as `prefix$index`, e.g. `B$0`.
struct Atom {
  std::string prefix;
  int index = 0;

  std::string str() const { return prefix + "$" + std::to_string(index); }
  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

// A relation together with its upper bound: the tuples it may contain.
struct RelDecl {
  std::string name;
  int arity = 1;
  std::vector<std::vector<Atom>> upper_bound;

  bool operator==(const RelDecl&) const = default;
};

struct RelExpr;
using RelExprPtr = std::shared_ptr<const RelExpr>;

// Relational expressions. Transpose uses only `lhs`.
struct RelExpr {
  enum class Kind { RelRef, VarRef, Union, Inter, Diff, Transpose, Join, Product };

  Kind kind;
  std::string name;   // RelRef / VarRef
  RelExprPtr lhs, rhs;

  static RelExprPtr rel(std::string n);
  static RelExprPtr var(std::string n);
  static RelExprPtr binary(Kind k, RelExprPtr a, RelExprPtr b);
  static RelExprPtr transpose(RelExprPtr a);
};

bool expr_equal(const RelExprPtr& a, const RelExprPtr& b);

enum class MultKind { one, lone, some, no };

struct RelFormula;
using RelFormulaPtr = std::shared_ptr<const RelFormula>;

struct RelFormula {
  enum class Kind {
    True, False, Not, And, Or, Implies, Iff,
    Equal, Subset, In, Forall, Exists, Mult
  };

  Kind kind;
  std::vector<RelFormulaPtr> kids;   // Not / And / Or / Implies / Iff
  RelExprPtr e1, e2;                 // Equal / Subset / In; Mult uses e1
  std::vector<std::pair<std::string, RelExprPtr>> decls;  // quantifier binders
  RelFormulaPtr body;
  MultKind mult = MultKind::one;

  static RelFormulaPtr mk_true();
  static RelFormulaPtr mk_false();
  static RelFormulaPtr mk_not(RelFormulaPtr f);
  static RelFormulaPtr mk_and(std::vector<RelFormulaPtr> fs);
  static RelFormulaPtr mk_or(std::vector<RelFormulaPtr> fs);
  static RelFormulaPtr mk_implies(RelFormulaPtr a, RelFormulaPtr b);
  static RelFormulaPtr mk_iff(RelFormulaPtr a, RelFormulaPtr b);
  static RelFormulaPtr mk_cmp(Kind k, RelExprPtr a, RelExprPtr b);
  static RelFormulaPtr mk_quant(Kind k, std::vector<std::pair<std::string, RelExprPtr>> ds,
                                RelFormulaPtr body);
  static RelFormulaPtr mk_mult(MultKind m, RelExprPtr e);
};

bool formula_equal(const RelFormulaPtr& a, const RelFormulaPtr& b);

enum class Goal { run, check };

// The parsed problem: universe, bounds, one conjoined formula, goal marker.
// `exact_prefixes` lists the leaf-type prefixes whose scope is exact.
struct RelModel {
  std::vector<Atom> universe;
  std::vector<RelDecl> relations;
  RelFormulaPtr formula;
  Goal goal = Goal::run;
  std::vector<std::string> exact_prefixes;

  const RelDecl* find_relation(const std::string& n) const;
  bool is_exact(const std::string& prefix) const;
};

bool model_equal(const RelModel& a, const RelModel& b);

class ParseError : public std::runtime_error {
 public:
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line), col(col) {}
};

RelModel parse_model(std::string_view text);
std::string render_model(const RelModel& m);

// Arity of an expression; variables have arity 1. Throws std::logic_error on
// ill-formed operands (the parser rejects those up front).
int expr_arity(const RelExprPtr& e, const RelModel& m);

// Top-level conjuncts of the model formula, with nested Ands flattened.
std::vector<RelFormulaPtr> top_conjuncts(const RelFormulaPtr& f);

}  // namespace relog
