#include "relog/scoper.hpp"

#include <algorithm>
#include <functional>

namespace relog {

namespace {

using tfol::Formula;
using tfol::FormulaPtr;
using tfol::SortId;
using tfol::Term;
using tfol::TermPtr;

// ---------------------------------------------------------------------------
// simplifier
// ---------------------------------------------------------------------------

class Simplifier {
 public:
  explicit Simplifier(const tfol::Theory& th) : th_(th) {}

  FormulaPtr run(const FormulaPtr& f) {
    FormulaPtr cur = f;
    for (int round = 0; round < 100; ++round) {
      FormulaPtr next = simp(cur);
      if (tfol::formula_equal(next, cur)) return next;
      cur = next;
    }
    return cur;
  }

 private:
  bool is_true(const FormulaPtr& f) const { return f->kind == Formula::Kind::True; }
  bool is_false(const FormulaPtr& f) const { return f->kind == Formula::Kind::False; }

  FormulaPtr mk_neg(const FormulaPtr& f) const {
    if (is_true(f)) return Formula::mk_false();
    if (is_false(f)) return Formula::mk_true();
    if (f->kind == Formula::Kind::Not) return f->kids[0];
    return Formula::mk_not(f);
  }

  FormulaPtr simp(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
      case K::False:
      case K::PredApp:
      case K::Distinct:
        return f;
      case K::Not:
        return mk_neg(simp(f->kids[0]));
      case K::And:
      case K::Or: {
        bool conj = f->kind == K::And;
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->kids) {
          FormulaPtr s = simp(k);
          if (s->kind == f->kind) {  // flatten
            for (const auto& g : s->kids) kids.push_back(g);
          } else {
            kids.push_back(std::move(s));
          }
        }
        std::vector<FormulaPtr> kept;
        for (const auto& k : kids) {
          if (conj ? is_true(k) : is_false(k)) continue;  // identity element
          if (conj ? is_false(k) : is_true(k))
            return conj ? Formula::mk_false() : Formula::mk_true();
          bool dup = false;
          for (const auto& seen : kept)
            if (tfol::formula_equal(seen, k)) { dup = true; break; }
          if (!dup) kept.push_back(k);
        }
        if (kept.empty()) return conj ? Formula::mk_true() : Formula::mk_false();
        if (kept.size() == 1) return kept[0];
        return conj ? Formula::mk_and(std::move(kept)) : Formula::mk_or(std::move(kept));
      }
      case K::Implies: {
        FormulaPtr a = simp(f->kids[0]);
        FormulaPtr b = simp(f->kids[1]);
        if (is_false(a) || is_true(b)) return Formula::mk_true();
        if (is_true(a)) return b;
        if (is_false(b)) return mk_neg(a);
        return Formula::mk_implies(std::move(a), std::move(b));
      }
      case K::Iff: {
        FormulaPtr a = simp(f->kids[0]);
        FormulaPtr b = simp(f->kids[1]);
        if (is_true(a)) return b;
        if (is_true(b)) return a;
        if (is_false(a)) return mk_neg(b);
        if (is_false(b)) return mk_neg(a);
        return Formula::mk_iff(std::move(a), std::move(b));
      }
      case K::Eq: {
        if (tfol::term_equal(f->t1, f->t2)) return Formula::mk_true();
        if (distinct_constants(f->t1, f->t2)) return Formula::mk_false();
        return f;
      }
      case K::Forall:
      case K::Exists: {
        FormulaPtr body = simp(f->body);
        // sorts are nonempty, so constant bodies collapse
        if (is_true(body)) return Formula::mk_true();
        if (is_false(body)) return Formula::mk_false();
        if (tfol::formula_equal(body, f->body)) return f;
        return Formula::mk_quant(f->kind, f->vars, std::move(body));
      }
    }
    return f;
  }

  bool distinct_constants(const TermPtr& a, const TermPtr& b) const {
    if (a->kind != Term::Kind::App || b->kind != Term::Kind::App) return false;
    if (!a->args.empty() || !b->args.empty()) return false;
    const auto& da = th_.decls.at(a->decl);
    const auto& db = th_.decls.at(b->decl);
    return da.domain_constant && db.domain_constant && a->decl != b->decl;
  }

  const tfol::Theory& th_;
};

// ---------------------------------------------------------------------------
// expansion
// ---------------------------------------------------------------------------

class Expander {
 public:
  Expander(const std::map<SortId, std::vector<TermPtr>>& consts, uint64_t budget)
      : consts_(consts), budget_(budget) {}

  FormulaPtr expand(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
      case K::False:
      case K::Eq:
      case K::PredApp:
      case K::Distinct:
        return f;
      case K::Not:
        return charge(Formula::mk_not(expand(f->kids[0])));
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->kids) kids.push_back(expand(k));
        auto g = std::make_shared<Formula>(*f);
        g->kids = std::move(kids);
        return charge(g);
      }
      case K::Forall:
      case K::Exists:
        return expand_quant(f, 0, f->body);
    }
    return f;
  }

 private:
  FormulaPtr expand_quant(const FormulaPtr& q, size_t idx, const FormulaPtr& body) {
    if (idx == q->vars.size()) return expand(body);
    const auto& [name, sort] = q->vars[idx];
    auto it = consts_.find(sort);
    if (it == consts_.end())
      throw ScopeError("no scope constants for sort of variable '" + name + "'");
    std::vector<FormulaPtr> kids;
    for (const TermPtr& c : it->second)
      kids.push_back(expand_quant(q, idx + 1, subst(body, name, sort, c)));
    return charge(q->kind == Formula::Kind::Forall ? Formula::mk_and(std::move(kids))
                                                   : Formula::mk_or(std::move(kids)));
  }

  TermPtr subst_term(const TermPtr& t, const std::string& name, SortId sort,
                     const TermPtr& repl) {
    if (t->kind == Term::Kind::Var)
      return (t->var_name == name && t->var_sort == sort) ? repl : t;
    bool changed = false;
    std::vector<TermPtr> args;
    for (const auto& a : t->args) {
      args.push_back(subst_term(a, name, sort, repl));
      changed |= args.back() != a;
    }
    if (!changed) return t;
    charge_node();
    return Term::app(t->decl, std::move(args));
  }

  FormulaPtr subst(const FormulaPtr& f, const std::string& name, SortId sort,
                   const TermPtr& repl) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::True:
      case K::False:
        return f;
      case K::Forall:
      case K::Exists:
        for (const auto& v : f->vars)
          if (v.first == name) return f;  // shadowed
        {
          FormulaPtr body = subst(f->body, name, sort, repl);
          if (body == f->body) return f;
          charge_node();
          return Formula::mk_quant(f->kind, f->vars, std::move(body));
        }
      default: {
        auto g = std::make_shared<Formula>(*f);
        bool changed = false;
        for (auto& k : g->kids) {
          auto nk = subst(k, name, sort, repl);
          changed |= nk != k;
          k = std::move(nk);
        }
        if (g->t1) {
          auto nt = subst_term(g->t1, name, sort, repl);
          changed |= nt != g->t1;
          g->t1 = std::move(nt);
        }
        if (g->t2) {
          auto nt = subst_term(g->t2, name, sort, repl);
          changed |= nt != g->t2;
          g->t2 = std::move(nt);
        }
        for (auto& a : g->args) {
          auto na = subst_term(a, name, sort, repl);
          changed |= na != a;
          a = std::move(na);
        }
        if (!changed) return f;
        charge_node();
        return g;
      }
    }
  }

  void charge_node() {
    if (++nodes_ > budget_)
      throw ExpansionBudgetError("quantifier expansion exceeded the node budget (" +
                                 std::to_string(budget_) + " nodes)");
  }

  FormulaPtr charge(FormulaPtr f) {
    charge_node();
    return f;
  }

  const std::map<SortId, std::vector<TermPtr>>& consts_;
  uint64_t budget_;
  uint64_t nodes_ = 0;
};

}  // namespace

FormulaPtr simplify(const FormulaPtr& f, const tfol::Theory& th) {
  return Simplifier(th).run(f);
}

ScopedTheory apply_scope(const tfol::Theory& t, const TypeEnv& env, SortMode sort_mode,
                         ScopeMode mode, uint64_t expand_node_budget) {
  ScopedTheory out;
  out.mode = mode;
  if (mode == ScopeMode::unscoped) {
    out.theory = t;
    return out;
  }

  tfol::Theory th;
  th.sorts = t.sorts;
  th.decls = t.decls;
  th.source_name = t.source_name;
  th.options_desc = t.options_desc;
  th.type_pred_decls = t.type_pred_decls;
  size_t original_decls = t.decls.size();

  // scope of each sort
  std::vector<int> scope_of(th.sorts.size(), 0);
  for (size_t s = 0; s < th.sorts.size(); ++s) {
    if (sort_mode == SortMode::untyped) {
      scope_of[s] = env.universe_size;
    } else {
      int found = -1;
      for (const auto& leaf : env.leaf_types)
        if (tfol::mangle(leaf) == th.sorts[s]) {
          found = env.scopes.at(leaf).count;
          break;
        }
      if (found < 0) throw ScopeError("missing scope for sort '" + th.sorts[s] + "'");
      scope_of[s] = found;
    }
    if (scope_of[s] == 0) throw ScopeError("zero scope for sort '" + th.sorts[s] + "'");
  }

  // constants, distinctness and domain closure, per sort. Closure is what
  // makes a scoped sort denote exactly its constants even when the solver
  // does the quantifier reasoning; expansion reduces it to nothing.
  std::map<SortId, std::vector<TermPtr>> const_terms;
  for (size_t s = 0; s < th.sorts.size(); ++s) {
    std::vector<TermPtr> terms;
    std::vector<int> decl_idxs;
    for (int i = 0; i < scope_of[s]; ++i) {
      tfol::FuncDecl d;
      d.name = th.sorts[s] + "$c" + std::to_string(i);
      d.result = static_cast<SortId>(s);
      d.domain_constant = true;
      int idx = th.add_decl(std::move(d));
      decl_idxs.push_back(idx);
      terms.push_back(Term::app(idx));
    }
    if (terms.size() >= 2) th.add_assert(Formula::mk_distinct(terms));
    TermPtr x = Term::var("_x0", static_cast<SortId>(s));
    std::vector<FormulaPtr> eqs;
    for (const TermPtr& c : terms) eqs.push_back(Formula::mk_eq(x, c));
    th.add_assert(Formula::mk_quant(Formula::Kind::Forall,
                                    {{"_x0", static_cast<SortId>(s)}},
                                    Formula::mk_or(std::move(eqs))));
    const_terms[static_cast<SortId>(s)] = std::move(terms);
    out.domain_constants[th.sorts[s]] = std::move(decl_idxs);
  }

  // original declarations and assertions
  for (const auto& item : t.items) th.items.push_back(item);

  // untyped: pin each type predicate to its constants (both directions when
  // the scope is exact, upper bound only otherwise)
  if (sort_mode == SortMode::untyped) {
    SortId univ = 0;
    const auto& consts = const_terms.at(univ);
    int offset = 0;
    for (const auto& leaf : env.leaf_types) {
      const auto& scope = env.scopes.at(leaf);
      auto dit = t.type_pred_decls.find(leaf);
      if (dit == t.type_pred_decls.end())
        throw ScopeError("missing type predicate for leaf '" + leaf + "'");
      TermPtr x = Term::var("_x0", univ);
      std::vector<FormulaPtr> eqs;
      for (int i = 0; i < scope.count; ++i)
        eqs.push_back(Formula::mk_eq(x, consts.at(offset + i)));
      FormulaPtr member = Formula::mk_pred(dit->second, {x});
      FormulaPtr among = Formula::mk_or(std::move(eqs));
      FormulaPtr body = scope.exact
                            ? Formula::mk_iff(std::move(member), std::move(among))
                            : Formula::mk_implies(std::move(member), std::move(among));
      th.add_assert(Formula::mk_quant(Formula::Kind::Forall, {{"_x0", univ}}, std::move(body)));
      offset += scope.count;
    }
  }

  // range formulas: every function output is one of the sort's constants
  for (size_t d = 0; d < original_decls; ++d) {
    const auto& decl = th.decls[d];
    if (decl.result == tfol::kBool || decl.domain_constant) continue;
    std::vector<std::pair<std::string, SortId>> qvars;
    std::vector<TermPtr> args;
    for (size_t i = 0; i < decl.args.size(); ++i) {
      std::string vn = "_x" + std::to_string(i);
      qvars.emplace_back(vn, decl.args[i]);
      args.push_back(Term::var(vn, decl.args[i]));
    }
    TermPtr app = Term::app(static_cast<int>(d), args);
    std::vector<FormulaPtr> eqs;
    for (const TermPtr& c : const_terms.at(decl.result))
      eqs.push_back(Formula::mk_eq(app, c));
    FormulaPtr body = Formula::mk_or(std::move(eqs));
    if (qvars.empty())
      th.add_assert(std::move(body));
    else
      th.add_assert(Formula::mk_quant(Formula::Kind::Forall, std::move(qvars), std::move(body)));
  }

  if (mode == ScopeMode::expand) {
    Expander ex(const_terms, expand_node_budget);
    Simplifier simp(th);
    std::vector<tfol::Theory::Item> items;
    for (auto& item : th.items) {
      if (item.is_decl) {
        items.push_back(item);
        continue;
      }
      FormulaPtr g = simp.run(ex.expand(item.assertion));
      if (g->kind == Formula::Kind::True) continue;
      items.push_back(tfol::Theory::Item{false, -1, std::move(g)});
    }
    th.items = std::move(items);
  }

  out.theory = std::move(th);
  return out;
}

}  // namespace relog
