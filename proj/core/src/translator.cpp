#include "relog/translator.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace relog {

namespace {

using tfol::FormulaPtr;
using tfol::SortId;
using tfol::TermPtr;
using Sig = std::vector<int>;  // leaf indices, one per column

// How tuple membership in a translated expression is stated for one leaf
// signature. A missing signature means the expression is statically empty
// there.
struct MemberRep {
  enum class Kind { True, EqTuple, Pred, FuncGraph };
  Kind kind = Kind::True;
  std::vector<TermPtr> tuple;   // EqTuple
  int decl = -1;                // Pred / FuncGraph
  std::vector<TermPtr> lifted;  // Pred: leading arguments for enclosing vars
};

struct ExprVal {
  bool is_tuple = false;
  std::vector<TermPtr> terms;   // tuple components
  std::vector<int> term_leaves; // typed: concrete leaf per component (-1 untyped)
  std::vector<LeafMask> cols;   // per-column leaf masks (both modes)
  std::map<Sig, MemberRep> reps;  // typed: per signature; untyped: key {}
};

struct VarBinding {
  std::string source_name;
  TermPtr term;
  LeafMask mask = 0;
  int leaf = -1;  // typed only
};

void collect_expr_vars(const RelExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == RelExpr::Kind::VarRef) {
    out.insert(e->name);
    return;
  }
  collect_expr_vars(e->lhs, out);
  collect_expr_vars(e->rhs, out);
}

class Translator {
 public:
  Translator(const RelModel& m, const Options& opts) : m_(m), opts_(opts) {}

  TransResult run() {
    env_ = recover_leaf_types(m_);
    recover_total_functions(m_, env_);
    theory_.options_desc = to_string(opts_);
    for (const auto& r : m_.relations) reserved_source_names_.insert(tfol::mangle(r.name));

    declare_types();
    declare_functions();

    auto conjuncts = top_conjuncts(m_.formula);
    for (size_t i = 0; i < conjuncts.size(); ++i) {
      if (consumed_.count(static_cast<int>(i))) continue;
      theory_.add_assert(tx_formula(conjuncts[i]));
    }

    TransResult res;
    res.theory = std::move(theory_);
    res.helper_count = helper_count_;
    res.split_map = std::move(split_map_);
    res.env = std::move(env_);
    res.consumed = std::move(consumed_);
    return res;
  }

 private:
  bool typed() const { return opts_.sorts == SortMode::typed; }

  // --------------------------------------------------------------------
  // Step 1: types
  // --------------------------------------------------------------------

  void declare_types() {
    if (typed()) {
      for (const auto& leaf : env_.leaf_types) {
        std::string name = tfol::mangle(leaf);
        while (theory_.find_sort(name) >= 0) name += "_";
        leaf_sorts_.push_back(theory_.add_sort(name));
      }
      return;
    }
    univ_ = theory_.add_sort("Univ");
    for (const auto& leaf : env_.leaf_types) {
      std::string name = "is_" + tfol::mangle(leaf);
      while (theory_.find_decl(name) >= 0 || reserved_source_names_.count(name))
        name += "_";
      int idx = theory_.add_decl(tfol::FuncDecl{name, {univ_}, tfol::kBool});
      is_decls_.push_back(idx);
      theory_.type_pred_decls[leaf] = idx;
    }
    // every element belongs to exactly one leaf type
    TermPtr x = tfol::Term::var("_x0", univ_);
    std::vector<FormulaPtr> cases;
    for (size_t t = 0; t < env_.leaf_types.size(); ++t) {
      std::vector<FormulaPtr> lits;
      for (size_t u = 0; u < env_.leaf_types.size(); ++u) {
        FormulaPtr app = tfol::Formula::mk_pred(is_decls_[u], {x});
        lits.push_back(u == t ? app : tfol::Formula::mk_not(app));
      }
      cases.push_back(tfol::Formula::mk_and(std::move(lits)));
    }
    theory_.add_assert(tfol::Formula::mk_quant(
        tfol::Formula::Kind::Forall, {{"_x0", univ_}},
        tfol::Formula::mk_or(std::move(cases))));
  }

  // --------------------------------------------------------------------
  // Step 2: functions and predicates
  // --------------------------------------------------------------------

  void declare_functions() {
    for (const auto& r : m_.relations) {
      if (env_.type_relations.count(r.name)) continue;
      const auto& cols = env_.column_types.at(r.name);
      auto tf = env_.total_functions.find(r.name);
      bool as_function = opts_.rels == RelMode::functions &&
                         tf != env_.total_functions.end() &&
                         (!typed() || env_.mask_leaves(tf->second.range).size() == 1);

      if (typed()) {
        if (as_function) {
          int range_leaf = env_.mask_leaves(tf->second.range)[0];
          std::vector<std::vector<int>> dom_sigs =
              sigs_of(std::vector<LeafMask>(cols.begin(), cols.end() - 1));
          for (const auto& sig : dom_sigs) {
            std::string name = split_name(r.name, sig);
            std::vector<SortId> args;
            for (int l : sig) args.push_back(leaf_sorts_[l]);
            int idx = theory_.add_decl(tfol::FuncDecl{name, args, leaf_sorts_[range_leaf]});
            func_splits_[r.name][sig] = idx;
            split_map_[r.name].push_back(name);
          }
          for (int ci : tf->second.conjuncts) consumed_.insert(ci);
        } else {
          for (const auto& sig : sigs_of(cols)) {
            std::string name = split_name(r.name, sig);
            std::vector<SortId> args;
            for (int l : sig) args.push_back(leaf_sorts_[l]);
            int idx = theory_.add_decl(tfol::FuncDecl{name, args, tfol::kBool});
            pred_splits_[r.name][sig] = idx;
            split_map_[r.name].push_back(name);
          }
        }
        continue;
      }

      // untyped: a single copy over Univ
      std::string name = tfol::mangle(r.name);
      while (theory_.find_decl(name) >= 0) name += "_";
      if (as_function) {
        std::vector<SortId> args(r.arity - 1, univ_);
        int idx = theory_.add_decl(tfol::FuncDecl{name, args, univ_});
        func_decl_[r.name] = idx;
        split_map_[r.name].push_back(name);
        for (int ci : tf->second.conjuncts) consumed_.insert(ci);
        // range typing: inside the domain, the output has the range type
        std::vector<std::pair<std::string, SortId>> qvars;
        std::vector<TermPtr> argterms;
        std::vector<FormulaPtr> guards;
        for (int i = 0; i + 1 < r.arity; ++i) {
          std::string vn = "_x" + std::to_string(i);
          TermPtr v = tfol::Term::var(vn, univ_);
          qvars.emplace_back(vn, univ_);
          argterms.push_back(v);
          guards.push_back(mask_guard(v, cols[i]));
        }
        FormulaPtr range_guard =
            mask_guard(tfol::Term::app(idx, argterms), tf->second.range);
        theory_.add_assert(tfol::Formula::mk_quant(
            tfol::Formula::Kind::Forall, std::move(qvars),
            tfol::Formula::mk_implies(tfol::Formula::mk_and(std::move(guards)),
                                      std::move(range_guard))));
      } else {
        std::vector<SortId> args(r.arity, univ_);
        int idx = theory_.add_decl(tfol::FuncDecl{name, args, tfol::kBool});
        pred_decl_[r.name] = idx;
        split_map_[r.name].push_back(name);
      }
    }
  }

  std::string split_name(const std::string& rel, const Sig& sig) {
    std::string name = tfol::mangle(rel) + "#";
    for (size_t i = 0; i < sig.size(); ++i) {
      if (i) name += "_";
      name += tfol::mangle(env_.leaf_types[sig[i]]);
    }
    while (theory_.find_decl(name) >= 0) name += "_";
    return name;
  }

  // signatures of a column-mask vector: leaf order per column, last column
  // fastest
  std::vector<Sig> sigs_of(const std::vector<LeafMask>& cols) const {
    std::vector<std::vector<int>> per_col;
    for (LeafMask m : cols) {
      per_col.push_back(env_.mask_leaves(m));
      if (per_col.back().empty()) return {};
    }
    std::vector<Sig> out;
    std::vector<int> cur(per_col.size(), 0);
    while (true) {
      Sig sig;
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

  // --------------------------------------------------------------------
  // shared formula machinery
  // --------------------------------------------------------------------

  SortId leaf_sort(int leaf) const { return typed() ? leaf_sorts_[leaf] : univ_; }

  FormulaPtr mask_guard(const TermPtr& t, LeafMask mask) const {
    std::vector<FormulaPtr> lits;
    for (int l : env_.mask_leaves(mask))
      lits.push_back(tfol::Formula::mk_pred(is_decls_[l], {t}));
    return tfol::Formula::mk_or(std::move(lits));
  }

  FormulaPtr eq_terms(const TermPtr& a, const TermPtr& b) const {
    if (typed() && tfol::term_sort(a, theory_) != tfol::term_sort(b, theory_))
      return tfol::Formula::mk_false();  // distinct leaf types denote disjoint sets
    return tfol::Formula::mk_eq(a, b);
  }

  FormulaPtr tuple_eq(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) const {
    std::vector<FormulaPtr> kids;
    for (size_t i = 0; i < a.size(); ++i) {
      FormulaPtr e = eq_terms(a[i], b[i]);
      if (e->kind == tfol::Formula::Kind::False) return tfol::Formula::mk_false();
      kids.push_back(std::move(e));
    }
    return tfol::Formula::mk_and(std::move(kids));
  }

  Sig rep_key(const Sig& sig) const { return typed() ? sig : Sig{}; }

  FormulaPtr mem(const ExprVal& v, const Sig& sig, const std::vector<TermPtr>& args) const {
    auto it = v.reps.find(rep_key(sig));
    if (it == v.reps.end()) return tfol::Formula::mk_false();
    const MemberRep& r = it->second;
    switch (r.kind) {
      case MemberRep::Kind::True:
        return tfol::Formula::mk_true();
      case MemberRep::Kind::EqTuple:
        return tuple_eq(args, r.tuple);
      case MemberRep::Kind::Pred: {
        std::vector<TermPtr> all = r.lifted;
        all.insert(all.end(), args.begin(), args.end());
        return tfol::Formula::mk_pred(r.decl, std::move(all));
      }
      case MemberRep::Kind::FuncGraph: {
        std::vector<TermPtr> dom(args.begin(), args.end() - 1);
        return tfol::Formula::mk_eq(tfol::Term::app(r.decl, std::move(dom)), args.back());
      }
    }
    return tfol::Formula::mk_false();
  }

  ExprVal as_set(ExprVal v) const {
    if (!v.is_tuple) return v;
    ExprVal out;
    out.cols = v.cols;
    MemberRep rep;
    rep.kind = MemberRep::Kind::EqTuple;
    rep.tuple = v.terms;
    out.reps[typed() ? Sig(v.term_leaves) : Sig{}] = std::move(rep);
    return out;
  }

  std::vector<const VarBinding*> lifted_for(const RelExprPtr& node) const {
    std::set<std::string> names;
    collect_expr_vars(node, names);
    std::vector<const VarBinding*> out;
    for (const auto& b : ctx_)
      if (names.count(b.source_name)) out.push_back(&b);
    return out;
  }

  // Declares a helper relation for one signature of a compound expression and
  // asserts its defining axiom. The axiom closes over the enclosing quantified
  // variables that occur in the expression.
  MemberRep make_helper(const std::vector<const VarBinding*>& lifted, const Sig& sig,
                        const std::vector<LeafMask>& col_masks,
                        const std::function<FormulaPtr(const std::vector<TermPtr>&)>& body) {
    std::string name = "_h" + std::to_string(helper_count_);
    std::vector<SortId> decl_args;
    std::vector<TermPtr> lifted_terms;
    std::vector<std::pair<std::string, SortId>> qvars;
    for (const VarBinding* b : lifted) {
      SortId s = b->term->var_sort;
      decl_args.push_back(s);
      lifted_terms.push_back(b->term);
      qvars.emplace_back(b->term->var_name, s);
    }
    size_t width = typed() ? sig.size() : col_masks.size();
    std::vector<TermPtr> tuple_terms;
    std::vector<FormulaPtr> guards;
    for (size_t i = 0; i < width; ++i) {
      SortId s = typed() ? leaf_sorts_[sig[i]] : univ_;
      std::string vn = "_x" + std::to_string(i);
      TermPtr v = tfol::Term::var(vn, s);
      decl_args.push_back(s);
      qvars.emplace_back(vn, s);
      tuple_terms.push_back(v);
      if (!typed()) guards.push_back(mask_guard(v, col_masks[i]));
    }
    int idx = theory_.add_decl(tfol::FuncDecl{name, decl_args, tfol::kBool});
    ++helper_count_;
    std::vector<TermPtr> head_args = lifted_terms;
    head_args.insert(head_args.end(), tuple_terms.begin(), tuple_terms.end());
    FormulaPtr inner = tfol::Formula::mk_iff(
        tfol::Formula::mk_pred(idx, std::move(head_args)), body(tuple_terms));
    if (!typed())
      inner = tfol::Formula::mk_implies(tfol::Formula::mk_and(std::move(guards)),
                                        std::move(inner));
    theory_.add_assert(
        tfol::Formula::mk_quant(tfol::Formula::Kind::Forall, std::move(qvars), std::move(inner)));
    MemberRep rep;
    rep.kind = MemberRep::Kind::Pred;
    rep.decl = idx;
    rep.lifted = std::move(lifted_terms);
    return rep;
  }

  // --------------------------------------------------------------------
  // Step 3: expressions
  // --------------------------------------------------------------------

  std::vector<LeafMask> cols_of(const RelExprPtr& e) const {
    std::map<std::string, LeafMask> var_masks;
    for (const auto& b : ctx_) var_masks[b.source_name] = b.mask;
    return expr_columns(e, env_, var_masks);
  }

  ExprVal tx_expr(const RelExprPtr& e) {
    using K = RelExpr::Kind;
    switch (e->kind) {
      case K::VarRef: {
        for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it) {
          if (it->source_name == e->name) {
            ExprVal v;
            v.is_tuple = true;
            v.terms = {it->term};
            v.term_leaves = {it->leaf};
            v.cols = {it->mask};
            return v;
          }
        }
        throw std::logic_error("unbound variable '" + e->name + "'");
      }
      case K::RelRef:
        return tx_relref(e->name);
      case K::Union:
      case K::Inter:
      case K::Diff:
        return tx_setop(e);
      case K::Transpose:
        return tx_transpose(e);
      case K::Join:
        return tx_join(e);
      case K::Product:
        return tx_product(e);
    }
    throw std::logic_error("bad expression kind");
  }

  ExprVal tx_relref(const std::string& name) {
    ExprVal v;
    v.cols = env_.column_types.at(name);
    if (env_.type_relations.count(name)) {
      int leaf = static_cast<int>(env_.leaf_index.at(name));
      if (typed()) {
        MemberRep rep;
        rep.kind = MemberRep::Kind::True;
        v.reps[Sig{leaf}] = rep;
      } else {
        MemberRep rep;
        rep.kind = MemberRep::Kind::Pred;
        rep.decl = is_decls_[leaf];
        v.reps[Sig{}] = rep;
      }
      return v;
    }
    if (typed()) {
      auto fit = func_splits_.find(name);
      if (fit != func_splits_.end()) {
        int range_leaf = env_.mask_leaves(env_.total_functions.at(name).range)[0];
        for (const auto& [dom_sig, decl] : fit->second) {
          Sig sig = dom_sig;
          sig.push_back(range_leaf);
          MemberRep rep;
          rep.kind = MemberRep::Kind::FuncGraph;
          rep.decl = decl;
          v.reps[sig] = rep;
        }
        return v;
      }
      auto pit = pred_splits_.find(name);
      if (pit != pred_splits_.end()) {
        for (const auto& [sig, decl] : pit->second) {
          MemberRep rep;
          rep.kind = MemberRep::Kind::Pred;
          rep.decl = decl;
          v.reps[sig] = rep;
        }
      }
      return v;  // no splits: statically empty bound
    }
    auto fit = func_decl_.find(name);
    MemberRep rep;
    if (fit != func_decl_.end()) {
      rep.kind = MemberRep::Kind::FuncGraph;
      rep.decl = fit->second;
    } else {
      rep.kind = MemberRep::Kind::Pred;
      rep.decl = pred_decl_.at(name);
    }
    v.reps[Sig{}] = rep;
    return v;
  }

  ExprVal tx_setop(const RelExprPtr& e) {
    auto lifted = lifted_for(e);
    ExprVal a = as_set(tx_expr(e->lhs));
    ExprVal b = as_set(tx_expr(e->rhs));
    ExprVal out;
    out.cols = cols_of(e);
    for (LeafMask m : out.cols)
      if (m == 0) return out;  // statically empty

    auto combine = [&](const Sig& sig) {
      const MemberRep* ra = nullptr;
      const MemberRep* rb = nullptr;
      auto ia = a.reps.find(rep_key(sig));
      auto ib = b.reps.find(rep_key(sig));
      if (ia != a.reps.end()) ra = &ia->second;
      if (ib != b.reps.end()) rb = &ib->second;
      bool ta = ra && ra->kind == MemberRep::Kind::True;
      bool tb = rb && rb->kind == MemberRep::Kind::True;
      switch (e->kind) {
        case RelExpr::Kind::Union:
          if (ta || tb) {
            MemberRep rep;
            rep.kind = MemberRep::Kind::True;
            out.reps[rep_key(sig)] = rep;
            return;
          }
          if (!ra && !rb) return;
          if (!ra) { out.reps[rep_key(sig)] = *rb; return; }
          if (!rb) { out.reps[rep_key(sig)] = *ra; return; }
          out.reps[rep_key(sig)] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
            return tfol::Formula::mk_or({mem(a, sig, xs), mem(b, sig, xs)});
          });
          return;
        case RelExpr::Kind::Inter:
          if (!ra || !rb) return;
          if (ta) { out.reps[rep_key(sig)] = *rb; return; }
          if (tb) { out.reps[rep_key(sig)] = *ra; return; }
          out.reps[rep_key(sig)] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
            return tfol::Formula::mk_and({mem(a, sig, xs), mem(b, sig, xs)});
          });
          return;
        case RelExpr::Kind::Diff:
          if (!ra) return;
          if (tb) return;
          if (!rb) { out.reps[rep_key(sig)] = *ra; return; }
          out.reps[rep_key(sig)] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
            return tfol::Formula::mk_and(
                {mem(a, sig, xs), tfol::Formula::mk_not(mem(b, sig, xs))});
          });
          return;
        default:
          throw std::logic_error("not a set operation");
      }
    };

    if (typed())
      for (const Sig& sig : sigs_of(out.cols)) combine(sig);
    else
      combine(Sig{});
    return out;
  }

  ExprVal tx_transpose(const RelExprPtr& e) {
    auto lifted = lifted_for(e);
    ExprVal a = as_set(tx_expr(e->lhs));
    ExprVal out;
    out.cols = {a.cols[1], a.cols[0]};
    for (LeafMask m : out.cols)
      if (m == 0) return out;
    auto flip = [&](const Sig& sig) {
      Sig src = typed() ? Sig{sig[1], sig[0]} : Sig{};
      auto it = a.reps.find(src);
      if (it == a.reps.end()) return;
      if (it->second.kind == MemberRep::Kind::True) {
        out.reps[rep_key(sig)] = it->second;
        return;
      }
      Sig src_sig = typed() ? Sig{sig[1], sig[0]} : Sig{};
      out.reps[rep_key(sig)] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
        return mem(a, src_sig, {xs[1], xs[0]});
      });
    };
    if (typed())
      for (const Sig& sig : sigs_of(out.cols)) flip(sig);
    else
      flip(Sig{});
    return out;
  }

  ExprVal tx_join(const RelExprPtr& e) {
    auto lifted = lifted_for(e);
    ExprVal a = tx_expr(e->lhs);
    ExprVal b = tx_expr(e->rhs);

    // functions option: a scalar joined into a total function is an
    // application
    if (opts_.rels == RelMode::functions && a.is_tuple && a.terms.size() == 1 &&
        e->rhs->kind == RelExpr::Kind::RelRef) {
      const std::string& rname = e->rhs->name;
      if (typed()) {
        auto fit = func_splits_.find(rname);
        if (fit != func_splits_.end() && env_.column_types.at(rname).size() == 2) {
          auto dit = fit->second.find(Sig{a.term_leaves[0]});
          if (dit != fit->second.end()) {
            int range_leaf = env_.mask_leaves(env_.total_functions.at(rname).range)[0];
            ExprVal v;
            v.is_tuple = true;
            v.terms = {tfol::Term::app(dit->second, {a.terms[0]})};
            v.term_leaves = {range_leaf};
            v.cols = {env_.total_functions.at(rname).range};
            return v;
          }
          ExprVal empty;  // scalar outside the function's domain leaves
          empty.cols = {env_.total_functions.at(rname).range};
          return empty;
        }
      } else {
        auto fit = func_decl_.find(rname);
        if (fit != func_decl_.end() && env_.column_types.at(rname).size() == 2) {
          ExprVal v;
          v.is_tuple = true;
          v.terms = {tfol::Term::app(fit->second, {a.terms[0]})};
          v.term_leaves = {-1};
          v.cols = {env_.total_functions.at(rname).range};
          return v;
        }
      }
    }

    ExprVal sa = as_set(std::move(a));
    ExprVal sb = as_set(std::move(b));
    ExprVal out;
    out.cols = cols_of(e);
    LeafMask mid = sa.cols.back() & sb.cols.front();
    for (LeafMask m : out.cols)
      if (m == 0) return out;
    if (mid == 0 || sa.reps.empty() || sb.reps.empty()) return out;

    size_t la = sa.cols.size() - 1;  // columns kept from the left operand
    if (typed()) {
      for (const Sig& sig : sigs_of(out.cols)) {
        Sig sx(sig.begin(), sig.begin() + la);
        Sig sy(sig.begin() + la, sig.end());
        std::vector<int> mids;
        for (int ml : env_.mask_leaves(mid)) {
          Sig ka = sx;
          ka.push_back(ml);
          Sig kb;
          kb.push_back(ml);
          kb.insert(kb.end(), sy.begin(), sy.end());
          if (sa.reps.count(ka) && sb.reps.count(kb)) mids.push_back(ml);
        }
        if (mids.empty()) continue;
        out.reps[sig] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
          std::vector<FormulaPtr> branches;
          for (int ml : mids) {
            TermPtr z = tfol::Term::var("_z", leaf_sorts_[ml]);
            std::vector<TermPtr> xa(xs.begin(), xs.begin() + la);
            xa.push_back(z);
            std::vector<TermPtr> xb{z};
            xb.insert(xb.end(), xs.begin() + la, xs.end());
            Sig ka(sx);
            ka.push_back(ml);
            Sig kb{ml};
            kb.insert(kb.end(), sy.begin(), sy.end());
            branches.push_back(tfol::Formula::mk_quant(
                tfol::Formula::Kind::Exists, {{"_z", leaf_sorts_[ml]}},
                tfol::Formula::mk_and({mem(sa, ka, xa), mem(sb, kb, xb)})));
          }
          return tfol::Formula::mk_or(std::move(branches));
        });
      }
      return out;
    }

    out.reps[Sig{}] = make_helper(lifted, Sig{}, out.cols, [&](const auto& xs) {
      TermPtr z = tfol::Term::var("_z", univ_);
      std::vector<TermPtr> xa(xs.begin(), xs.begin() + la);
      xa.push_back(z);
      std::vector<TermPtr> xb{z};
      xb.insert(xb.end(), xs.begin() + la, xs.end());
      return tfol::Formula::mk_quant(
          tfol::Formula::Kind::Exists, {{"_z", univ_}},
          tfol::Formula::mk_and(
              {mask_guard(z, mid), mem(sa, Sig{}, xa), mem(sb, Sig{}, xb)}));
    });
    return out;
  }

  ExprVal tx_product(const RelExprPtr& e) {
    auto lifted = lifted_for(e);
    ExprVal a = tx_expr(e->lhs);
    ExprVal b = tx_expr(e->rhs);
    if (a.is_tuple && b.is_tuple) {
      ExprVal v;
      v.is_tuple = true;
      v.terms = a.terms;
      v.terms.insert(v.terms.end(), b.terms.begin(), b.terms.end());
      v.term_leaves = a.term_leaves;
      v.term_leaves.insert(v.term_leaves.end(), b.term_leaves.begin(), b.term_leaves.end());
      v.cols = a.cols;
      v.cols.insert(v.cols.end(), b.cols.begin(), b.cols.end());
      return v;
    }
    ExprVal sa = as_set(std::move(a));
    ExprVal sb = as_set(std::move(b));
    ExprVal out;
    out.cols = sa.cols;
    out.cols.insert(out.cols.end(), sb.cols.begin(), sb.cols.end());
    for (LeafMask m : out.cols)
      if (m == 0) return out;
    size_t la = sa.cols.size();
    auto build = [&](const Sig& sig) {
      Sig ka(sig.begin(), sig.begin() + (typed() ? la : 0));
      Sig kb(sig.begin() + (typed() ? la : 0), sig.end());
      auto ia = sa.reps.find(rep_key(ka));
      auto ib = sb.reps.find(rep_key(kb));
      if (ia == sa.reps.end() || ib == sb.reps.end()) return;
      if (ia->second.kind == MemberRep::Kind::True &&
          ib->second.kind == MemberRep::Kind::True) {
        MemberRep rep;
        rep.kind = MemberRep::Kind::True;
        out.reps[rep_key(sig)] = rep;
        return;
      }
      out.reps[rep_key(sig)] = make_helper(lifted, sig, out.cols, [&](const auto& xs) {
        std::vector<TermPtr> xa(xs.begin(), xs.begin() + la);
        std::vector<TermPtr> xb(xs.begin() + la, xs.end());
        return tfol::Formula::mk_and({mem(sa, ka, xa), mem(sb, kb, xb)});
      });
    };
    if (typed())
      for (const Sig& sig : sigs_of(out.cols)) build(sig);
    else
      build(Sig{});
    return out;
  }

  // --------------------------------------------------------------------
  // Step 3: formulas
  // --------------------------------------------------------------------

  FormulaPtr tx_formula(const RelFormulaPtr& f) {
    using K = RelFormula::Kind;
    switch (f->kind) {
      case K::True:
        return tfol::Formula::mk_true();
      case K::False:
        return tfol::Formula::mk_false();
      case K::Not:
        return tfol::Formula::mk_not(tx_formula(f->kids[0]));
      case K::And:
      case K::Or: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->kids) kids.push_back(tx_formula(k));
        return f->kind == K::And ? tfol::Formula::mk_and(std::move(kids))
                                 : tfol::Formula::mk_or(std::move(kids));
      }
      case K::Implies:
        return tfol::Formula::mk_implies(tx_formula(f->kids[0]), tx_formula(f->kids[1]));
      case K::Iff:
        return tfol::Formula::mk_iff(tx_formula(f->kids[0]), tx_formula(f->kids[1]));
      case K::Equal:
        return tx_equal(f);
      case K::Subset:
      case K::In:
        return tx_subset(f);
      case K::Forall:
      case K::Exists:
        return tx_quant(f, 0);
      case K::Mult:
        return tx_mult(f);
    }
    throw std::logic_error("bad formula kind");
  }

  FormulaPtr tx_equal(const RelFormulaPtr& f) {
    ExprVal a = tx_expr(f->e1);
    ExprVal b = tx_expr(f->e2);
    if (a.is_tuple && b.is_tuple) return tuple_eq(a.terms, b.terms);
    ExprVal sa = as_set(std::move(a));
    ExprVal sb = as_set(std::move(b));
    std::set<Sig> sigs;
    for (const auto& [sig, rep] : sa.reps) sigs.insert(sig);
    for (const auto& [sig, rep] : sb.reps) sigs.insert(sig);
    std::vector<FormulaPtr> parts;
    for (const Sig& sig : sigs) {
      parts.push_back(quantified_cmp(sa, sb, sig, /*iff=*/true));
    }
    return tfol::Formula::mk_and(std::move(parts));
  }

  FormulaPtr tx_subset(const RelFormulaPtr& f) {
    ExprVal a = tx_expr(f->e1);
    ExprVal b = tx_expr(f->e2);
    if (a.is_tuple) {
      ExprVal sb = as_set(std::move(b));
      return mem(sb, typed() ? Sig(a.term_leaves) : Sig{}, a.terms);
    }
    ExprVal sb = as_set(std::move(b));
    std::vector<FormulaPtr> parts;
    for (const auto& [sig, rep] : a.reps)
      parts.push_back(quantified_cmp(a, sb, sig, /*iff=*/false, /*union_guard=*/false));
    return tfol::Formula::mk_and(std::move(parts));
  }

  // ∀x̄ at the signature: lhs ⇔/⇒ rhs, guarded per column in untyped mode.
  // Subset quantifies over the left operand's column types, equality over the
  // union of both sides'.
  FormulaPtr quantified_cmp(const ExprVal& a, const ExprVal& b, const Sig& sig, bool iff,
                            bool union_guard = true) {
    std::vector<std::pair<std::string, SortId>> qvars;
    std::vector<TermPtr> xs;
    std::vector<FormulaPtr> guards;
    size_t width = typed() ? sig.size() : a.cols.size();
    for (size_t i = 0; i < width; ++i) {
      SortId s = typed() ? leaf_sorts_[sig[i]] : univ_;
      std::string vn = "_x" + std::to_string(i);
      TermPtr v = tfol::Term::var(vn, s);
      qvars.emplace_back(vn, s);
      xs.push_back(v);
      if (!typed()) {
        LeafMask m = a.cols[i];
        if (union_guard && i < b.cols.size()) m |= b.cols[i];
        guards.push_back(mask_guard(v, m));
      }
    }
    FormulaPtr la = mem(a, sig, xs);
    FormulaPtr lb = mem(b, sig, xs);
    FormulaPtr body = iff ? tfol::Formula::mk_iff(std::move(la), std::move(lb))
                          : tfol::Formula::mk_implies(std::move(la), std::move(lb));
    if (!typed())
      body = tfol::Formula::mk_implies(tfol::Formula::mk_and(std::move(guards)),
                                       std::move(body));
    return tfol::Formula::mk_quant(tfol::Formula::Kind::Forall, std::move(qvars),
                                   std::move(body));
  }

  std::string ctx_var_name(const std::string& source) const {
    std::string name = tfol::mangle(source);
    auto taken = [&](const std::string& n) {
      for (const auto& b : ctx_)
        if (b.term->var_name == n) return true;
      return false;
    };
    while (taken(name)) name += "_";
    return name;
  }

  FormulaPtr tx_quant(const RelFormulaPtr& q, size_t i) {
    if (i == q->decls.size()) return tx_formula(q->body);
    bool is_all = q->kind == RelFormula::Kind::Forall;
    auto quant_kind = is_all ? tfol::Formula::Kind::Forall : tfol::Formula::Kind::Exists;
    const auto& [vname, bound] = q->decls[i];
    std::string tname = ctx_var_name(vname);

    if (typed()) {
      auto pure = type_union_mask(bound, env_);
      std::vector<int> leaves;
      ExprVal bval;
      if (pure) {
        leaves = env_.mask_leaves(*pure);
      } else {
        bval = tx_expr(bound);
        for (const auto& [sig, rep] : bval.reps) leaves.push_back(sig[0]);
      }
      std::vector<FormulaPtr> branches;
      for (int leaf : leaves) {
        TermPtr v = tfol::Term::var(tname, leaf_sorts_[leaf]);
        ctx_.push_back(VarBinding{vname, v, LeafMask{1} << leaf, leaf});
        FormulaPtr inner = tx_quant(q, i + 1);
        ctx_.pop_back();
        if (!pure) {
          FormulaPtr g = mem(bval, Sig{leaf}, {v});
          bool guard_true = g->kind == tfol::Formula::Kind::True;
          if (!guard_true)
            inner = is_all ? tfol::Formula::mk_implies(std::move(g), std::move(inner))
                           : tfol::Formula::mk_and({std::move(g), std::move(inner)});
        }
        branches.push_back(tfol::Formula::mk_quant(
            quant_kind, {{tname, leaf_sorts_[leaf]}}, std::move(inner)));
      }
      return is_all ? tfol::Formula::mk_and(std::move(branches))
                    : tfol::Formula::mk_or(std::move(branches));
    }

    // untyped: one Univ quantifier with a type guard
    LeafMask mask = cols_of(bound)[0];
    TermPtr v = tfol::Term::var(tname, univ_);
    FormulaPtr guard;
    auto pure = type_union_mask(bound, env_);
    if (pure) {
      guard = mask_guard(v, *pure);
    } else {
      ExprVal bval = tx_expr(bound);
      guard = mem(bval, Sig{}, {v});
    }
    ctx_.push_back(VarBinding{vname, v, mask, -1});
    FormulaPtr inner = tx_quant(q, i + 1);
    ctx_.pop_back();
    FormulaPtr body = is_all
                          ? tfol::Formula::mk_implies(std::move(guard), std::move(inner))
                          : tfol::Formula::mk_and({std::move(guard), std::move(inner)});
    return tfol::Formula::mk_quant(quant_kind, {{tname, univ_}}, std::move(body));
  }

  FormulaPtr tx_mult(const RelFormulaPtr& f) {
    ExprVal v = tx_expr(f->e1);
    if (v.is_tuple) {
      // a tuple of scalars is a singleton set
      switch (f->mult) {
        case MultKind::one:
        case MultKind::lone:
        case MultKind::some:
          return tfol::Formula::mk_true();
        case MultKind::no:
          return tfol::Formula::mk_false();
      }
    }
    std::vector<Sig> sigs;
    for (const auto& [sig, rep] : v.reps) sigs.push_back(sig);
    size_t width = v.cols.size();

    auto tuple_vars = [&](const Sig& sig, const std::string& stem)
        -> std::pair<std::vector<std::pair<std::string, SortId>>, std::vector<TermPtr>> {
      std::vector<std::pair<std::string, SortId>> qv;
      std::vector<TermPtr> ts;
      for (size_t i = 0; i < width; ++i) {
        SortId s = typed() ? leaf_sorts_[sig[i]] : univ_;
        std::string vn = stem + std::to_string(i);
        qv.emplace_back(vn, s);
        ts.push_back(tfol::Term::var(vn, s));
      }
      return {qv, ts};
    };
    auto col_guard = [&](const std::vector<TermPtr>& ts) {
      std::vector<FormulaPtr> gs;
      for (size_t i = 0; i < width; ++i) gs.push_back(mask_guard(ts[i], v.cols[i]));
      return tfol::Formula::mk_and(std::move(gs));
    };

    auto exists_part = [&]() {
      std::vector<FormulaPtr> branches;
      for (const Sig& sig : sigs) {
        auto [qv, ts] = tuple_vars(sig, "_x");
        FormulaPtr body = mem(v, sig, ts);
        if (!typed()) body = tfol::Formula::mk_and({col_guard(ts), std::move(body)});
        branches.push_back(
            tfol::Formula::mk_quant(tfol::Formula::Kind::Exists, qv, std::move(body)));
      }
      return tfol::Formula::mk_or(std::move(branches));
    };

    auto unique_part = [&]() {
      std::vector<FormulaPtr> parts;
      for (size_t i = 0; i < sigs.size(); ++i) {
        for (size_t j = i; j < sigs.size(); ++j) {
          auto [qx, tx] = tuple_vars(sigs[i], "_x");
          auto [qy, ty] = tuple_vars(sigs[j], "_y");
          std::vector<std::pair<std::string, SortId>> qv = qx;
          qv.insert(qv.end(), qy.begin(), qy.end());
          FormulaPtr both = tfol::Formula::mk_and({mem(v, sigs[i], tx), mem(v, sigs[j], ty)});
          FormulaPtr body =
              tfol::Formula::mk_implies(std::move(both), tuple_eq(tx, ty));
          if (!typed())
            body = tfol::Formula::mk_implies(
                tfol::Formula::mk_and({col_guard(tx), col_guard(ty)}), std::move(body));
          parts.push_back(
              tfol::Formula::mk_quant(tfol::Formula::Kind::Forall, qv, std::move(body)));
        }
      }
      return tfol::Formula::mk_and(std::move(parts));
    };

    switch (f->mult) {
      case MultKind::one:
        return tfol::Formula::mk_and({exists_part(), unique_part()});
      case MultKind::lone:
        return unique_part();
      case MultKind::some:
        return exists_part();
      case MultKind::no: {
        std::vector<FormulaPtr> parts;
        for (const Sig& sig : sigs) {
          auto [qv, ts] = tuple_vars(sig, "_x");
          FormulaPtr body = tfol::Formula::mk_not(mem(v, sig, ts));
          if (!typed()) body = tfol::Formula::mk_implies(col_guard(ts), std::move(body));
          parts.push_back(
              tfol::Formula::mk_quant(tfol::Formula::Kind::Forall, qv, std::move(body)));
        }
        return tfol::Formula::mk_and(std::move(parts));
      }
    }
    throw std::logic_error("bad multiplicity kind");
  }

  const RelModel& m_;
  Options opts_;
  TypeEnv env_;
  tfol::Theory theory_;
  int helper_count_ = 0;
  std::map<std::string, std::vector<std::string>> split_map_;
  std::set<int> consumed_;

  std::vector<SortId> leaf_sorts_;  // typed
  SortId univ_ = -2;                // untyped
  std::vector<int> is_decls_;       // untyped, per leaf
  std::set<std::string> reserved_source_names_;
  std::map<std::string, std::map<Sig, int>> pred_splits_;  // typed
  std::map<std::string, std::map<Sig, int>> func_splits_;  // typed
  std::map<std::string, int> pred_decl_;                   // untyped
  std::map<std::string, int> func_decl_;                   // untyped
  std::vector<VarBinding> ctx_;
};

}  // namespace

TransResult translate(const RelModel& m, const Options& opts) {
  Translator t(m, opts);
  return t.run();
}

}  // namespace relog
