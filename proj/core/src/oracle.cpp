#include "relog/oracle.hpp"

#include <algorithm>
#include <set>

namespace relog {

namespace {

enum class TV : uint8_t { F = 0, T = 1, U = 2 };

TV tv_not(TV a) { return a == TV::U ? TV::U : (a == TV::T ? TV::F : TV::T); }

TV tv_and(TV a, TV b) {
  if (a == TV::F || b == TV::F) return TV::F;
  if (a == TV::U || b == TV::U) return TV::U;
  return TV::T;
}

TV tv_or(TV a, TV b) { return tv_not(tv_and(tv_not(a), tv_not(b))); }

// sparse relation value: tuples that are definitely or possibly present
using SparseRel = std::map<OracleTuple, TV>;

struct RelState {
  const RelDecl* decl = nullptr;
  std::vector<OracleTuple> tuples;  // bound order
  std::vector<TV> tv;
  bool pinned = false;
};

class Oracle {
 public:
  Oracle(const RelModel& m, uint64_t budget) : m_(m), budget_(budget) {
    for (size_t i = 0; i < m.universe.size(); ++i)
      atom_index_[m.universe[i]] = static_cast<int>(i);
    for (const auto& r : m.relations) {
      RelState st;
      st.decl = &r;
      for (const auto& tup : r.upper_bound) {
        OracleTuple t;
        for (const auto& a : tup) t.push_back(atom_index_.at(a));
        st.tuples.push_back(std::move(t));
      }
      st.pinned = pinned_type_relation(r);
      st.tv.assign(st.tuples.size(), st.pinned ? TV::T : TV::U);
      rels_.push_back(std::move(st));
      rel_index_[r.name] = static_cast<int>(rels_.size()) - 1;
    }
    for (size_t ri = 0; ri < rels_.size(); ++ri)
      for (size_t ti = 0; ti < rels_[ri].tuples.size(); ++ti)
        if (!rels_[ri].pinned) order_.emplace_back(ri, ti);
  }

  OracleResult solve() {
    OracleResult res;
    if (search(0)) {
      res.sat = true;
      res.witness = current_witness();
    }
    return res;
  }

  bool check(const Interpretation& interp) {
    for (const auto& [name, tuples] : interp.tuples)
      if (!rel_index_.count(name)) return false;
    for (auto& st : rels_) {
      std::set<OracleTuple> given;
      auto it = interp.tuples.find(st.decl->name);
      if (it != interp.tuples.end()) given.insert(it->second.begin(), it->second.end());
      std::set<OracleTuple> bound(st.tuples.begin(), st.tuples.end());
      for (const auto& t : given)
        if (!bound.count(t)) return false;  // outside the upper bound
      for (size_t ti = 0; ti < st.tuples.size(); ++ti)
        st.tv[ti] = given.count(st.tuples[ti]) ? TV::T : TV::F;
      if (st.pinned)
        for (TV v : st.tv)
          if (v != TV::T) return false;
    }
    std::map<std::string, int> binds;
    return eval_formula(m_.formula, binds) == TV::T;
  }

 private:
  bool pinned_type_relation(const RelDecl& r) const {
    if (r.arity != 1 || !m_.is_exact(r.name)) return false;
    std::set<Atom> bound;
    for (const auto& t : r.upper_bound) bound.insert(t[0]);
    std::set<Atom> prefix_atoms;
    for (const auto& a : m_.universe)
      if (a.prefix == r.name) prefix_atoms.insert(a);
    return !prefix_atoms.empty() && bound == prefix_atoms;
  }

  bool search(size_t depth) {
    if (++nodes_ > budget_)
      throw OracleBudgetError("oracle exceeded its search budget (" +
                              std::to_string(budget_) + " nodes)");
    std::map<std::string, int> binds;
    TV v = eval_formula(m_.formula, binds);
    if (v == TV::T) return true;  // open tuples default to excluded
    if (v == TV::F) return false;
    if (depth == order_.size()) return false;  // fully assigned yet undecided: unreachable
    auto [ri, ti] = order_[depth];
    rels_[ri].tv[ti] = TV::F;
    if (search(depth + 1)) return true;
    rels_[ri].tv[ti] = TV::T;
    if (search(depth + 1)) return true;
    rels_[ri].tv[ti] = TV::U;
    return false;
  }

  Interpretation current_witness() const {
    Interpretation w;
    for (const auto& st : rels_) {
      std::vector<OracleTuple> ts;
      for (size_t i = 0; i < st.tuples.size(); ++i)
        if (st.tv[i] == TV::T) ts.push_back(st.tuples[i]);
      w.tuples[st.decl->name] = std::move(ts);
    }
    return w;
  }

  // ---- relational evaluation ----

  SparseRel eval_expr(const RelExprPtr& e, const std::map<std::string, int>& binds) {
    using K = RelExpr::Kind;
    switch (e->kind) {
      case K::RelRef: {
        const RelState& st = rels_[rel_index_.at(e->name)];
        SparseRel out;
        for (size_t i = 0; i < st.tuples.size(); ++i)
          if (st.tv[i] != TV::F) out[st.tuples[i]] = st.tv[i];
        return out;
      }
      case K::VarRef: {
        SparseRel out;
        out[OracleTuple{binds.at(e->name)}] = TV::T;
        return out;
      }
      case K::Union: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel b = eval_expr(e->rhs, binds);
        for (const auto& [t, v] : b) {
          auto it = a.find(t);
          if (it == a.end())
            a[t] = v;
          else if (v == TV::T)
            it->second = TV::T;
        }
        return a;
      }
      case K::Inter: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel b = eval_expr(e->rhs, binds);
        SparseRel out;
        for (const auto& [t, v] : a) {
          auto it = b.find(t);
          if (it != b.end()) out[t] = tv_and(v, it->second);
        }
        return out;
      }
      case K::Diff: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel b = eval_expr(e->rhs, binds);
        SparseRel out;
        for (const auto& [t, v] : a) {
          auto it = b.find(t);
          TV bv = it == b.end() ? TV::F : it->second;
          if (bv == TV::T) continue;
          out[t] = bv == TV::F ? v : TV::U;
        }
        return out;
      }
      case K::Transpose: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel out;
        for (const auto& [t, v] : a) out[OracleTuple{t[1], t[0]}] = v;
        return out;
      }
      case K::Join: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel b = eval_expr(e->rhs, binds);
        std::map<int, std::vector<const std::pair<const OracleTuple, TV>*>> by_first;
        for (const auto& kv : b) by_first[kv.first[0]].push_back(&kv);
        SparseRel out;
        for (const auto& [ta, va] : a) {
          auto it = by_first.find(ta.back());
          if (it == by_first.end()) continue;
          for (const auto* kv : it->second) {
            OracleTuple t(ta.begin(), ta.end() - 1);
            t.insert(t.end(), kv->first.begin() + 1, kv->first.end());
            TV v = tv_and(va, kv->second);
            auto [pos, inserted] = out.emplace(std::move(t), v);
            if (!inserted && v == TV::T) pos->second = TV::T;
          }
        }
        return out;
      }
      case K::Product: {
        SparseRel a = eval_expr(e->lhs, binds);
        SparseRel b = eval_expr(e->rhs, binds);
        SparseRel out;
        for (const auto& [ta, va] : a)
          for (const auto& [tb, vb] : b) {
            OracleTuple t = ta;
            t.insert(t.end(), tb.begin(), tb.end());
            out[std::move(t)] = tv_and(va, vb);
          }
        return out;
      }
    }
    throw std::logic_error("bad expression kind");
  }

  TV eval_formula(const RelFormulaPtr& f, std::map<std::string, int>& binds) {
    using K = RelFormula::Kind;
    switch (f->kind) {
      case K::True: return TV::T;
      case K::False: return TV::F;
      case K::Not: return tv_not(eval_formula(f->kids[0], binds));
      case K::And: {
        TV acc = TV::T;
        for (const auto& k : f->kids) {
          acc = tv_and(acc, eval_formula(k, binds));
          if (acc == TV::F) return TV::F;
        }
        return acc;
      }
      case K::Or: {
        TV acc = TV::F;
        for (const auto& k : f->kids) {
          acc = tv_or(acc, eval_formula(k, binds));
          if (acc == TV::T) return TV::T;
        }
        return acc;
      }
      case K::Implies:
        return tv_or(tv_not(eval_formula(f->kids[0], binds)),
                     eval_formula(f->kids[1], binds));
      case K::Iff: {
        TV a = eval_formula(f->kids[0], binds);
        TV b = eval_formula(f->kids[1], binds);
        if (a == TV::U || b == TV::U) return TV::U;
        return a == b ? TV::T : TV::F;
      }
      case K::Equal: {
        SparseRel a = eval_expr(f->e1, binds);
        SparseRel b = eval_expr(f->e2, binds);
        TV acc = TV::T;
        for (const auto& [t, va] : a) {
          auto it = b.find(t);
          TV vb = it == b.end() ? TV::F : it->second;
          if (va == TV::T && vb == TV::F) return TV::F;
          if (va == TV::F && vb == TV::T) return TV::F;
          if (va == TV::U || vb == TV::U) acc = TV::U;
        }
        for (const auto& [t, vb] : b) {
          if (a.count(t)) continue;
          if (vb == TV::T) return TV::F;
          if (vb == TV::U) acc = TV::U;
        }
        return acc;
      }
      case K::Subset:
      case K::In: {
        SparseRel a = eval_expr(f->e1, binds);
        SparseRel b = eval_expr(f->e2, binds);
        TV acc = TV::T;
        for (const auto& [t, va] : a) {
          auto it = b.find(t);
          TV vb = it == b.end() ? TV::F : it->second;
          if (va == TV::T && vb == TV::F) return TV::F;
          if (va == TV::U || (va == TV::T && vb == TV::U)) acc = tv_and(acc, TV::U);
        }
        return acc;
      }
      case K::Forall:
      case K::Exists:
        return eval_quant(f, 0, binds);
      case K::Mult: {
        SparseRel s = eval_expr(f->e1, binds);
        size_t nT = 0, nU = 0;
        for (const auto& [t, v] : s) (v == TV::T ? nT : nU) += 1;
        switch (f->mult) {
          case MultKind::one:
            if (nT >= 2 || nT + nU == 0) return TV::F;
            if (nT == 1 && nU == 0) return TV::T;
            return TV::U;
          case MultKind::lone:
            if (nT >= 2) return TV::F;
            if (nT + nU <= 1) return TV::T;
            return TV::U;
          case MultKind::some:
            if (nT >= 1) return TV::T;
            return nU == 0 ? TV::F : TV::U;
          case MultKind::no:
            if (nT >= 1) return TV::F;
            return nU == 0 ? TV::T : TV::U;
        }
        return TV::U;
      }
    }
    throw std::logic_error("bad formula kind");
  }

  TV eval_quant(const RelFormulaPtr& f, size_t idx, std::map<std::string, int>& binds) {
    bool is_all = f->kind == RelFormula::Kind::Forall;
    if (idx == f->decls.size()) return eval_formula(f->body, binds);
    const auto& [var, bound] = f->decls[idx];
    SparseRel s = eval_expr(bound, binds);
    TV acc = is_all ? TV::T : TV::F;
    for (const auto& [t, mv] : s) {
      binds[var] = t[0];
      TV body = eval_quant(f, idx + 1, binds);
      binds.erase(var);
      TV contrib = is_all ? tv_or(tv_not(mv), body) : tv_and(mv, body);
      acc = is_all ? tv_and(acc, contrib) : tv_or(acc, contrib);
      if (is_all && acc == TV::F) return TV::F;
      if (!is_all && acc == TV::T) return TV::T;
    }
    return acc;
  }

  const RelModel& m_;
  uint64_t budget_;
  uint64_t nodes_ = 0;
  std::map<Atom, int> atom_index_;
  std::vector<RelState> rels_;
  std::map<std::string, int> rel_index_;
  std::vector<std::pair<size_t, size_t>> order_;
};

}  // namespace

OracleResult brute_force_solve(const RelModel& m, uint64_t node_budget) {
  return Oracle(m, node_budget).solve();
}

bool eval_interpretation(const RelModel& m, const Interpretation& interp) {
  Oracle o(m, 1);
  return o.check(interp);
}

}  // namespace relog
