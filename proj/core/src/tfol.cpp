#include "relog/tfol.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relog::tfol {

TermPtr Term::var(std::string name, SortId sort) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->var_name = std::move(name);
  t->var_sort = sort;
  return t;
}

TermPtr Term::app(int decl, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::App;
  t->decl = decl;
  t->args = std::move(args);
  return t;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == Term::Kind::Var)
    return a->var_name == b->var_name && a->var_sort == b->var_sort;
  if (a->decl != b->decl || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

FormulaPtr Formula::mk_true() {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::True;
  return f;
}

FormulaPtr Formula::mk_false() {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::False;
  return f;
}

FormulaPtr Formula::mk_not(FormulaPtr g) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Not;
  f->kids.push_back(std::move(g));
  return f;
}

FormulaPtr Formula::mk_and(std::vector<FormulaPtr> fs) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::And;
  f->kids = std::move(fs);
  return f;
}

FormulaPtr Formula::mk_or(std::vector<FormulaPtr> fs) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Or;
  f->kids = std::move(fs);
  return f;
}

FormulaPtr Formula::mk_implies(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Implies;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr Formula::mk_iff(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Iff;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr Formula::mk_eq(TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Eq;
  f->t1 = std::move(a);
  f->t2 = std::move(b);
  return f;
}

FormulaPtr Formula::mk_pred(int decl, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::PredApp;
  f->decl = decl;
  f->args = std::move(args);
  return f;
}

FormulaPtr Formula::mk_quant(Kind k, std::vector<std::pair<std::string, SortId>> vars,
                             FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->vars = std::move(vars);
  f->body = std::move(body);
  return f;
}

FormulaPtr Formula::mk_distinct(std::vector<TermPtr> terms) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Distinct;
  f->terms = std::move(terms);
  return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->decl != b->decl || a->vars != b->vars) return false;
  if (a->kids.size() != b->kids.size() || a->args.size() != b->args.size() ||
      a->terms.size() != b->terms.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  for (size_t i = 0; i < a->terms.size(); ++i)
    if (!term_equal(a->terms[i], b->terms[i])) return false;
  return term_equal(a->t1, b->t1) && term_equal(a->t2, b->t2) &&
         formula_equal(a->body, b->body);
}

SortId Theory::add_sort(const std::string& name) {
  for (size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == name) throw std::logic_error("duplicate sort '" + name + "'");
  sorts.push_back(name);
  return static_cast<SortId>(sorts.size() - 1);
}

SortId Theory::find_sort(const std::string& name) const {
  for (size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == name) return static_cast<SortId>(i);
  return -2;
}

int Theory::add_decl(FuncDecl d) {
  if (find_decl(d.name) >= 0)
    throw std::logic_error("duplicate declaration '" + d.name + "'");
  decls.push_back(std::move(d));
  int idx = static_cast<int>(decls.size() - 1);
  items.push_back(Item{true, idx, nullptr});
  return idx;
}

int Theory::find_decl(const std::string& name) const {
  for (size_t i = 0; i < decls.size(); ++i)
    if (decls[i].name == name) return static_cast<int>(i);
  return -1;
}

void Theory::add_assert(FormulaPtr f) { items.push_back(Item{false, -1, std::move(f)}); }

std::vector<FormulaPtr> Theory::assertions() const {
  std::vector<FormulaPtr> out;
  for (const auto& it : items)
    if (!it.is_decl) out.push_back(it.assertion);
  return out;
}

const std::string& Theory::sort_name(SortId s) const {
  static const std::string bool_name = "Bool";
  if (s == kBool) return bool_name;
  return sorts.at(s);
}

SortId term_sort(const TermPtr& t, const Theory& th) {
  if (t->kind == Term::Kind::Var) return t->var_sort;
  return th.decls.at(t->decl).result;
}

// ---------------------------------------------------------------------------
// Name handling
// ---------------------------------------------------------------------------

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      // SMT-LIB reserved words that are lexable as plain identifiers
      "BINARY", "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING",
      "as", "let", "exists", "forall", "match", "par",
      // Core theory symbols and predefined sorts
      "Bool", "true", "false", "not", "and", "or", "xor", "distinct", "ite",
      // command heads, to be safe with strict front ends
      "assert", "check-sat", "declare-const", "declare-fun", "declare-sort",
      "define-fun", "define-sort", "exit", "get-model", "set-info", "set-logic",
  };
  return words;
}

bool plain_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Simple symbols per SMT-LIB2: letters, digits and ~ ! @ $ % ^ & * _ - + = < > . ? /
bool simple_symbol(const std::string& s) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos)
      return false;
  return !reserved_words().count(s);
}

void print_symbol(const std::string& s, std::ostream& os) {
  if (simple_symbol(s)) {
    os << s;
    return;
  }
  if (s.find('|') != std::string::npos || s.find('\\') != std::string::npos)
    throw std::logic_error("symbol not representable in SMT-LIB: " + s);
  os << "|" << s << "|";
}

void print_sort(SortId s, const Theory& th, std::ostream& os) {
  if (s == kBool) {
    os << "Bool";
    return;
  }
  print_symbol(th.sort_name(s), os);
}

}  // namespace

std::string mangle(const std::string& source_name) {
  if (plain_identifier(source_name))
    return reserved_words().count(source_name) ? source_name + "_" : source_name;
  std::string out;
  for (char c : source_name) {
    bool legal = std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    if (legal && !(out.empty() && std::isdigit(static_cast<unsigned char>(c)))) {
      out.push_back(c);
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "_u%02x_", static_cast<unsigned char>(c));
      out += buf;
    }
  }
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "n" + out;
  return out;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

void print_term(const TermPtr& t, const Theory& th, std::ostream& os) {
  if (t->kind == Term::Kind::Var) {
    print_symbol(t->var_name, os);
    return;
  }
  const FuncDecl& d = th.decls.at(t->decl);
  if (t->args.empty()) {
    print_symbol(d.name, os);
    return;
  }
  os << "(";
  print_symbol(d.name, os);
  for (const auto& a : t->args) {
    os << " ";
    print_term(a, th, os);
  }
  os << ")";
}

void print_formula(const FormulaPtr& f, const Theory& th, std::ostream& os) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True: os << "true"; return;
    case K::False: os << "false"; return;
    case K::Not:
      os << "(not ";
      print_formula(f->kids[0], th, os);
      os << ")";
      return;
    case K::And:
    case K::Or: {
      if (f->kids.empty()) {
        os << (f->kind == K::And ? "true" : "false");
        return;
      }
      if (f->kids.size() == 1) {
        print_formula(f->kids[0], th, os);
        return;
      }
      os << "(" << (f->kind == K::And ? "and" : "or");
      for (const auto& k : f->kids) {
        os << " ";
        print_formula(k, th, os);
      }
      os << ")";
      return;
    }
    case K::Implies:
      os << "(=> ";
      print_formula(f->kids[0], th, os);
      os << " ";
      print_formula(f->kids[1], th, os);
      os << ")";
      return;
    case K::Iff:
      os << "(= ";
      print_formula(f->kids[0], th, os);
      os << " ";
      print_formula(f->kids[1], th, os);
      os << ")";
      return;
    case K::Eq:
      os << "(= ";
      print_term(f->t1, th, os);
      os << " ";
      print_term(f->t2, th, os);
      os << ")";
      return;
    case K::PredApp: {
      const FuncDecl& d = th.decls.at(f->decl);
      if (f->args.empty()) {
        print_symbol(d.name, os);
        return;
      }
      os << "(";
      print_symbol(d.name, os);
      for (const auto& a : f->args) {
        os << " ";
        print_term(a, th, os);
      }
      os << ")";
      return;
    }
    case K::Forall:
    case K::Exists: {
      os << "(" << (f->kind == K::Forall ? "forall" : "exists") << " (";
      for (size_t i = 0; i < f->vars.size(); ++i) {
        if (i) os << " ";
        os << "(";
        print_symbol(f->vars[i].first, os);
        os << " ";
        print_sort(f->vars[i].second, th, os);
        os << ")";
      }
      os << ") ";
      print_formula(f->body, th, os);
      os << ")";
      return;
    }
    case K::Distinct:
      os << "(distinct";
      for (const auto& t : f->terms) {
        os << " ";
        print_term(t, th, os);
      }
      os << ")";
      return;
  }
}

}  // namespace

std::string emit_smtlib(const Theory& t) {
  std::ostringstream os;
  os << "(set-logic UF)\n";
  for (const auto& s : t.sorts) {
    os << "(declare-sort ";
    print_symbol(s, os);
    os << " 0)\n";
  }
  for (const auto& item : t.items) {
    if (item.is_decl) {
      const FuncDecl& d = t.decls.at(item.decl);
      if (d.args.empty() && d.result != kBool) {
        os << "(declare-const ";
        print_symbol(d.name, os);
        os << " ";
        print_sort(d.result, t, os);
        os << ")\n";
      } else {
        os << "(declare-fun ";
        print_symbol(d.name, os);
        os << " (";
        for (size_t i = 0; i < d.args.size(); ++i) {
          if (i) os << " ";
          print_sort(d.args[i], t, os);
        }
        os << ") ";
        print_sort(d.result, t, os);
        os << ")\n";
      }
    } else {
      os << "(assert ";
      print_formula(item.assertion, t, os);
      os << ")\n";
    }
  }
  os << "(check-sat)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Well-sortedness
// ---------------------------------------------------------------------------

namespace {

class SortChecker {
 public:
  explicit SortChecker(const Theory& th) : th_(th) {}

  std::vector<std::string> run() {
    std::set<std::string> decl_names;
    for (const auto& d : th_.decls)
      if (!decl_names.insert(d.name).second)
        diags_.push_back("duplicate declaration name '" + d.name + "'");
    int idx = 0;
    for (const auto& f : th_.assertions()) {
      path_ = "assertion " + std::to_string(idx++);
      check_formula(f);
    }
    return diags_;
  }

 private:
  void report(const std::string& msg) { diags_.push_back(path_ + ": " + msg); }

  SortId check_term(const TermPtr& t) {
    if (!t) {
      report("null term");
      return kBool;
    }
    if (t->kind == Term::Kind::Var) {
      auto it = bound_.find(t->var_name);
      if (it == bound_.end())
        report("free variable '" + t->var_name + "'");
      else if (it->second != t->var_sort)
        report("variable '" + t->var_name + "' used at a different sort than bound");
      return t->var_sort;
    }
    if (t->decl < 0 || t->decl >= static_cast<int>(th_.decls.size())) {
      report("invalid declaration index");
      return kBool;
    }
    const FuncDecl& d = th_.decls[t->decl];
    if (d.result == kBool) report("predicate '" + d.name + "' used as a term");
    check_application(d, t->args);
    return d.result;
  }

  void check_application(const FuncDecl& d, const std::vector<TermPtr>& args) {
    if (args.size() != d.args.size()) {
      report("'" + d.name + "' takes " + std::to_string(d.args.size()) +
             " arguments, got " + std::to_string(args.size()));
      return;
    }
    for (size_t i = 0; i < args.size(); ++i) {
      SortId got = check_term(args[i]);
      if (got != d.args[i])
        report("argument " + std::to_string(i) + " of '" + d.name + "' has sort " +
               th_.sort_name(got) + ", expected " + th_.sort_name(d.args[i]));
    }
  }

  void check_formula(const FormulaPtr& f) {
    using K = Formula::Kind;
    if (!f) {
      report("null formula");
      return;
    }
    switch (f->kind) {
      case K::True:
      case K::False:
        return;
      case K::Not:
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff:
        for (const auto& k : f->kids) check_formula(k);
        return;
      case K::Eq: {
        SortId a = check_term(f->t1);
        SortId b = check_term(f->t2);
        if (a != b)
          report("equality between sorts " + th_.sort_name(a) + " and " + th_.sort_name(b));
        return;
      }
      case K::PredApp: {
        if (f->decl < 0 || f->decl >= static_cast<int>(th_.decls.size())) {
          report("invalid declaration index");
          return;
        }
        const FuncDecl& d = th_.decls[f->decl];
        if (d.result != kBool) report("function '" + d.name + "' used as a predicate");
        check_application(d, f->args);
        return;
      }
      case K::Forall:
      case K::Exists: {
        std::vector<std::pair<std::string, std::optional<SortId>>> saved;
        for (const auto& [name, sort] : f->vars) {
          if (sort < 0 || sort >= static_cast<int>(th_.sorts.size()))
            report("quantified variable '" + name + "' has invalid sort");
          auto it = bound_.find(name);
          saved.emplace_back(name, it == bound_.end() ? std::nullopt
                                                      : std::optional<SortId>(it->second));
          bound_[name] = sort;
        }
        check_formula(f->body);
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
          if (it->second)
            bound_[it->first] = *it->second;
          else
            bound_.erase(it->first);
        }
        return;
      }
      case K::Distinct: {
        if (f->terms.size() < 2) report("distinct needs at least two terms");
        SortId first = kBool;
        for (size_t i = 0; i < f->terms.size(); ++i) {
          SortId s = check_term(f->terms[i]);
          if (i == 0)
            first = s;
          else if (s != first)
            report("distinct over mixed sorts");
        }
        return;
      }
    }
  }

  const Theory& th_;
  std::map<std::string, SortId> bound_;
  std::vector<std::string> diags_;
  std::string path_;
};

}  // namespace

std::vector<std::string> check_well_sorted(const Theory& t) {
  return SortChecker(t).run();
}

bool formula_has_quantifiers(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) return true;
  for (const auto& k : f->kids)
    if (formula_has_quantifiers(k)) return true;
  return formula_has_quantifiers(f->body);
}

bool theory_has_quantifiers(const Theory& t) {
  for (const auto& f : t.assertions())
    if (formula_has_quantifiers(f)) return true;
  return false;
}

}  // namespace relog::tfol
