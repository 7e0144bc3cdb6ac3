#include "relog/relational.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace relog {

RelExprPtr RelExpr::rel(std::string n) {
  auto e = std::make_shared<RelExpr>();
  e->kind = Kind::RelRef;
  e->name = std::move(n);
  return e;
}

RelExprPtr RelExpr::var(std::string n) {
  auto e = std::make_shared<RelExpr>();
  e->kind = Kind::VarRef;
  e->name = std::move(n);
  return e;
}

RelExprPtr RelExpr::binary(Kind k, RelExprPtr a, RelExprPtr b) {
  auto e = std::make_shared<RelExpr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

RelExprPtr RelExpr::transpose(RelExprPtr a) {
  auto e = std::make_shared<RelExpr>();
  e->kind = Kind::Transpose;
  e->lhs = std::move(a);
  return e;
}

bool expr_equal(const RelExprPtr& a, const RelExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name) return false;
  return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

RelFormulaPtr RelFormula::mk_true() {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::True;
  return f;
}

RelFormulaPtr RelFormula::mk_false() {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::False;
  return f;
}

RelFormulaPtr RelFormula::mk_not(RelFormulaPtr g) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::Not;
  f->kids.push_back(std::move(g));
  return f;
}

RelFormulaPtr RelFormula::mk_and(std::vector<RelFormulaPtr> fs) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::And;
  f->kids = std::move(fs);
  return f;
}

RelFormulaPtr RelFormula::mk_or(std::vector<RelFormulaPtr> fs) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::Or;
  f->kids = std::move(fs);
  return f;
}

RelFormulaPtr RelFormula::mk_implies(RelFormulaPtr a, RelFormulaPtr b) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::Implies;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

RelFormulaPtr RelFormula::mk_iff(RelFormulaPtr a, RelFormulaPtr b) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::Iff;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

RelFormulaPtr RelFormula::mk_cmp(Kind k, RelExprPtr a, RelExprPtr b) {
  auto f = std::make_shared<RelFormula>();
  f->kind = k;
  f->e1 = std::move(a);
  f->e2 = std::move(b);
  return f;
}

RelFormulaPtr RelFormula::mk_quant(Kind k, std::vector<std::pair<std::string, RelExprPtr>> ds,
                                   RelFormulaPtr body) {
  auto f = std::make_shared<RelFormula>();
  f->kind = k;
  f->decls = std::move(ds);
  f->body = std::move(body);
  return f;
}

RelFormulaPtr RelFormula::mk_mult(MultKind m, RelExprPtr e) {
  auto f = std::make_shared<RelFormula>();
  f->kind = Kind::Mult;
  f->mult = m;
  f->e1 = std::move(e);
  return f;
}

bool formula_equal(const RelFormulaPtr& a, const RelFormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->mult != b->mult) return false;
  if (a->kids.size() != b->kids.size() || a->decls.size() != b->decls.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  for (size_t i = 0; i < a->decls.size(); ++i) {
    if (a->decls[i].first != b->decls[i].first) return false;
    if (!expr_equal(a->decls[i].second, b->decls[i].second)) return false;
  }
  return expr_equal(a->e1, b->e1) && expr_equal(a->e2, b->e2) &&
         formula_equal(a->body, b->body);
}

const RelDecl* RelModel::find_relation(const std::string& n) const {
  for (const auto& r : relations)
    if (r.name == n) return &r;
  return nullptr;
}

bool RelModel::is_exact(const std::string& prefix) const {
  return std::find(exact_prefixes.begin(), exact_prefixes.end(), prefix) !=
         exact_prefixes.end();
}

bool model_equal(const RelModel& a, const RelModel& b) {
  return a.universe == b.universe && a.relations == b.relations &&
         a.goal == b.goal && a.exact_prefixes == b.exact_prefixes &&
         formula_equal(a.formula, b.formula);
}

std::vector<RelFormulaPtr> top_conjuncts(const RelFormulaPtr& f) {
  std::vector<RelFormulaPtr> out;
  if (!f || f->kind == RelFormula::Kind::True) return out;
  if (f->kind == RelFormula::Kind::And) {
    for (const auto& k : f->kids) {
      auto sub = top_conjuncts(k);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  out.push_back(f);
  return out;
}

// ---------------------------------------------------------------------------
// S-expression layer
// ---------------------------------------------------------------------------

namespace {

struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> kids;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // null atom == EOF
  std::optional<Sexp> next() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    int l = line_, c = col_;
    char ch = text_[pos_];
    if (ch == '(' || ch == ')') {
      advance();
      Sexp s;
      s.atom = std::string(1, ch);
      s.line = l;
      s.col = c;
      return s;
    }
    std::string tok;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
        break;
      tok.push_back(d);
      advance();
    }
    Sexp s;
    s.atom = tok;
    s.line = l;
    s.col = c;
    return s;
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

std::vector<Sexp> read_sexps(std::string_view text) {
  Lexer lex(text);
  std::vector<std::vector<Sexp>> stack;
  stack.emplace_back();
  std::vector<std::pair<int, int>> open_pos;
  while (auto tok = lex.next()) {
    if (tok->atom == "(") {
      stack.emplace_back();
      open_pos.emplace_back(tok->line, tok->col);
    } else if (tok->atom == ")") {
      if (stack.size() == 1) throw ParseError(tok->line, tok->col, "unbalanced ')'");
      Sexp s;
      s.is_list = true;
      s.kids = std::move(stack.back());
      s.line = open_pos.back().first;
      s.col = open_pos.back().second;
      stack.pop_back();
      open_pos.pop_back();
      stack.back().push_back(std::move(s));
    } else {
      stack.back().push_back(std::move(*tok));
    }
  }
  if (stack.size() != 1)
    throw ParseError(open_pos.back().first, open_pos.back().second, "unclosed '('");
  return std::move(stack.front());
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

Atom parse_atom_token(const Sexp& s) {
  const std::string& t = s.atom;
  auto dollar = t.find('$');
  if (dollar == std::string::npos)
    throw ParseError(s.line, s.col, "malformed atom '" + t + "': missing '$'");
  std::string prefix = t.substr(0, dollar);
  std::string idx = t.substr(dollar + 1);
  if (!is_identifier(prefix))
    throw ParseError(s.line, s.col, "malformed atom '" + t + "': bad prefix");
  if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(s.line, s.col, "malformed atom '" + t + "': non-numeric index");
  if (idx.size() > 1 && idx[0] == '0')
    throw ParseError(s.line, s.col, "malformed atom '" + t + "': leading zero in index");
  if (idx.size() > 9)
    throw ParseError(s.line, s.col, "malformed atom '" + t + "': index too large");
  return Atom{prefix, std::stoi(idx)};
}

// ---------------------------------------------------------------------------
// Model reader
// ---------------------------------------------------------------------------

class ModelReader {
 public:
  RelModel read(const std::vector<Sexp>& items, int eof_line, int eof_col) {
    std::vector<const Sexp*> formula_items;
    bool saw_goal = false;
    for (const auto& it : items) {
      if (!it.is_list || it.kids.empty() || it.kids[0].is_list)
        throw ParseError(it.line, it.col, "expected (univ ...), (rel ...), (exact ...), (formula ...) or (goal ...)");
      const std::string& head = it.kids[0].atom;
      if (head == "univ") {
        read_univ(it);
      } else if (head == "rel") {
        read_rel(it);
      } else if (head == "exact") {
        read_exact(it);
      } else if (head == "goal") {
        if (saw_goal) throw ParseError(it.line, it.col, "duplicate goal item");
        saw_goal = true;
        read_goal(it);
      } else if (head == "formula") {
        if (it.kids.size() != 2)
          throw ParseError(it.line, it.col, "formula item takes exactly one formula");
        formula_items.push_back(&it.kids[1]);
      } else {
        throw ParseError(it.kids[0].line, it.kids[0].col, "unknown item '" + head + "'");
      }
    }
    if (model_.universe.empty())
      throw ParseError(eof_line, eof_col, "empty universe");
    check_bounds();
    check_exact();
    std::vector<RelFormulaPtr> fs;
    for (const Sexp* s : formula_items) {
      std::vector<std::string> scope;
      fs.push_back(read_formula(*s, scope));
    }
    if (fs.empty())
      model_.formula = RelFormula::mk_true();
    else if (fs.size() == 1)
      model_.formula = fs[0];
    else
      model_.formula = RelFormula::mk_and(std::move(fs));
    return std::move(model_);
  }

 private:
  void read_univ(const Sexp& it) {
    if (!model_.universe.empty())
      throw ParseError(it.line, it.col, "duplicate univ item");
    if (it.kids.size() < 2) throw ParseError(it.line, it.col, "empty universe");
    std::set<Atom> seen;
    for (size_t i = 1; i < it.kids.size(); ++i) {
      if (it.kids[i].is_list)
        throw ParseError(it.kids[i].line, it.kids[i].col, "expected atom");
      Atom a = parse_atom_token(it.kids[i]);
      if (!seen.insert(a).second)
        throw ParseError(it.kids[i].line, it.kids[i].col, "duplicate atom '" + a.str() + "'");
      model_.universe.push_back(std::move(a));
    }
  }

  void read_rel(const Sexp& it) {
    if (it.kids.size() != 4)
      throw ParseError(it.line, it.col, "rel item is (rel NAME ARITY (TUPLE*))");
    const Sexp& name_s = it.kids[1];
    const Sexp& arity_s = it.kids[2];
    const Sexp& tuples_s = it.kids[3];
    if (name_s.is_list || !is_identifier(name_s.atom))
      throw ParseError(name_s.line, name_s.col, "bad relation name");
    if (arity_s.is_list || arity_s.atom.empty() ||
        arity_s.atom.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(arity_s.line, arity_s.col, "bad arity");
    int arity = std::stoi(arity_s.atom);
    if (arity < 1) throw ParseError(arity_s.line, arity_s.col, "arity must be >= 1");
    if (!tuples_s.is_list)
      throw ParseError(tuples_s.line, tuples_s.col, "expected tuple list");
    RelDecl decl;
    decl.name = name_s.atom;
    decl.arity = arity;
    std::set<std::vector<Atom>> seen;
    for (const Sexp& tup : tuples_s.kids) {
      if (!tup.is_list)
        throw ParseError(tup.line, tup.col, "expected tuple (ATOM+)");
      if (static_cast<int>(tup.kids.size()) != arity)
        throw ParseError(tup.line, tup.col, "arity mismatch: tuple of length " +
                         std::to_string(tup.kids.size()) + " in relation of arity " +
                         std::to_string(arity));
      std::vector<Atom> atoms;
      for (const Sexp& a : tup.kids) {
        if (a.is_list) throw ParseError(a.line, a.col, "expected atom");
        atoms.push_back(parse_atom_token(a));
      }
      if (!seen.insert(atoms).second)
        throw ParseError(tup.line, tup.col, "duplicate tuple in bound");
      decl.upper_bound.push_back(std::move(atoms));
    }
    for (const auto& r : model_.relations)
      if (r.name == decl.name)
        throw ParseError(name_s.line, name_s.col, "duplicate relation name '" + decl.name + "'");
    model_.relations.push_back(std::move(decl));
    rel_pos_.emplace_back(it.line, it.col);
  }

  void read_exact(const Sexp& it) {
    for (size_t i = 1; i < it.kids.size(); ++i) {
      const Sexp& p = it.kids[i];
      if (p.is_list || !is_identifier(p.atom))
        throw ParseError(p.line, p.col, "expected leaf-type prefix");
      exact_pos_.emplace_back(p.atom, std::make_pair(p.line, p.col));
      if (!model_.is_exact(p.atom)) model_.exact_prefixes.push_back(p.atom);
    }
  }

  void read_goal(const Sexp& it) {
    if (it.kids.size() != 2 || it.kids[1].is_list)
      throw ParseError(it.line, it.col, "goal item is (goal run|check)");
    const std::string& g = it.kids[1].atom;
    if (g == "run")
      model_.goal = Goal::run;
    else if (g == "check")
      model_.goal = Goal::check;
    else
      throw ParseError(it.kids[1].line, it.kids[1].col, "goal must be run or check");
  }

  void check_bounds() {
    std::set<Atom> universe(model_.universe.begin(), model_.universe.end());
    for (size_t i = 0; i < model_.relations.size(); ++i) {
      const auto& r = model_.relations[i];
      for (const auto& tup : r.upper_bound)
        for (const auto& a : tup)
          if (!universe.count(a))
            throw ParseError(rel_pos_[i].first, rel_pos_[i].second,
                             "atom '" + a.str() + "' in bound of '" + r.name +
                             "' is not in the universe");
    }
  }

  void check_exact() {
    std::set<std::string> prefixes;
    for (const auto& a : model_.universe) prefixes.insert(a.prefix);
    for (const auto& [name, pos] : exact_pos_)
      if (!prefixes.count(name))
        throw ParseError(pos.first, pos.second,
                         "exact prefix '" + name + "' does not occur in the universe");
  }

  // --- formulas ---

  RelFormulaPtr read_formula(const Sexp& s, std::vector<std::string>& scope) {
    if (!s.is_list) {
      if (s.atom == "true") return RelFormula::mk_true();
      if (s.atom == "false") return RelFormula::mk_false();
      throw ParseError(s.line, s.col, "expected formula, got '" + s.atom + "'");
    }
    if (s.kids.empty() || s.kids[0].is_list)
      throw ParseError(s.line, s.col, "expected formula");
    const std::string& head = s.kids[0].atom;
    auto nary = [&](RelFormula::Kind k) {
      std::vector<RelFormulaPtr> kids;
      for (size_t i = 1; i < s.kids.size(); ++i) kids.push_back(read_formula(s.kids[i], scope));
      auto f = std::make_shared<RelFormula>();
      f->kind = k;
      f->kids = std::move(kids);
      return RelFormulaPtr(f);
    };
    if (head == "and") return nary(RelFormula::Kind::And);
    if (head == "or") return nary(RelFormula::Kind::Or);
    if (head == "not") {
      if (s.kids.size() != 2) throw ParseError(s.line, s.col, "not takes one formula");
      return RelFormula::mk_not(read_formula(s.kids[1], scope));
    }
    if (head == "=>" || head == "<=>") {
      if (s.kids.size() != 3)
        throw ParseError(s.line, s.col, head + " takes two formulas");
      auto a = read_formula(s.kids[1], scope);
      auto b = read_formula(s.kids[2], scope);
      return head == "=>" ? RelFormula::mk_implies(a, b) : RelFormula::mk_iff(a, b);
    }
    if (head == "=" || head == "subset" || head == "in") {
      if (s.kids.size() != 3)
        throw ParseError(s.line, s.col, head + " takes two expressions");
      auto a = read_expr(s.kids[1], scope);
      auto b = read_expr(s.kids[2], scope);
      int aa = arity_of(a, s.kids[1]);
      int ab = arity_of(b, s.kids[2]);
      if (aa != ab)
        throw ParseError(s.line, s.col, "arity mismatch in " + head + ": " +
                         std::to_string(aa) + " vs " + std::to_string(ab));
      RelFormula::Kind k = head == "=" ? RelFormula::Kind::Equal
                         : head == "subset" ? RelFormula::Kind::Subset
                                            : RelFormula::Kind::In;
      return RelFormula::mk_cmp(k, a, b);
    }
    if (head == "all" || head == "exists") {
      if (s.kids.size() != 3 || !s.kids[1].is_list)
        throw ParseError(s.line, s.col, head + " is (" + head + " ((VAR E)+) F)");
      const Sexp& binders = s.kids[1];
      if (binders.kids.empty())
        throw ParseError(binders.line, binders.col, "quantifier needs at least one binder");
      std::vector<std::pair<std::string, RelExprPtr>> decls;
      size_t pushed = 0;
      for (const Sexp& b : binders.kids) {
        if (!b.is_list || b.kids.size() != 2 || b.kids[0].is_list)
          throw ParseError(b.line, b.col, "binder is (VAR E)");
        const std::string& v = b.kids[0].atom;
        if (!is_identifier(v)) throw ParseError(b.kids[0].line, b.kids[0].col, "bad variable name");
        if (std::find(scope.begin(), scope.end(), v) != scope.end())
          throw ParseError(b.kids[0].line, b.kids[0].col,
                           "shadowed quantifier variable '" + v + "'");
        auto bound = read_expr(b.kids[1], scope);
        if (arity_of(bound, b.kids[1]) != 1)
          throw ParseError(b.kids[1].line, b.kids[1].col, "quantifier bound must be unary");
        scope.push_back(v);
        ++pushed;
        decls.emplace_back(v, std::move(bound));
      }
      auto body = read_formula(s.kids[2], scope);
      scope.resize(scope.size() - pushed);
      return RelFormula::mk_quant(head == "all" ? RelFormula::Kind::Forall
                                                : RelFormula::Kind::Exists,
                                  std::move(decls), std::move(body));
    }
    if (head == "one" || head == "lone" || head == "someof" || head == "no") {
      if (s.kids.size() != 2) throw ParseError(s.line, s.col, head + " takes one expression");
      auto e = read_expr(s.kids[1], scope);
      arity_of(e, s.kids[1]);
      MultKind m = head == "one" ? MultKind::one
                 : head == "lone" ? MultKind::lone
                 : head == "someof" ? MultKind::some
                                    : MultKind::no;
      return RelFormula::mk_mult(m, e);
    }
    throw ParseError(s.kids[0].line, s.kids[0].col, "unknown formula head '" + head + "'");
  }

  RelExprPtr read_expr(const Sexp& s, std::vector<std::string>& scope) {
    if (!s.is_list) {
      const std::string& n = s.atom;
      if (!is_identifier(n)) throw ParseError(s.line, s.col, "bad name '" + n + "'");
      if (std::find(scope.begin(), scope.end(), n) != scope.end())
        return RelExpr::var(n);
      if (!model_.find_relation(n))
        throw ParseError(s.line, s.col, "unknown relation '" + n + "'");
      return RelExpr::rel(n);
    }
    if (s.kids.empty() || s.kids[0].is_list)
      throw ParseError(s.line, s.col, "expected expression");
    const std::string& head = s.kids[0].atom;
    if (head == "transpose") {
      if (s.kids.size() != 2) throw ParseError(s.line, s.col, "transpose takes one expression");
      auto a = read_expr(s.kids[1], scope);
      if (arity_of(a, s.kids[1]) != 2)
        throw ParseError(s.line, s.col, "transpose applies only to binary expressions");
      return RelExpr::transpose(a);
    }
    RelExpr::Kind k;
    if (head == "join") k = RelExpr::Kind::Join;
    else if (head == "union") k = RelExpr::Kind::Union;
    else if (head == "inter") k = RelExpr::Kind::Inter;
    else if (head == "diff") k = RelExpr::Kind::Diff;
    else if (head == "prod") k = RelExpr::Kind::Product;
    else throw ParseError(s.kids[0].line, s.kids[0].col, "unknown expression head '" + head + "'");
    if (s.kids.size() != 3) throw ParseError(s.line, s.col, head + " takes two expressions");
    auto a = read_expr(s.kids[1], scope);
    auto b = read_expr(s.kids[2], scope);
    int aa = arity_of(a, s.kids[1]);
    int ab = arity_of(b, s.kids[2]);
    if (k == RelExpr::Kind::Union || k == RelExpr::Kind::Inter || k == RelExpr::Kind::Diff) {
      if (aa != ab)
        throw ParseError(s.line, s.col, head + " requires equal arities, got " +
                         std::to_string(aa) + " and " + std::to_string(ab));
    } else if (k == RelExpr::Kind::Join) {
      if (aa + ab - 2 < 1)
        throw ParseError(s.line, s.col, "join of two unary expressions");
    }
    return RelExpr::binary(k, a, b);
  }

  int arity_of(const RelExprPtr& e, const Sexp& at) {
    try {
      return expr_arity(e, model_);
    } catch (const std::logic_error& err) {
      throw ParseError(at.line, at.col, err.what());
    }
  }

  RelModel model_;
  std::vector<std::pair<int, int>> rel_pos_;
  std::vector<std::pair<std::string, std::pair<int, int>>> exact_pos_;
};

}  // namespace

int expr_arity(const RelExprPtr& e, const RelModel& m) {
  switch (e->kind) {
    case RelExpr::Kind::RelRef: {
      const RelDecl* d = m.find_relation(e->name);
      if (!d) throw std::logic_error("unknown relation '" + e->name + "'");
      return d->arity;
    }
    case RelExpr::Kind::VarRef:
      return 1;
    case RelExpr::Kind::Union:
    case RelExpr::Kind::Inter:
    case RelExpr::Kind::Diff:
      return expr_arity(e->lhs, m);
    case RelExpr::Kind::Transpose:
      return 2;
    case RelExpr::Kind::Join:
      return expr_arity(e->lhs, m) + expr_arity(e->rhs, m) - 2;
    case RelExpr::Kind::Product:
      return expr_arity(e->lhs, m) + expr_arity(e->rhs, m);
  }
  throw std::logic_error("bad expression kind");
}

RelModel parse_model(std::string_view text) {
  auto items = read_sexps(text);
  int l = 1, c = 1;
  if (!items.empty()) {
    l = items.back().line;
    c = items.back().col;
  }
  ModelReader rd;
  return rd.read(items, l, c);
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

namespace {

void render_expr(const RelExprPtr& e, std::ostream& os) {
  switch (e->kind) {
    case RelExpr::Kind::RelRef:
    case RelExpr::Kind::VarRef:
      os << e->name;
      return;
    case RelExpr::Kind::Transpose:
      os << "(transpose ";
      render_expr(e->lhs, os);
      os << ")";
      return;
    default: {
      const char* head = e->kind == RelExpr::Kind::Union ? "union"
                       : e->kind == RelExpr::Kind::Inter ? "inter"
                       : e->kind == RelExpr::Kind::Diff ? "diff"
                       : e->kind == RelExpr::Kind::Join ? "join"
                                                        : "prod";
      os << "(" << head << " ";
      render_expr(e->lhs, os);
      os << " ";
      render_expr(e->rhs, os);
      os << ")";
      return;
    }
  }
}

void render_formula(const RelFormulaPtr& f, std::ostream& os) {
  using K = RelFormula::Kind;
  switch (f->kind) {
    case K::True: os << "true"; return;
    case K::False: os << "false"; return;
    case K::Not:
      os << "(not ";
      render_formula(f->kids[0], os);
      os << ")";
      return;
    case K::And:
    case K::Or:
      os << "(" << (f->kind == K::And ? "and" : "or");
      for (const auto& k : f->kids) {
        os << " ";
        render_formula(k, os);
      }
      os << ")";
      return;
    case K::Implies:
    case K::Iff:
      os << "(" << (f->kind == K::Implies ? "=>" : "<=>") << " ";
      render_formula(f->kids[0], os);
      os << " ";
      render_formula(f->kids[1], os);
      os << ")";
      return;
    case K::Equal:
    case K::Subset:
    case K::In:
      os << "(" << (f->kind == K::Equal ? "=" : f->kind == K::Subset ? "subset" : "in") << " ";
      render_expr(f->e1, os);
      os << " ";
      render_expr(f->e2, os);
      os << ")";
      return;
    case K::Forall:
    case K::Exists:
      os << "(" << (f->kind == K::Forall ? "all" : "exists") << " (";
      for (size_t i = 0; i < f->decls.size(); ++i) {
        if (i) os << " ";
        os << "(" << f->decls[i].first << " ";
        render_expr(f->decls[i].second, os);
        os << ")";
      }
      os << ") ";
      render_formula(f->body, os);
      os << ")";
      return;
    case K::Mult: {
      const char* head = f->mult == MultKind::one ? "one"
                       : f->mult == MultKind::lone ? "lone"
                       : f->mult == MultKind::some ? "someof"
                                                   : "no";
      os << "(" << head << " ";
      render_expr(f->e1, os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string render_model(const RelModel& m) {
  std::ostringstream os;
  os << "(univ";
  for (const auto& a : m.universe) os << " " << a.str();
  os << ")\n";
  if (!m.exact_prefixes.empty()) {
    os << "(exact";
    for (const auto& p : m.exact_prefixes) os << " " << p;
    os << ")\n";
  }
  for (const auto& r : m.relations) {
    os << "(rel " << r.name << " " << r.arity << " (";
    for (const auto& tup : r.upper_bound) {
      os << "(";
      for (size_t i = 0; i < tup.size(); ++i) {
        if (i) os << " ";
        os << tup[i].str();
      }
      os << ")";
    }
    os << "))\n";
  }
  os << "(formula ";
  render_formula(m.formula, os);
  os << ")\n";
  os << "(goal " << (m.goal == Goal::run ? "run" : "check") << ")\n";
  return os.str();
}

}  // namespace relog
