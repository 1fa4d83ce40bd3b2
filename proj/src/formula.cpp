#include "hypermon/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace hypermon {

namespace fml {

static FormulaPtr node(Formula f) {
  return std::make_shared<Formula>(std::move(f));
}

FormulaPtr tt() { return node({FK::True, "", "", "", nullptr, nullptr}); }
FormulaPtr ff() { return node({FK::False, "", "", "", nullptr, nullptr}); }
FormulaPtr and_(FormulaPtr a, FormulaPtr b) {
  return node({FK::And, "", "", "", std::move(a), std::move(b)});
}
FormulaPtr or_(FormulaPtr a, FormulaPtr b) {
  return node({FK::Or, "", "", "", std::move(a), std::move(b)});
}
FormulaPtr max(std::string x, FormulaPtr body) {
  return node({FK::Max, "", std::move(x), "", std::move(body), nullptr});
}
FormulaPtr min(std::string x, FormulaPtr body) {
  return node({FK::Min, "", std::move(x), "", std::move(body), nullptr});
}
FormulaPtr var(std::string x) {
  return node({FK::Var, "", std::move(x), "", nullptr, nullptr});
}
FormulaPtr exists(std::string p, FormulaPtr body) {
  return node({FK::Exists, "", std::move(p), "", std::move(body), nullptr});
}
FormulaPtr forall(std::string p, FormulaPtr body) {
  return node({FK::Forall, "", std::move(p), "", std::move(body), nullptr});
}
FormulaPtr eq(std::string p, std::string q) {
  return node({FK::Eq, "", std::move(p), std::move(q), nullptr, nullptr});
}
FormulaPtr neq(std::string p, std::string q) {
  return node({FK::Neq, "", std::move(p), std::move(q), nullptr, nullptr});
}
FormulaPtr box(std::string a, std::string p, FormulaPtr body) {
  return node(
      {FK::Box, std::move(a), std::move(p), "", std::move(body), nullptr});
}
FormulaPtr diamond(std::string a, std::string p, FormulaPtr body) {
  return node(
      {FK::Diamond, std::move(a), std::move(p), "", std::move(body), nullptr});
}

}  // namespace fml

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok {
  Ident,
  KwTt,
  KwFf,
  KwMax,
  KwMin,
  KwExists,
  KwForall,
  And,
  Or,
  Dot,
  Eq,
  Neq,
  At,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LAngle,
  RAngle,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  size_t i = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void advance() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  void skip_ws() {
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {
        while (i < src.size() && src[i] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  }

  Token next() {
    skip_ws();
    int tl = line, tc = col;
    if (i >= src.size()) return {Tok::End, "", tl, tc};
    char c = src[i];
    auto one = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), tl, tc};
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case '<': return one(Tok::LAngle);
      case '>': return one(Tok::RAngle);
      case '@': return one(Tok::At);
      case '.': return one(Tok::Dot);
      case '=': return one(Tok::Eq);
      case '/':
        advance();
        if (i < src.size() && src[i] == '\\') {
          advance();
          return {Tok::And, "/\\", tl, tc};
        }
        fail("expected '\\' after '/'");
      case '\\':
        advance();
        if (i < src.size() && src[i] == '/') {
          advance();
          return {Tok::Or, "\\/", tl, tc};
        }
        fail("expected '/' after '\\'");
      case '!':
        advance();
        if (i < src.size() && src[i] == '=') {
          advance();
          return {Tok::Neq, "!=", tl, tc};
        }
        fail("expected '=' after '!'");
      default: break;
    }
    if (ident_char(c)) {
      std::string s;
      while (i < src.size() && ident_char(src[i])) {
        s += src[i];
        advance();
      }
      if (s == "tt") return {Tok::KwTt, s, tl, tc};
      if (s == "ff") return {Tok::KwFf, s, tl, tc};
      if (s == "max") return {Tok::KwMax, s, tl, tc};
      if (s == "min") return {Tok::KwMin, s, tl, tc};
      if (s == "exists") return {Tok::KwExists, s, tl, tc};
      if (s == "forall") return {Tok::KwForall, s, tl, tc};
      return {Tok::Ident, s, tl, tc};
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

// ---------------------------------------------------------------- parser

struct Parser {
  Lexer lex;
  Token tok;
  const Context* ctx;

  Parser(const std::string& s, const Context* c) : lex(s), ctx(c) {
    tok = lex.next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok.line, tok.col);
  }

  void bump() { tok = lex.next(); }

  std::string expect_ident(const char* what) {
    if (tok.kind != Tok::Ident) fail(std::string("expected ") + what);
    std::string s = tok.text;
    bump();
    return s;
  }

  void expect(Tok k, const char* what) {
    if (tok.kind != k) fail(std::string("expected ") + what);
    bump();
  }

  std::string expect_action() {
    Token at = tok;
    std::string a = expect_ident("action name");
    for (char c : a)
      if (!(std::islower(static_cast<unsigned char>(c)) ||
            std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
        throw ParseError("invalid action name '" + a + "' (expected [a-z0-9_]+)",
                         at.line, at.col);
    if (ctx && ctx->action_id(a) < 0)
      throw ParseError("unknown action '" + a + "'", at.line, at.col);
    return a;
  }

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (tok.kind != Tok::End) fail("trailing input after formula");
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr l = parse_and();
    while (tok.kind == Tok::Or) {
      bump();
      l = fml::or_(std::move(l), parse_and());
    }
    return l;
  }

  FormulaPtr parse_and() {
    FormulaPtr l = parse_unary();
    while (tok.kind == Tok::And) {
      bump();
      l = fml::and_(std::move(l), parse_unary());
    }
    return l;
  }

  FormulaPtr parse_unary() {
    switch (tok.kind) {
      case Tok::LBracket: {
        bump();
        std::string a = expect_action();
        expect(Tok::At, "'@'");
        std::string p = expect_ident("trace variable");
        expect(Tok::RBracket, "']'");
        return fml::box(a, p, parse_unary());
      }
      case Tok::LAngle: {
        bump();
        std::string a = expect_action();
        expect(Tok::At, "'@'");
        std::string p = expect_ident("trace variable");
        expect(Tok::RAngle, "'>'");
        return fml::diamond(a, p, parse_unary());
      }
      case Tok::KwMax:
      case Tok::KwMin: {
        bool is_max = tok.kind == Tok::KwMax;
        bump();
        std::string x = expect_ident("recursion variable");
        expect(Tok::Dot, "'.'");
        FormulaPtr body = parse_or();
        return is_max ? fml::max(x, body) : fml::min(x, body);
      }
      case Tok::KwExists:
      case Tok::KwForall: {
        bool is_ex = tok.kind == Tok::KwExists;
        bump();
        std::string p = expect_ident("trace variable");
        expect(Tok::Dot, "'.'");
        FormulaPtr body = parse_or();
        return is_ex ? fml::exists(p, body) : fml::forall(p, body);
      }
      default: return parse_atom();
    }
  }

  FormulaPtr parse_atom() {
    switch (tok.kind) {
      case Tok::KwTt: bump(); return fml::tt();
      case Tok::KwFf: bump(); return fml::ff();
      case Tok::LParen: {
        bump();
        FormulaPtr f = parse_or();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        std::string name = tok.text;
        bump();
        if (tok.kind == Tok::Eq) {
          bump();
          return fml::eq(name, expect_ident("trace variable"));
        }
        if (tok.kind == Tok::Neq) {
          bump();
          return fml::neq(name, expect_ident("trace variable"));
        }
        return fml::var(name);
      }
      default: fail("expected a formula");
    }
  }
};

// ------------------------------------------------- alpha-normalization

// Renames every shadowing or reused binder to a fresh name so that all
// binders in the result are pairwise distinct and distinct from free
// variables. Trace variables draw from p1, p2, ...; recursion variables
// from X1, X2, ....
struct Renamer {
  std::set<std::string> used_trace, used_rec;
  int next_trace = 1, next_rec = 1;
  std::map<std::string, std::string> tenv, renv;  // active bindings

  std::string fresh_trace() {
    std::string n;
    do n = "p" + std::to_string(next_trace++);
    while (used_trace.count(n));
    return n;
  }
  std::string fresh_rec() {
    std::string n;
    do n = "X" + std::to_string(next_rec++);
    while (used_rec.count(n));
    return n;
  }

  std::string bind_trace(const std::string& name) {
    std::string n = used_trace.count(name) ? fresh_trace() : name;
    used_trace.insert(n);
    return n;
  }
  std::string bind_rec(const std::string& name) {
    std::string n = used_rec.count(name) ? fresh_rec() : name;
    used_rec.insert(n);
    return n;
  }

  std::string trace_ref(const std::string& name) {
    auto it = tenv.find(name);
    return it == tenv.end() ? name : it->second;
  }

  FormulaPtr run(const FormulaPtr& f) {
    switch (f->kind) {
      case FK::True:
      case FK::False: return f;
      case FK::And: return fml::and_(run(f->a), run(f->b));
      case FK::Or: return fml::or_(run(f->a), run(f->b));
      case FK::Max:
      case FK::Min: {
        std::string n = bind_rec(f->var);
        auto saved = renv;
        renv[f->var] = n;
        FormulaPtr body = run(f->a);
        renv = saved;
        return f->kind == FK::Max ? fml::max(n, body) : fml::min(n, body);
      }
      case FK::Var: {
        auto it = renv.find(f->var);
        return fml::var(it == renv.end() ? f->var : it->second);
      }
      case FK::Exists:
      case FK::Forall: {
        std::string n = bind_trace(f->var);
        auto saved = tenv;
        tenv[f->var] = n;
        FormulaPtr body = run(f->a);
        tenv = saved;
        return f->kind == FK::Exists ? fml::exists(n, body)
                                     : fml::forall(n, body);
      }
      case FK::Eq: return fml::eq(trace_ref(f->var), trace_ref(f->var2));
      case FK::Neq: return fml::neq(trace_ref(f->var), trace_ref(f->var2));
      case FK::Box:
        return fml::box(f->action, trace_ref(f->var), run(f->a));
      case FK::Diamond:
        return fml::diamond(f->action, trace_ref(f->var), run(f->a));
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Context* ctx) {
  Parser p(text, ctx);
  FormulaPtr raw = p.parse();
  Renamer r;
  FreeVars fv = free_vars(raw);
  r.used_trace = fv.trace_vars;
  r.used_rec = fv.rec_vars;
  return r.run(raw);
}

// --------------------------------------------------------------- printer

namespace {

// prec levels: 0 binder body, 1 disjunction, 2 conjunction, 3 modality
// body, 4 atom. A binder is printed without parentheses only in tail
// position, where extending maximally to the right reproduces the same tree.
std::string print_rec(const FormulaPtr& f, int min_prec, bool tail) {
  auto wrap = [&](const std::string& s, int prec) {
    return prec < min_prec ? "(" + s + ")" : s;
  };
  switch (f->kind) {
    case FK::True: return "tt";
    case FK::False: return "ff";
    case FK::Var: return f->var;
    case FK::Eq: return wrap(f->var + " = " + f->var2, 4);
    case FK::Neq: return wrap(f->var + " != " + f->var2, 4);
    case FK::And: {
      std::string s = print_rec(f->a, 2, false) + " /\\ " +
                      print_rec(f->b, 3, tail && min_prec <= 2);
      return wrap(s, 2);
    }
    case FK::Or: {
      std::string s = print_rec(f->a, 1, false) + " \\/ " +
                      print_rec(f->b, 2, tail && min_prec <= 1);
      return wrap(s, 1);
    }
    case FK::Box:
    case FK::Diamond: {
      std::string m = f->kind == FK::Box
                          ? "[" + f->action + "@" + f->var + "] "
                          : "<" + f->action + "@" + f->var + "> ";
      std::string s = m + print_rec(f->a, 3, tail && min_prec <= 3);
      return wrap(s, 3);
    }
    case FK::Max:
    case FK::Min:
    case FK::Exists:
    case FK::Forall: {
      const char* kw = f->kind == FK::Max      ? "max"
                       : f->kind == FK::Min    ? "min"
                       : f->kind == FK::Exists ? "exists"
                                               : "forall";
      std::string s =
          std::string(kw) + " " + f->var + ". " + print_rec(f->a, 0, true);
      if (!tail || min_prec > 3) return "(" + s + ")";
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
  return print_rec(f, 0, true);
}

// ---------------------------------------------------------- static checks

namespace {

void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound_t,
                   std::set<std::string>& bound_r, FreeVars& out) {
  switch (f->kind) {
    case FK::True:
    case FK::False: return;
    case FK::And:
    case FK::Or:
      free_vars_rec(f->a, bound_t, bound_r, out);
      free_vars_rec(f->b, bound_t, bound_r, out);
      return;
    case FK::Max:
    case FK::Min: {
      bool fresh = bound_r.insert(f->var).second;
      free_vars_rec(f->a, bound_t, bound_r, out);
      if (fresh) bound_r.erase(f->var);
      return;
    }
    case FK::Var:
      if (!bound_r.count(f->var)) out.rec_vars.insert(f->var);
      return;
    case FK::Exists:
    case FK::Forall: {
      bool fresh = bound_t.insert(f->var).second;
      free_vars_rec(f->a, bound_t, bound_r, out);
      if (fresh) bound_t.erase(f->var);
      return;
    }
    case FK::Eq:
    case FK::Neq:
      if (!bound_t.count(f->var)) out.trace_vars.insert(f->var);
      if (!bound_t.count(f->var2)) out.trace_vars.insert(f->var2);
      return;
    case FK::Box:
    case FK::Diamond:
      if (!bound_t.count(f->var)) out.trace_vars.insert(f->var);
      free_vars_rec(f->a, bound_t, bound_r, out);
      return;
  }
}

}  // namespace

FreeVars free_vars(const FormulaPtr& f) {
  FreeVars out;
  std::set<std::string> bt, br;
  free_vars_rec(f, bt, br, out);
  return out;
}

namespace {

// guarded[x] is false until a modality is crossed inside x's binder.
void guard_rec(const FormulaPtr& f, std::map<std::string, bool> guarded,
               std::set<std::string>& bad) {
  switch (f->kind) {
    case FK::True:
    case FK::False:
    case FK::Eq:
    case FK::Neq: return;
    case FK::And:
    case FK::Or:
      guard_rec(f->a, guarded, bad);
      guard_rec(f->b, guarded, bad);
      return;
    case FK::Max:
    case FK::Min:
      guarded[f->var] = false;
      guard_rec(f->a, guarded, bad);
      return;
    case FK::Var: {
      auto it = guarded.find(f->var);
      if (it != guarded.end() && !it->second) bad.insert(f->var);
      return;
    }
    case FK::Exists:
    case FK::Forall: guard_rec(f->a, guarded, bad); return;
    case FK::Box:
    case FK::Diamond: {
      for (auto& kv : guarded) kv.second = true;
      guard_rec(f->a, guarded, bad);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> check_well_formed(const FormulaPtr& f) {
  std::set<std::string> bad;
  guard_rec(f, {}, bad);
  std::vector<std::string> out;
  for (const auto& x : bad) out.push_back("unguarded variable " + x);
  return out;
}

const char* fragment_name(Fragment fr) {
  switch (fr) {
    case Fragment::HyperRecHML: return "HyperRecHML";
    case Fragment::HyperMaxHML: return "HyperMaxHML";
    case Fragment::PHyperRecHML: return "PHyperRecHML";
    case Fragment::PHyperMaxHML: return "PHyperMaxHML";
    case Fragment::Qf: return "Qf";
  }
  return "?";
}

namespace {

void scan(const FormulaPtr& f, bool under_fix_or_mod, bool& has_min,
          bool& has_quant, bool& quant_under) {
  switch (f->kind) {
    case FK::True:
    case FK::False:
    case FK::Var:
    case FK::Eq:
    case FK::Neq: return;
    case FK::And:
    case FK::Or:
      scan(f->a, under_fix_or_mod, has_min, has_quant, quant_under);
      scan(f->b, under_fix_or_mod, has_min, has_quant, quant_under);
      return;
    case FK::Min:
      has_min = true;
      [[fallthrough]];
    case FK::Max:
      scan(f->a, true, has_min, has_quant, quant_under);
      return;
    case FK::Exists:
    case FK::Forall:
      has_quant = true;
      if (under_fix_or_mod) quant_under = true;
      scan(f->a, under_fix_or_mod, has_min, has_quant, quant_under);
      return;
    case FK::Box:
    case FK::Diamond:
      scan(f->a, true, has_min, has_quant, quant_under);
      return;
  }
}

}  // namespace

std::set<Fragment> classify(const FormulaPtr& f) {
  bool has_min = false, has_quant = false, quant_under = false;
  scan(f, false, has_min, has_quant, quant_under);
  std::set<Fragment> out{Fragment::HyperRecHML};
  if (!has_min) out.insert(Fragment::HyperMaxHML);
  if (!quant_under) {
    out.insert(Fragment::PHyperRecHML);
    if (!has_min) out.insert(Fragment::PHyperMaxHML);
  }
  if (!has_quant) out.insert(Fragment::Qf);
  return out;
}

namespace {

std::string fresh_avoiding(const std::string& base,
                           const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string n = base + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

// Renames free occurrences of trace variable `from` to `to`.
FormulaPtr rename_trace(const FormulaPtr& f, const std::string& from,
                        const std::string& to) {
  auto ref = [&](const std::string& v) { return v == from ? to : v; };
  switch (f->kind) {
    case FK::True:
    case FK::False:
    case FK::Var: return f;
    case FK::And:
      return fml::and_(rename_trace(f->a, from, to),
                       rename_trace(f->b, from, to));
    case FK::Or:
      return fml::or_(rename_trace(f->a, from, to),
                      rename_trace(f->b, from, to));
    case FK::Max: return fml::max(f->var, rename_trace(f->a, from, to));
    case FK::Min: return fml::min(f->var, rename_trace(f->a, from, to));
    case FK::Exists:
    case FK::Forall: {
      if (f->var == from) return f;  // shadowed below
      FormulaPtr nb = rename_trace(f->a, from, to);
      return f->kind == FK::Exists ? fml::exists(f->var, nb)
                                   : fml::forall(f->var, nb);
    }
    case FK::Eq: return fml::eq(ref(f->var), ref(f->var2));
    case FK::Neq: return fml::neq(ref(f->var), ref(f->var2));
    case FK::Box:
      return fml::box(f->action, ref(f->var), rename_trace(f->a, from, to));
    case FK::Diamond:
      return fml::diamond(f->action, ref(f->var),
                          rename_trace(f->a, from, to));
  }
  throw std::logic_error("unreachable");
}

FormulaPtr subst_rec(const FormulaPtr& f, const std::string& x,
                     const FormulaPtr& g, const FreeVars& gfv) {
  switch (f->kind) {
    case FK::True:
    case FK::False:
    case FK::Eq:
    case FK::Neq: return f;
    case FK::Var: return f->var == x ? g : f;
    case FK::And: return fml::and_(subst_rec(f->a, x, g, gfv),
                                   subst_rec(f->b, x, g, gfv));
    case FK::Or:
      return fml::or_(subst_rec(f->a, x, g, gfv), subst_rec(f->b, x, g, gfv));
    case FK::Max:
    case FK::Min: {
      if (f->var == x) return f;  // x rebound below; nothing to do
      FormulaPtr body = f->a;
      std::string v = f->var;
      if (gfv.rec_vars.count(v)) {
        // binder would capture a free variable of g: rename it first
        FreeVars ffv = free_vars(body);
        std::set<std::string> avoid = gfv.rec_vars;
        avoid.insert(ffv.rec_vars.begin(), ffv.rec_vars.end());
        avoid.insert(x);
        std::string nv = fresh_avoiding(v, avoid);
        body = subst_rec(body, v, fml::var(nv), FreeVars{});
        v = nv;
      }
      FormulaPtr nb = subst_rec(body, x, g, gfv);
      return f->kind == FK::Max ? fml::max(v, nb) : fml::min(v, nb);
    }
    case FK::Exists:
    case FK::Forall: {
      // trace binders cannot capture recursion variables, but they can
      // capture free trace variables of g
      std::string v = f->var;
      FormulaPtr body = f->a;
      if (gfv.trace_vars.count(v)) {
        FreeVars ffv = free_vars(body);
        std::set<std::string> avoid = gfv.trace_vars;
        avoid.insert(ffv.trace_vars.begin(), ffv.trace_vars.end());
        std::string nv = fresh_avoiding(v, avoid);
        body = rename_trace(body, v, nv);
        v = nv;
      }
      FormulaPtr nb = subst_rec(body, x, g, gfv);
      return f->kind == FK::Exists ? fml::exists(v, nb) : fml::forall(v, nb);
    }
    case FK::Box:
      return fml::box(f->action, f->var, subst_rec(f->a, x, g, gfv));
    case FK::Diamond:
      return fml::diamond(f->action, f->var, subst_rec(f->a, x, g, gfv));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& x,
                      const FormulaPtr& g) {
  return subst_rec(f, x, g, free_vars(g));
}

namespace {

bool alpha_rec(const FormulaPtr& f, const FormulaPtr& g,
               std::map<std::string, std::string>& tmap,
               std::map<std::string, std::string>& rmap) {
  if (f->kind != g->kind) return false;
  auto tref = [&](const std::string& a, const std::string& b) {
    auto it = tmap.find(a);
    if (it != tmap.end()) return it->second == b;
    return a == b;  // both free
  };
  switch (f->kind) {
    case FK::True:
    case FK::False: return true;
    case FK::And:
    case FK::Or:
      return alpha_rec(f->a, g->a, tmap, rmap) &&
             alpha_rec(f->b, g->b, tmap, rmap);
    case FK::Max:
    case FK::Min: {
      auto saved = rmap;
      rmap[f->var] = g->var;
      bool ok = alpha_rec(f->a, g->a, tmap, rmap);
      rmap = saved;
      return ok;
    }
    case FK::Var: {
      auto it = rmap.find(f->var);
      if (it != rmap.end()) return it->second == g->var;
      return f->var == g->var;
    }
    case FK::Exists:
    case FK::Forall: {
      auto saved = tmap;
      tmap[f->var] = g->var;
      bool ok = alpha_rec(f->a, g->a, tmap, rmap);
      tmap = saved;
      return ok;
    }
    case FK::Eq:
    case FK::Neq: return tref(f->var, g->var) && tref(f->var2, g->var2);
    case FK::Box:
    case FK::Diamond:
      return f->action == g->action && tref(f->var, g->var) &&
             alpha_rec(f->a, g->a, tmap, rmap);
  }
  return false;
}

}  // namespace

bool alpha_equal(const FormulaPtr& f, const FormulaPtr& g) {
  std::map<std::string, std::string> tmap, rmap;
  return alpha_rec(f, g, tmap, rmap);
}

Sigma parse_sigma(const std::string& text, const Context& ctx) {
  Sigma out;
  std::string s = text;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto trim = [](std::string& t) {
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
        t.erase(t.begin());
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
        t.pop_back();
    };
    auto pos = item.find('=');
    if (pos == std::string::npos)
      throw UsageError("bad sigma entry '" + item + "' (expected var=loc)");
    std::string var = item.substr(0, pos), loc = item.substr(pos + 1);
    trim(var);
    trim(loc);
    if (var.empty() || loc.empty())
      throw UsageError("bad sigma entry '" + item + "' (expected var=loc)");
    int l = ctx.location_id(loc);
    if (l < 0) throw UsageError("unknown location '" + loc + "' in sigma");
    if (out.count(var))
      throw UsageError("duplicate trace variable '" + var + "' in sigma");
    out[var] = l;
  }
  return out;
}

}  // namespace hypermon
