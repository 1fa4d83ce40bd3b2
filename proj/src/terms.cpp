#include "hypermon/terms.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "hypermon/formula.hpp"  // ParseError

namespace hypermon {

namespace {

size_t combine(size_t h, size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

size_t hash_node(const Mon& m) {
  size_t h = static_cast<size_t>(m.kind) * 0x100000001b3ull;
  h = combine(h, static_cast<size_t>(m.v));
  h = combine(h, static_cast<size_t>(m.action + 1));
  h = combine(h, static_cast<size_t>(m.loc + 1));
  for (LocationId l : m.group) h = combine(h, static_cast<size_t>(l + 7));
  h = combine(h, std::hash<std::string>{}(m.var));
  if (m.a) h = combine(h, m.a->hash);
  if (m.b) h = combine(h, m.b->hash);
  return h;
}

MonPtr node(Mon m) {
  m.hash = hash_node(m);
  return std::make_shared<Mon>(std::move(m));
}

}  // namespace

namespace mon {

MonPtr verdict(Verdict v) {
  return node({MK::Verdict, v, -1, -1, {}, "", nullptr, nullptr, 0});
}
MonPtr yes() { return verdict(Verdict::Yes); }
MonPtr no() { return verdict(Verdict::No); }
MonPtr end() { return verdict(Verdict::End); }
MonPtr loc_prefix(Action a, LocationId l, MonPtr cont) {
  return node(
      {MK::LocPrefix, Verdict::End, a, l, {}, "", std::move(cont), nullptr, 0});
}
MonPtr act_prefix(Action a, MonPtr cont) {
  return node(
      {MK::ActPrefix, Verdict::End, a, -1, {}, "", std::move(cont), nullptr, 0});
}
MonPtr send(std::vector<LocationId> group, Action c, MonPtr cont) {
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  return node({MK::Send, Verdict::End, c, -1, std::move(group), "",
               std::move(cont), nullptr, 0});
}
MonPtr recv(std::vector<LocationId> group, Action c, MonPtr cont) {
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  return node({MK::Recv, Verdict::End, c, -1, std::move(group), "",
               std::move(cont), nullptr, 0});
}
MonPtr choice(MonPtr a, MonPtr b) {
  return node({MK::Choice, Verdict::End, -1, -1, {}, "", std::move(a),
               std::move(b), 0});
}
MonPtr par_and(MonPtr a, MonPtr b) {
  return node({MK::ParAnd, Verdict::End, -1, -1, {}, "", std::move(a),
               std::move(b), 0});
}
MonPtr par_or(MonPtr a, MonPtr b) {
  return node({MK::ParOr, Verdict::End, -1, -1, {}, "", std::move(a),
               std::move(b), 0});
}
MonPtr rec(std::string x, MonPtr body) {
  return node({MK::Rec, Verdict::End, -1, -1, {}, std::move(x),
               std::move(body), nullptr, 0});
}
MonPtr var(std::string x) {
  return node(
      {MK::Var, Verdict::End, -1, -1, {}, std::move(x), nullptr, nullptr, 0});
}

}  // namespace mon

int mon_cmp(const MonPtr& a, const MonPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (a->v != b->v) return a->v < b->v ? -1 : 1;
  if (a->action != b->action) return a->action < b->action ? -1 : 1;
  if (a->loc != b->loc) return a->loc < b->loc ? -1 : 1;
  if (a->group != b->group) return a->group < b->group ? -1 : 1;
  if (a->var != b->var) return a->var < b->var ? -1 : 1;
  for (auto sel : {&Mon::a, &Mon::b}) {
    const MonPtr &ca = (*a).*sel, &cb = (*b).*sel;
    if (!ca != !cb) return !ca ? -1 : 1;
    if (ca) {
      int c = mon_cmp(ca, cb);
      if (c != 0) return c;
    }
  }
  return 0;
}

bool mon_equal(const MonPtr& a, const MonPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return mon_cmp(a, b) == 0;
}

// --------------------------------------------------------------- printing

namespace {

// prec levels: 0 rec body, 1 (+), 2 (x), 3 +, 4 prefix, 5 atom.
std::string print_rec_mon(const MonPtr& m, const Context& ctx, int min_prec,
                          bool tail) {
  auto wrap = [&](const std::string& s, int prec) {
    return prec < min_prec ? "(" + s + ")" : s;
  };
  switch (m->kind) {
    case MK::Verdict: return verdict_name(m->v);
    case MK::Var: return m->var;
    case MK::LocPrefix: {
      std::string s = ctx.action_name(m->action) + "@" +
                      ctx.location_name(m->loc) + ". " +
                      print_rec_mon(m->a, ctx, 4, tail && min_prec <= 4);
      return wrap(s, 4);
    }
    case MK::ActPrefix: {
      std::string s = ctx.action_name(m->action) + ". " +
                      print_rec_mon(m->a, ctx, 4, tail && min_prec <= 4);
      return wrap(s, 4);
    }
    case MK::Send:
    case MK::Recv: {
      std::string s = m->kind == MK::Send ? "!{" : "?{";
      for (size_t i = 0; i < m->group.size(); ++i) {
        if (i) s += ",";
        s += ctx.location_name(m->group[i]);
      }
      s += "}:" + ctx.action_name(m->action) + ". " +
           print_rec_mon(m->a, ctx, 4, tail && min_prec <= 4);
      return wrap(s, 4);
    }
    case MK::Choice: {
      std::string s = print_rec_mon(m->a, ctx, 3, false) + " + " +
                      print_rec_mon(m->b, ctx, 4, tail && min_prec <= 3);
      return wrap(s, 3);
    }
    case MK::ParAnd: {
      std::string s = print_rec_mon(m->a, ctx, 2, false) + " (x) " +
                      print_rec_mon(m->b, ctx, 3, tail && min_prec <= 2);
      return wrap(s, 2);
    }
    case MK::ParOr: {
      std::string s = print_rec_mon(m->a, ctx, 1, false) + " (+) " +
                      print_rec_mon(m->b, ctx, 2, tail && min_prec <= 1);
      return wrap(s, 1);
    }
    case MK::Rec: {
      std::string s =
          "rec " + m->var + ". " + print_rec_mon(m->a, ctx, 0, true);
      if (!tail || min_prec > 4) return "(" + s + ")";
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string print_mon(const MonPtr& m, const Context& ctx) {
  return print_rec_mon(m, ctx, 0, true);
}

// ---------------------------------------------------------------- parsing

namespace {

enum class MTok {
  Ident,
  KwYes,
  KwNo,
  KwEnd,
  KwRec,
  Plus,
  OpAnd,  // (x)
  OpOr,   // (+)
  Dot,
  At,
  Comma,
  Colon,
  Bang,
  Question,
  LBrace,
  RBrace,
  LParen,
  RParen,
  End,
};

struct MToken {
  MTok kind;
  std::string text;
  int line, col;
};

struct MLexer {
  const std::string& src;
  size_t i = 0;
  int line = 1, col = 1;

  explicit MLexer(const std::string& s) : src(s) {}

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

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  }

  MToken next() {
    while (i < src.size()) {
      if (src[i] == '#') {
        while (i < src.size() && src[i] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src[i]))) {
        advance();
      } else {
        break;
      }
    }
    int tl = line, tc = col;
    if (i >= src.size()) return {MTok::End, "", tl, tc};
    char c = src[i];
    auto one = [&](MTok k) {
      advance();
      return MToken{k, std::string(1, c), tl, tc};
    };
    switch (c) {
      case '+': return one(MTok::Plus);
      case '.': return one(MTok::Dot);
      case '@': return one(MTok::At);
      case ',': return one(MTok::Comma);
      case ':': return one(MTok::Colon);
      case '!': return one(MTok::Bang);
      case '?': return one(MTok::Question);
      case '{': return one(MTok::LBrace);
      case '}': return one(MTok::RBrace);
      case ')': return one(MTok::RParen);
      case '(':
        // "(+)" and "(x)" are operator tokens; anything else opens a group
        if (i + 2 < src.size() && src[i + 1] == '+' && src[i + 2] == ')') {
          advance();
          advance();
          advance();
          return {MTok::OpOr, "(+)", tl, tc};
        }
        if (i + 2 < src.size() && src[i + 1] == 'x' && src[i + 2] == ')') {
          advance();
          advance();
          advance();
          return {MTok::OpAnd, "(x)", tl, tc};
        }
        return one(MTok::LParen);
      default: break;
    }
    if (ident_char(c)) {
      std::string s;
      while (i < src.size() && ident_char(src[i])) {
        s += src[i];
        advance();
      }
      if (s == "yes") return {MTok::KwYes, s, tl, tc};
      if (s == "no") return {MTok::KwNo, s, tl, tc};
      if (s == "end") return {MTok::KwEnd, s, tl, tc};
      if (s == "rec") return {MTok::KwRec, s, tl, tc};
      return {MTok::Ident, s, tl, tc};
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

struct MParser {
  MLexer lex;
  MToken tok;
  const Context& ctx;

  MParser(const std::string& s, const Context& c) : lex(s), ctx(c) {
    tok = lex.next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok.line, tok.col);
  }
  void bump() { tok = lex.next(); }
  void expect(MTok k, const char* what) {
    if (tok.kind != k) fail(std::string("expected ") + what);
    bump();
  }
  std::string expect_ident(const char* what) {
    if (tok.kind != MTok::Ident) fail(std::string("expected ") + what);
    std::string s = tok.text;
    bump();
    return s;
  }
  Action expect_action() {
    MToken at = tok;
    std::string a = expect_ident("action name");
    int id = ctx.action_id(a);
    if (id < 0)
      throw ParseError("unknown action '" + a + "'", at.line, at.col);
    return id;
  }
  LocationId expect_location() {
    MToken at = tok;
    std::string l = expect_ident("location name");
    int id = ctx.location_id(l);
    if (id < 0)
      throw ParseError("unknown location '" + l + "'", at.line, at.col);
    return id;
  }

  MonPtr parse() {
    MonPtr m = parse_or();
    if (tok.kind != MTok::End) fail("trailing input after monitor");
    return m;
  }

  MonPtr parse_or() {
    MonPtr l = parse_and();
    while (tok.kind == MTok::OpOr) {
      bump();
      l = mon::par_or(std::move(l), parse_and());
    }
    return l;
  }

  MonPtr parse_and() {
    MonPtr l = parse_choice();
    while (tok.kind == MTok::OpAnd) {
      bump();
      l = mon::par_and(std::move(l), parse_choice());
    }
    return l;
  }

  MonPtr parse_choice() {
    MonPtr l = parse_prefix();
    while (tok.kind == MTok::Plus) {
      bump();
      l = mon::choice(std::move(l), parse_prefix());
    }
    return l;
  }

  std::vector<LocationId> parse_group() {
    expect(MTok::LBrace, "'{'");
    std::vector<LocationId> g;
    if (tok.kind != MTok::RBrace) {
      g.push_back(expect_location());
      while (tok.kind == MTok::Comma) {
        bump();
        g.push_back(expect_location());
      }
    }
    expect(MTok::RBrace, "'}'");
    return g;
  }

  MonPtr parse_prefix() {
    switch (tok.kind) {
      case MTok::KwYes: bump(); return mon::yes();
      case MTok::KwNo: bump(); return mon::no();
      case MTok::KwEnd: bump(); return mon::end();
      case MTok::KwRec: {
        bump();
        std::string x = expect_ident("recursion variable");
        expect(MTok::Dot, "'.'");
        return mon::rec(x, parse_or());
      }
      case MTok::Bang:
      case MTok::Question: {
        bool is_send = tok.kind == MTok::Bang;
        bump();
        auto g = parse_group();
        expect(MTok::Colon, "':'");
        Action c = expect_action();
        expect(MTok::Dot, "'.'");
        MonPtr cont = parse_prefix();
        return is_send ? mon::send(std::move(g), c, std::move(cont))
                       : mon::recv(std::move(g), c, std::move(cont));
      }
      case MTok::LParen: {
        bump();
        MonPtr m = parse_or();
        expect(MTok::RParen, "')'");
        return m;
      }
      case MTok::Ident: {
        MToken at = tok;
        std::string name = tok.text;
        bump();
        if (tok.kind == MTok::At) {
          bump();
          LocationId l = expect_location();
          expect(MTok::Dot, "'.'");
          int a = ctx.action_id(name);
          if (a < 0)
            throw ParseError("unknown action '" + name + "'", at.line, at.col);
          return mon::loc_prefix(a, l, parse_prefix());
        }
        if (tok.kind == MTok::Dot) {
          bump();
          int a = ctx.action_id(name);
          if (a < 0)
            throw ParseError("unknown action '" + name + "'", at.line, at.col);
          return mon::act_prefix(a, parse_prefix());
        }
        return mon::var(name);
      }
      default: fail("expected a monitor term");
    }
  }
};

}  // namespace

MonPtr parse_mon(const std::string& text, const Context& ctx) {
  MParser p(text, ctx);
  return p.parse();
}

// ------------------------------------------------------------ variables

namespace {

void free_mon_vars_rec(const MonPtr& m, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  switch (m->kind) {
    case MK::Verdict: return;
    case MK::Var:
      if (!bound.count(m->var)) out.insert(m->var);
      return;
    case MK::Rec: {
      bool fresh = bound.insert(m->var).second;
      free_mon_vars_rec(m->a, bound, out);
      if (fresh) bound.erase(m->var);
      return;
    }
    default:
      if (m->a) free_mon_vars_rec(m->a, bound, out);
      if (m->b) free_mon_vars_rec(m->b, bound, out);
  }
}

}  // namespace

std::set<std::string> free_mon_vars(const MonPtr& m) {
  std::set<std::string> bound, out;
  free_mon_vars_rec(m, bound, out);
  return out;
}

namespace {

MonPtr rebuild(const MonPtr& m, MonPtr na, MonPtr nb) {
  if (na == m->a && nb == m->b) return m;
  switch (m->kind) {
    case MK::LocPrefix: return mon::loc_prefix(m->action, m->loc, na);
    case MK::ActPrefix: return mon::act_prefix(m->action, na);
    case MK::Send: return mon::send(m->group, m->action, na);
    case MK::Recv: return mon::recv(m->group, m->action, na);
    case MK::Choice: return mon::choice(na, nb);
    case MK::ParAnd: return mon::par_and(na, nb);
    case MK::ParOr: return mon::par_or(na, nb);
    case MK::Rec: return mon::rec(m->var, na);
    default: return m;
  }
}

MonPtr subst_mon_rec(const MonPtr& m, const std::string& x, const MonPtr& g,
                     const std::set<std::string>& gfv) {
  switch (m->kind) {
    case MK::Verdict: return m;
    case MK::Var: return m->var == x ? g : m;
    case MK::Rec: {
      if (m->var == x) return m;
      std::string v = m->var;
      MonPtr body = m->a;
      if (gfv.count(v)) {
        std::set<std::string> avoid = gfv;
        auto bfv = free_mon_vars(body);
        avoid.insert(bfv.begin(), bfv.end());
        avoid.insert(x);
        std::string nv = v;
        for (int i = 1; avoid.count(nv); ++i) nv = v + std::to_string(i);
        body = subst_mon_rec(body, v, mon::var(nv), {});
        v = nv;
      }
      return mon::rec(v, subst_mon_rec(body, x, g, gfv));
    }
    default: {
      MonPtr na = m->a ? subst_mon_rec(m->a, x, g, gfv) : nullptr;
      MonPtr nb = m->b ? subst_mon_rec(m->b, x, g, gfv) : nullptr;
      return rebuild(m, na, nb);
    }
  }
}

}  // namespace

MonPtr substitute_mon(const MonPtr& m, const std::string& x, const MonPtr& g) {
  return subst_mon_rec(m, x, g, free_mon_vars(g));
}

namespace {

void guard_mon_rec(const MonPtr& m, std::map<std::string, bool> guarded,
                   std::set<std::string>& bad) {
  switch (m->kind) {
    case MK::Verdict: return;
    case MK::Var: {
      auto it = guarded.find(m->var);
      if (it != guarded.end() && !it->second) bad.insert(m->var);
      return;
    }
    case MK::Rec:
      guarded[m->var] = false;
      guard_mon_rec(m->a, guarded, bad);
      return;
    case MK::LocPrefix:
    case MK::ActPrefix:
    case MK::Send:
    case MK::Recv: {
      for (auto& kv : guarded) kv.second = true;
      guard_mon_rec(m->a, guarded, bad);
      return;
    }
    case MK::Choice:
    case MK::ParAnd:
    case MK::ParOr:
      guard_mon_rec(m->a, guarded, bad);
      guard_mon_rec(m->b, guarded, bad);
      return;
  }
}

}  // namespace

std::vector<std::string> check_guarded_mon(const MonPtr& m) {
  std::set<std::string> bad;
  guard_mon_rec(m, {}, bad);
  std::vector<std::string> out;
  for (const auto& x : bad) out.push_back("unguarded variable " + x);
  return out;
}

// ---------------------------------------------------------------- verdicts

namespace {

using VerdictEnv = std::map<std::string, VerdictSet>;

VerdictSet verdicts_rec(const MonPtr& m, const VerdictEnv& env) {
  switch (m->kind) {
    case MK::Verdict: return VerdictSet::single(m->v);
    case MK::LocPrefix:
    case MK::ActPrefix:
    case MK::Send:
    case MK::Recv: return {};
    case MK::Var: {
      auto it = env.find(m->var);
      return it == env.end() ? VerdictSet{} : it->second;
    }
    case MK::Choice: {
      VerdictSet s = verdicts_rec(m->a, env);
      s.merge(verdicts_rec(m->b, env));
      return s;
    }
    case MK::ParAnd:
    case MK::ParOr: {
      VerdictSet l = verdicts_rec(m->a, env), r = verdicts_rec(m->b, env);
      Verdict absorb = m->kind == MK::ParAnd ? Verdict::No : Verdict::Yes;
      Verdict neutral = m->kind == MK::ParAnd ? Verdict::Yes : Verdict::No;
      return combine_parallel_verdicts(l, r, absorb, neutral);
    }
    case MK::Rec: {
      // Least fixpoint of the body's verdicts in the bound variable: a
      // verdict of the unfolding may feed a larger derivation (only possible
      // for unguarded bodies), so iterate until stable.
      VerdictSet v;
      while (true) {
        VerdictEnv env2 = env;
        env2[m->var] = v;
        VerdictSet v2 = verdicts_rec(m->a, env2);
        if (v2 == v) return v;
        v = v2;
      }
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

VerdictSet combine_parallel_verdicts(VerdictSet l, VerdictSet r,
                                     Verdict absorb, Verdict neutral) {
  VerdictSet out;
  if (l.has(absorb) || r.has(absorb)) out.add(absorb);
  if (l.has(neutral)) out.merge(r);
  if (r.has(neutral)) out.merge(l);
  if (l.has(Verdict::End) && r.has(Verdict::End)) out.add(Verdict::End);
  return out;
}

VerdictSet mon_verdicts(const MonPtr& m) { return verdicts_rec(m, {}); }

// ------------------------------------------------------------- normalize

namespace {

void flatten(MK op, const MonPtr& m, std::vector<MonPtr>& out) {
  if (m->kind == op) {
    flatten(op, m->a, out);
    flatten(op, m->b, out);
  } else {
    out.push_back(m);
  }
}

MonPtr fold(MK op, std::vector<MonPtr> children) {
  MonPtr acc = children.front();
  for (size_t i = 1; i < children.size(); ++i) {
    switch (op) {
      case MK::Choice: acc = mon::choice(acc, children[i]); break;
      case MK::ParAnd: acc = mon::par_and(acc, children[i]); break;
      case MK::ParOr: acc = mon::par_or(acc, children[i]); break;
      default: throw std::logic_error("bad fold");
    }
  }
  return acc;
}

bool is_verdict(const MonPtr& m, Verdict v) {
  return m->kind == MK::Verdict && m->v == v;
}

}  // namespace

namespace {

MonPtr normalize_impl(const MonPtr& m, bool merge_par) {
  switch (m->kind) {
    case MK::Verdict:
    case MK::Var: return m;
    case MK::LocPrefix:
    case MK::ActPrefix:
    case MK::Send:
    case MK::Recv: {
      MonPtr na = normalize_impl(m->a, merge_par);
      return na == m->a ? m : rebuild(m, na, nullptr);
    }
    case MK::Rec: {
      MonPtr nb = normalize_impl(m->a, merge_par);
      if (nb->kind == MK::Verdict) return nb;  // rec X. v behaves as v
      return nb == m->a ? m : mon::rec(m->var, nb);
    }
    case MK::Choice: {
      std::vector<MonPtr> cs;
      flatten(MK::Choice, m, cs);
      for (auto& c : cs) c = normalize_impl(c, merge_par);
      std::sort(cs.begin(), cs.end(), MonPtrLess{});
      cs.erase(std::unique(cs.begin(), cs.end(),
                           [](const MonPtr& a, const MonPtr& b) {
                             return mon_equal(a, b);
                           }),
               cs.end());
      return cs.size() == 1 ? cs[0] : fold(MK::Choice, std::move(cs));
    }
    case MK::ParAnd:
    case MK::ParOr: {
      MK op = m->kind;
      Verdict absorb = op == MK::ParAnd ? Verdict::No : Verdict::Yes;
      Verdict neutral = op == MK::ParAnd ? Verdict::Yes : Verdict::No;
      std::vector<MonPtr> cs;
      flatten(op, m, cs);
      std::vector<MonPtr> kept;
      bool saw_end = false;
      for (auto& c : cs) {
        MonPtr n = normalize_impl(c, merge_par);
        if (is_verdict(n, absorb)) return mon::verdict(absorb);
        if (is_verdict(n, neutral)) continue;
        if (is_verdict(n, Verdict::End)) {
          saw_end = true;  // end (x) end == end; keep a single copy
          continue;
        }
        kept.push_back(std::move(n));
      }
      if (saw_end) kept.push_back(mon::end());
      if (kept.empty()) return mon::verdict(neutral);
      std::sort(kept.begin(), kept.end(), MonPtrLess{});
      if (merge_par)
        kept.erase(std::unique(kept.begin(), kept.end(),
                               [](const MonPtr& a, const MonPtr& b) {
                                 return mon_equal(a, b);
                               }),
                   kept.end());
      return kept.size() == 1 ? kept[0] : fold(op, std::move(kept));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

MonPtr normalize_mon(const MonPtr& m) { return normalize_impl(m, false); }

MonPtr normalize_mon_run(const MonPtr& m) { return normalize_impl(m, true); }

namespace {

bool alpha_mon_rec(const MonPtr& a, const MonPtr& b,
                   std::map<std::string, std::string>& rmap) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case MK::Verdict: return a->v == b->v;
    case MK::Var: {
      auto it = rmap.find(a->var);
      if (it != rmap.end()) return it->second == b->var;
      return a->var == b->var;
    }
    case MK::Rec: {
      auto saved = rmap;
      rmap[a->var] = b->var;
      bool ok = alpha_mon_rec(a->a, b->a, rmap);
      rmap = saved;
      return ok;
    }
    default:
      if (a->action != b->action || a->loc != b->loc || a->group != b->group)
        return false;
      if (a->a && !alpha_mon_rec(a->a, b->a, rmap)) return false;
      if (a->b && !alpha_mon_rec(a->b, b->b, rmap)) return false;
      return true;
  }
}

}  // namespace

bool alpha_equal_mon(const MonPtr& a, const MonPtr& b) {
  std::map<std::string, std::string> rmap;
  return alpha_mon_rec(a, b, rmap);
}

}  // namespace hypermon
