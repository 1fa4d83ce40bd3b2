#include "hypermon/decentral.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <unordered_set>

namespace hypermon {

namespace {

size_t dcombine(size_t h, size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

DMonPtr dnode(DMon d) {
  size_t h = static_cast<size_t>(d.kind) * 0x100000001b3ull;
  if (d.m) h = dcombine(h, d.m->hash);
  h = dcombine(h, static_cast<size_t>(d.loc + 1));
  if (d.a) h = dcombine(h, d.a->hash);
  if (d.b) h = dcombine(h, d.b->hash);
  d.hash = h;
  return std::make_shared<DMon>(std::move(d));
}

}  // namespace

namespace dmon {

DMonPtr located(MonPtr m, LocationId l) {
  return dnode({DK::Located, std::move(m), l, nullptr, nullptr, 0});
}
DMonPtr dand(DMonPtr a, DMonPtr b) {
  return dnode({DK::DAnd, nullptr, -1, std::move(a), std::move(b), 0});
}
DMonPtr dor(DMonPtr a, DMonPtr b) {
  return dnode({DK::DOr, nullptr, -1, std::move(a), std::move(b), 0});
}

}  // namespace dmon

int dmon_cmp(const DMonPtr& a, const DMonPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (a->kind == DK::Located) {
    if (a->loc != b->loc) return a->loc < b->loc ? -1 : 1;
    return mon_cmp(a->m, b->m);
  }
  int c = dmon_cmp(a->a, b->a);
  if (c != 0) return c;
  return dmon_cmp(a->b, b->b);
}

bool dmon_equal(const DMonPtr& a, const DMonPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return dmon_cmp(a, b) == 0;
}

// --------------------------------------------------------------- printing

namespace {

// prec: 1 \/ , 2 /\ , 3 located atom
std::string print_dmon_rec(const DMonPtr& m, const Context& ctx,
                           int min_prec) {
  switch (m->kind) {
    case DK::Located:
      return "[" + print_mon(m->m, ctx) + "]@" + ctx.location_name(m->loc);
    case DK::DAnd: {
      std::string s = print_dmon_rec(m->a, ctx, 2) + " /\\ " +
                      print_dmon_rec(m->b, ctx, 3);
      return 2 < min_prec ? "(" + s + ")" : s;
    }
    case DK::DOr: {
      std::string s = print_dmon_rec(m->a, ctx, 1) + " \\/ " +
                      print_dmon_rec(m->b, ctx, 2);
      return 1 < min_prec ? "(" + s + ")" : s;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string print_dmon(const DMonPtr& m, const Context& ctx) {
  return print_dmon_rec(m, ctx, 0);
}

namespace {

struct DParser {
  const std::string& src;
  size_t i = 0;
  int line = 1, col = 1;
  const Context& ctx;

  DParser(const std::string& s, const Context& c) : src(s), ctx(c) {}

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
      if (src[i] == '#') {
        while (i < src.size() && src[i] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src[i]))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool eat(const std::string& s) {
    skip_ws();
    if (src.compare(i, s.size(), s) == 0) {
      for (size_t k = 0; k < s.size(); ++k) advance();
      return true;
    }
    return false;
  }

  DMonPtr parse() {
    DMonPtr m = parse_or();
    skip_ws();
    if (i < src.size()) fail("trailing input after monitor");
    return m;
  }

  DMonPtr parse_or() {
    DMonPtr l = parse_and();
    while (eat("\\/")) l = dmon::dor(std::move(l), parse_and());
    return l;
  }

  DMonPtr parse_and() {
    DMonPtr l = parse_atom();
    while (eat("/\\")) l = dmon::dand(std::move(l), parse_atom());
    return l;
  }

  DMonPtr parse_atom() {
    skip_ws();
    if (eat("(")) {
      DMonPtr m = parse_or();
      if (!eat(")")) fail("expected ')'");
      return m;
    }
    if (!eat("[")) fail("expected '[' or '('");
    size_t start = i;
    while (i < src.size() && src[i] != ']') advance();
    if (i >= src.size()) fail("unterminated located monitor");
    std::string inner = src.substr(start, i - start);
    advance();  // ']'
    if (!eat("@")) fail("expected '@' after ']'");
    skip_ws();
    std::string name;
    while (i < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[i])) ||
            src[i] == '_')) {
      name += src[i];
      advance();
    }
    if (name.empty()) fail("expected location name");
    int l = ctx.location_id(name);
    if (l < 0) fail("unknown location '" + name + "'");
    return dmon::located(parse_mon(inner, ctx), l);
  }
};

}  // namespace

DMonPtr parse_dmon(const std::string& text, const Context& ctx) {
  DParser p(text, ctx);
  return p.parse();
}

// ---------------------------------------------------- local transitions

namespace {

void dedup_sort_mon(std::vector<MonPtr>& v) {
  std::sort(v.begin(), v.end(), MonPtrLess{});
  v.erase(std::unique(v.begin(), v.end(),
                      [](const MonPtr& a, const MonPtr& b) {
                        return mon_equal(a, b);
                      }),
          v.end());
}

MonPtr unfold(const MonPtr& rec_term) {
  return substitute_mon(rec_term->a, rec_term->var, rec_term);
}

}  // namespace

std::vector<MonPtr> lmon_step_action(const MonPtr& m, Action a) {
  std::vector<MonPtr> out;
  switch (m->kind) {
    case MK::Verdict: out.push_back(m); break;
    case MK::ActPrefix:
      if (m->action == a) out.push_back(m->a);
      break;
    case MK::Send:
    case MK::Recv: break;
    case MK::Choice: {
      out = lmon_step_action(m->a, a);
      auto r = lmon_step_action(m->b, a);
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case MK::ParAnd:
    case MK::ParOr: {
      auto sa = lmon_step_action(m->a, a);
      auto sb = lmon_step_action(m->b, a);
      for (const auto& x : sa)
        for (const auto& y : sb)
          out.push_back(m->kind == MK::ParAnd ? mon::par_and(x, y)
                                              : mon::par_or(x, y));
      break;
    }
    case MK::Rec: out = lmon_step_action(unfold(m), a); break;
    case MK::Var: throw UsageError("cannot step an open monitor term");
    case MK::LocPrefix: throw UsageError("not a local monitor term");
  }
  dedup_sort_mon(out);
  return out;
}

std::vector<MonPtr> lmon_step_receive(const MonPtr& m, LocationId sender,
                                      Action c) {
  std::vector<MonPtr> out;
  switch (m->kind) {
    case MK::Verdict:
    case MK::ActPrefix:
    case MK::Send: break;
    case MK::Recv:
      if (m->action == c &&
          std::find(m->group.begin(), m->group.end(), sender) !=
              m->group.end())
        out.push_back(m->a);
      break;
    case MK::Choice: {
      out = lmon_step_receive(m->a, sender, c);
      auto r = lmon_step_receive(m->b, sender, c);
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case MK::ParAnd:
    case MK::ParOr: {
      auto sa = lmon_step_receive(m->a, sender, c);
      auto sb = lmon_step_receive(m->b, sender, c);
      auto mk = [&](const MonPtr& x, const MonPtr& y) {
        return m->kind == MK::ParAnd ? mon::par_and(x, y) : mon::par_or(x, y);
      };
      if (!sa.empty() && !sb.empty()) {
        for (const auto& x : sa)
          for (const auto& y : sb) out.push_back(mk(x, y));
      } else if (!sa.empty()) {
        for (const auto& x : sa) out.push_back(mk(x, m->b));
      } else if (!sb.empty()) {
        for (const auto& y : sb) out.push_back(mk(m->a, y));
      }
      break;
    }
    case MK::Rec: out = lmon_step_receive(unfold(m), sender, c); break;
    case MK::Var: throw UsageError("cannot step an open monitor term");
    case MK::LocPrefix: throw UsageError("not a local monitor term");
  }
  dedup_sort_mon(out);
  return out;
}

std::vector<LocalSend> lmon_step_sends(const MonPtr& m) {
  std::vector<LocalSend> out;
  switch (m->kind) {
    case MK::Verdict:
    case MK::ActPrefix:
    case MK::Recv: break;
    case MK::Send: out.push_back({m->group, m->action, m->a}); break;
    case MK::Choice: {
      out = lmon_step_sends(m->a);
      auto r = lmon_step_sends(m->b);
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case MK::ParAnd:
    case MK::ParOr: {
      auto mk = [&](const MonPtr& x, const MonPtr& y) {
        return m->kind == MK::ParAnd ? mon::par_and(x, y) : mon::par_or(x, y);
      };
      for (auto& s : lmon_step_sends(m->a))
        out.push_back({s.group, s.c, mk(s.result, m->b)});
      for (auto& s : lmon_step_sends(m->b))
        out.push_back({s.group, s.c, mk(m->a, s.result)});
      break;
    }
    case MK::Rec: out = lmon_step_sends(unfold(m)); break;
    case MK::Var: throw UsageError("cannot step an open monitor term");
    case MK::LocPrefix: throw UsageError("not a local monitor term");
  }
  return out;
}

std::set<std::pair<LocationId, Action>> lmon_enabled_receives(const MonPtr& m) {
  std::set<std::pair<LocationId, Action>> out;
  switch (m->kind) {
    case MK::Verdict:
    case MK::ActPrefix:
    case MK::Send:
    case MK::Var: break;
    case MK::Recv:
      for (LocationId l : m->group) out.insert({l, m->action});
      break;
    case MK::Choice:
    case MK::ParAnd:
    case MK::ParOr: {
      out = lmon_enabled_receives(m->a);
      auto r = lmon_enabled_receives(m->b);
      out.insert(r.begin(), r.end());
      break;
    }
    case MK::Rec: out = lmon_enabled_receives(unfold(m)); break;
    case MK::LocPrefix: throw UsageError("not a local monitor term");
  }
  return out;
}

bool lmon_can_communicate(const MonPtr& m) {
  return !lmon_step_sends(m).empty() || !lmon_enabled_receives(m).empty();
}

bool dmon_can_communicate(const DMonPtr& M) {
  if (M->kind == DK::Located) return lmon_can_communicate(M->m);
  return dmon_can_communicate(M->a) || dmon_can_communicate(M->b);
}

// ------------------------------------------------- composite transitions

DMonPtr dmon_receive(const DMonPtr& M, LocationId sender,
                     const std::vector<LocationId>& group, Action c) {
  if (M->kind == DK::Located) {
    if (std::find(group.begin(), group.end(), M->loc) == group.end()) return M;
    auto succ = lmon_step_receive(M->m, sender, c);
    if (succ.empty()) return M;  // addressed but not receptive: stays put
    if (succ.size() > 1)
      throw std::runtime_error("ambiguous receive at location " +
                               std::to_string(M->loc));
    return dmon::located(succ[0], M->loc);
  }
  DMonPtr na = dmon_receive(M->a, sender, group, c);
  DMonPtr nb = dmon_receive(M->b, sender, group, c);
  if (na == M->a && nb == M->b) return M;
  return M->kind == DK::DAnd ? dmon::dand(na, nb) : dmon::dor(na, nb);
}

std::vector<Multicast> dmon_sends(const DMonPtr& M) {
  std::vector<Multicast> out;
  if (M->kind == DK::Located) {
    for (auto& s : lmon_step_sends(M->m))
      out.push_back(
          {{M->loc, s.group, s.c}, dmon::located(s.result, M->loc)});
  } else {
    for (auto& mc : dmon_sends(M->a)) {
      DMonPtr other =
          dmon_receive(M->b, mc.label.sender, mc.label.group, mc.label.c);
      out.push_back({mc.label, M->kind == DK::DAnd
                                   ? dmon::dand(mc.result, other)
                                   : dmon::dor(mc.result, other)});
    }
    for (auto& mc : dmon_sends(M->b)) {
      DMonPtr other =
          dmon_receive(M->a, mc.label.sender, mc.label.group, mc.label.c);
      out.push_back({mc.label, M->kind == DK::DAnd
                                   ? dmon::dand(other, mc.result)
                                   : dmon::dor(other, mc.result)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Multicast& a, const Multicast& b) {
    if (a.label.sender != b.label.sender) return a.label.sender < b.label.sender;
    if (a.label.c != b.label.c) return a.label.c < b.label.c;
    if (a.label.group != b.label.group) return a.label.group < b.label.group;
    return dmon_cmp(a.result, b.result) < 0;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Multicast& a, const Multicast& b) {
                          return a.label.sender == b.label.sender &&
                                 a.label.c == b.label.c &&
                                 a.label.group == b.label.group &&
                                 dmon_equal(a.result, b.result);
                        }),
            out.end());
  return out;
}

std::vector<DMonPtr> dmon_action_step(const DMonPtr& M, const ActionMap& A) {
  std::vector<DMonPtr> out;
  if (M->kind == DK::Located) {
    if (M->loc < 0 || M->loc >= static_cast<int>(A.size()))
      throw UsageError("monitor placed at a location outside the trace");
    auto succ = lmon_step_action(M->m, A[M->loc]);
    if (succ.empty()) {
      if (lmon_can_communicate(M->m))
        throw UsageError(
            "not in a stable state: the component at location " +
            std::to_string(M->loc) + " can still communicate");
      out.push_back(dmon::located(mon::end(), M->loc));
    } else {
      for (auto& s : succ) out.push_back(dmon::located(s, M->loc));
    }
  } else {
    auto sa = dmon_action_step(M->a, A);
    auto sb = dmon_action_step(M->b, A);
    for (const auto& x : sa)
      for (const auto& y : sb)
        out.push_back(M->kind == DK::DAnd ? dmon::dand(x, y)
                                          : dmon::dor(x, y));
  }
  std::sort(out.begin(), out.end(),
            [](const DMonPtr& a, const DMonPtr& b) {
              return dmon_cmp(a, b) < 0;
            });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DMonPtr& a, const DMonPtr& b) {
                          return dmon_equal(a, b);
                        }),
            out.end());
  return out;
}

namespace {

bool every_leaf_can_act_or_halt(const DMonPtr& M, const ActionMap& A) {
  if (M->kind == DK::Located) {
    if (M->loc < 0 || M->loc >= static_cast<int>(A.size()))
      throw UsageError("monitor placed at a location outside the trace");
    return !lmon_step_action(M->m, A[M->loc]).empty() ||
           !lmon_can_communicate(M->m);
  }
  return every_leaf_can_act_or_halt(M->a, A) &&
         every_leaf_can_act_or_halt(M->b, A);
}

}  // namespace

std::vector<DMonPtr> dmon_action_step_if_stable(const DMonPtr& M,
                                                const ActionMap& A) {
  if (!every_leaf_can_act_or_halt(M, A)) return {};
  return dmon_action_step(M, A);
}

VerdictSet dmon_verdicts(const DMonPtr& M) {
  if (M->kind == DK::Located) return mon_verdicts(M->m);
  VerdictSet l = dmon_verdicts(M->a), r = dmon_verdicts(M->b);
  return M->kind == DK::DAnd
             ? combine_parallel_verdicts(l, r, Verdict::No, Verdict::Yes)
             : combine_parallel_verdicts(l, r, Verdict::Yes, Verdict::No);
}

// --------------------------------------------------------------- saturate

namespace {

long count_send_nodes(const MonPtr& m) {
  long n = m->kind == MK::Send ? 1 : 0;
  if (m->a) n += count_send_nodes(m->a);
  if (m->b) n += count_send_nodes(m->b);
  return n;
}

long count_send_nodes(const DMonPtr& M) {
  if (M->kind == DK::Located) return count_send_nodes(M->m);
  return count_send_nodes(M->a) + count_send_nodes(M->b);
}

}  // namespace

Saturation saturate(const DMonPtr& M, Scheduler& sched) {
  Saturation sat;
  sat.chain.push_back(M);
  long cap = count_send_nodes(M) + 1;
  DMonPtr cur = M;
  for (long iter = 0;; ++iter) {
    auto cands = dmon_sends(cur);
    if (cands.empty()) {
      if (dmon_can_communicate(cur))
        throw std::runtime_error(
            "saturation stuck: a component waits to receive but nothing can "
            "send");
      break;
    }
    if (iter >= cap)
      throw std::runtime_error(
          "saturation exceeded its send budget (monitor violates bounded "
          "communication)");
    const Multicast& mc = cands[sched.pick(static_cast<int>(cands.size()))];
    sat.sends.push_back(mc.label);
    cur = mc.result;
    sat.chain.push_back(cur);
  }
  sat.stable = cur;
  return sat;
}

// -------------------------------------------------------------- synthesis

namespace {

bool has_quantifier(const FormulaPtr& f) {
  if (f->kind == FK::Exists || f->kind == FK::Forall) return true;
  if (f->a && has_quantifier(f->a)) return true;
  if (f->b && has_quantifier(f->b)) return true;
  return false;
}

std::vector<LocationId> sigma_range(const Sigma& sigma) {
  std::vector<LocationId> rng;
  for (const auto& [v, l] : sigma) rng.push_back(l);
  std::sort(rng.begin(), rng.end());
  rng.erase(std::unique(rng.begin(), rng.end()), rng.end());
  return rng;
}

// Local monitor for the quantifier-free body f as seen from location me.
MonPtr dm_synth(const FormulaPtr& f, LocationId me, const Sigma& sigma,
                const Context& ctx) {
  switch (f->kind) {
    case FK::True: return mon::yes();
    case FK::False: return mon::no();
    case FK::Var: return mon::var(f->var);
    case FK::Max: return mon::rec(f->var, dm_synth(f->a, me, sigma, ctx));
    case FK::Min: throw UsageError("least fixed point not monitorable");
    case FK::And:
      return mon::par_and(dm_synth(f->a, me, sigma, ctx),
                          dm_synth(f->b, me, sigma, ctx));
    case FK::Or:
      return mon::par_or(dm_synth(f->a, me, sigma, ctx),
                         dm_synth(f->b, me, sigma, ctx));
    case FK::Eq:
    case FK::Neq: {
      auto p = sigma.find(f->var), q = sigma.find(f->var2);
      if (p == sigma.end() || q == sigma.end())
        throw UsageError("unbound trace variable in equality test");
      bool same = p->second == q->second;
      bool holds = f->kind == FK::Eq ? same : !same;
      return holds ? mon::yes() : mon::no();
    }
    case FK::Box:
    case FK::Diamond: {
      Action a = ctx.action_id(f->action);
      if (a < 0) throw UsageError("unknown action '" + f->action + "'");
      auto it = sigma.find(f->var);
      if (it == sigma.end())
        throw UsageError("unbound trace variable '" + f->var + "'");
      LocationId owner = it->second;
      MonPtr settled = f->kind == FK::Box ? mon::yes() : mon::no();
      if (owner == me) {
        // We observe the modality: broadcast whichever action happened to
        // the other mentioned locations, then continue (or settle).
        std::vector<LocationId> grp;
        for (LocationId l : sigma_range(sigma))
          if (l != me) grp.push_back(l);
        MonPtr sum = mon::act_prefix(
            a, mon::send(grp, a, dm_synth(f->a, me, sigma, ctx)));
        for (Action b = 0; b < ctx.num_actions(); ++b)
          if (b != a)
            sum = mon::choice(sum,
                              mon::act_prefix(b, mon::send(grp, b, settled)));
        return sum;
      }
      // The owner will tell us what it saw: take any local action, then
      // wait for the owner's message.
      MonPtr waiting =
          mon::recv({owner}, a, dm_synth(f->a, me, sigma, ctx));
      for (Action b = 0; b < ctx.num_actions(); ++b)
        if (b != a)
          waiting = mon::choice(waiting, mon::recv({owner}, b, settled));
      MonPtr sum;
      for (Action b = 0; b < ctx.num_actions(); ++b) {
        MonPtr br = mon::act_prefix(b, waiting);
        sum = sum ? mon::choice(sum, br) : br;
      }
      return sum;
    }
    case FK::Exists:
    case FK::Forall:
      throw std::logic_error("quantifier inside a quantifier-free body");
  }
  throw std::logic_error("unreachable");
}

DMonPtr dsynth(const FormulaPtr& f, const Sigma& sigma, const Context& ctx) {
  if (!has_quantifier(f)) {
    auto rng = sigma_range(sigma);
    if (rng.empty()) {
      // No location is mentioned: the body is action-free, so the verdict
      // is already determined; pin it at the least location.
      VerdictSet v = mon_verdicts(synth_central(f, {}, ctx));
      if (v.size() != 1)
        throw std::logic_error("closed quantifier-free body not a verdict");
      Verdict w = v.has(Verdict::Yes)  ? Verdict::Yes
                  : v.has(Verdict::No) ? Verdict::No
                                       : Verdict::End;
      return dmon::located(mon::verdict(w), 0);
    }
    DMonPtr acc;
    for (LocationId l : rng) {
      DMonPtr part = dmon::located(dm_synth(f, l, sigma, ctx), l);
      acc = acc ? dmon::dor(acc, part) : part;
    }
    return acc;
  }
  switch (f->kind) {
    case FK::Forall:
    case FK::Exists: {
      bool all = f->kind == FK::Forall;
      DMonPtr acc;
      for (LocationId l = 0; l < ctx.num_locations(); ++l) {
        Sigma sigma2 = sigma;
        sigma2[f->var] = l;
        DMonPtr part = dsynth(f->a, sigma2, ctx);
        acc = !acc  ? part
              : all ? dmon::dand(acc, part)
                    : dmon::dor(acc, part);
      }
      return acc;
    }
    case FK::And:
      return dmon::dand(dsynth(f->a, sigma, ctx), dsynth(f->b, sigma, ctx));
    case FK::Or:
      return dmon::dor(dsynth(f->a, sigma, ctx), dsynth(f->b, sigma, ctx));
    default:
      throw std::logic_error("quantifier below a non-boolean connective");
  }
}

}  // namespace

DMonPtr synth_dec(const FormulaPtr& f, const Sigma& sigma,
                  const Context& ctx) {
  auto frags = classify(f);
  if (!frags.count(Fragment::HyperMaxHML))
    throw UsageError("least fixed point not monitorable");
  if (!frags.count(Fragment::PHyperMaxHML))
    throw UsageError("not in PHyper-maxHML: quantifiers must not occur under "
                     "fixpoints or modalities");
  FreeVars fv = free_vars(f);
  for (const auto& v : fv.trace_vars)
    if (!sigma.count(v))
      throw UsageError("free trace variable '" + v + "' not bound by sigma");
  if (!fv.rec_vars.empty())
    throw UsageError("free recursion variable '" + *fv.rec_vars.begin() + "'");
  auto bad = check_well_formed(f);
  if (!bad.empty()) throw UsageError(bad.front());
  for (const auto& [v, l] : sigma)
    if (l < 0 || l >= ctx.num_locations())
      throw UsageError("sigma binds '" + v + "' to an unknown location");
  return dsynth(f, sigma, ctx);
}

// -------------------------------------------------------------- execution

namespace {

void for_each_leaf(const DMonPtr& M,
                   const std::function<void(const DMonPtr&)>& fn) {
  if (M->kind == DK::Located) {
    fn(M);
  } else {
    for_each_leaf(M->a, fn);
    for_each_leaf(M->b, fn);
  }
}

}  // namespace

DMonPtr normalize_dmon(const DMonPtr& M) {
  if (M->kind == DK::Located) {
    MonPtr n = normalize_mon(M->m);
    return n == M->m ? M : dmon::located(n, M->loc);
  }
  DMonPtr na = normalize_dmon(M->a), nb = normalize_dmon(M->b);
  if (na == M->a && nb == M->b) return M;
  return M->kind == DK::DAnd ? dmon::dand(na, nb) : dmon::dor(na, nb);
}

bool dmon_is_final(const DMonPtr& M) {
  if (M->kind == DK::Located) return M->m->kind == MK::Verdict;
  return dmon_is_final(M->a) && dmon_is_final(M->b);
}

namespace {

struct DConfig {
  DMonPtr term;
  int pos;
};
struct DConfigHash {
  size_t operator()(const DConfig& c) const {
    return c.term->hash * 1000003u + static_cast<size_t>(c.pos);
  }
};
struct DConfigEq {
  bool operator()(const DConfig& a, const DConfig& b) const {
    return a.pos == b.pos && dmon_equal(a.term, b.term);
  }
};

}  // namespace

json dec_run_outcome_to_json(const DecRunOutcome& r, const Context& ctx) {
  json j = run_outcome_to_json(r.base);
  json log = json::array();
  for (const auto& e : r.log) {
    json o;
    o["step"] = e.step;
    o["from"] = ctx.location_name(e.ev.sender);
    json grp = json::array();
    for (LocationId l : e.ev.group) grp.push_back(ctx.location_name(l));
    o["to"] = grp;
    o["constant"] = ctx.action_name(e.ev.c);
    log.push_back(std::move(o));
  }
  j["multicast_log"] = std::move(log);
  return j;
}

DecRunOutcome run_dec(const DMonPtr& M, const Trace& t, Scheduler& sched,
                      long max_states) {
  for_each_leaf(M, [](const DMonPtr& leaf) {
    auto bad = check_guarded_mon(leaf->m);
    if (!bad.empty())
      throw UsageError("cannot run unguarded monitor: " + bad.front());
    if (!free_mon_vars(leaf->m).empty())
      throw UsageError("cannot run an open monitor term");
  });

  DecRunOutcome out;
  Saturation sat0 = saturate(M, sched);
  for (const auto& ev : sat0.sends) out.log.push_back({0, ev});

  std::unordered_set<DConfig, DConfigHash, DConfigEq> seen;
  std::deque<std::pair<DConfig, long>> queue;
  DConfig start{normalize_dmon(sat0.stable), 0};
  seen.insert(start);
  queue.push_back({start, 0});

  while (!queue.empty()) {
    auto [cfg, depth] = queue.front();
    queue.pop_front();

    VerdictSet v = dmon_verdicts(cfg.term);
    if (v.size() > 1) out.base.ambiguous_verdicts = true;
    if (v.has(Verdict::Yes)) {
      out.base.reachable_yes = true;
      if (!out.base.steps_to_first_yes) out.base.steps_to_first_yes = depth;
    }
    if (v.has(Verdict::No)) {
      out.base.reachable_no = true;
      if (!out.base.steps_to_first_no) out.base.steps_to_first_no = depth;
    }
    if (dmon_is_final(cfg.term)) continue;

    for (const auto& succ : dmon_action_step(cfg.term, t.at(cfg.pos))) {
      Saturation sat = saturate(succ, sched);
      DConfig next{normalize_dmon(sat.stable), t.succ(cfg.pos)};
      if (seen.insert(next).second) {
        for (const auto& ev : sat.sends) out.log.push_back({depth + 1, ev});
        if (static_cast<long>(seen.size()) > max_states)
          throw BudgetError("state budget exceeded in run_dec",
                            static_cast<long>(seen.size()));
        queue.push_back({next, depth + 1});
      }
    }
  }
  out.base.explored_states = static_cast<long>(seen.size());
  return out;
}

}  // namespace hypermon
