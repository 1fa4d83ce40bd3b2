#include "hypermon/verify.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hypermon {

namespace {

std::string show_map(const ActionMap& A, const Context& ctx) {
  std::string s = "[";
  for (size_t l = 0; l < A.size(); ++l) {
    if (l) s += ",";
    s += ctx.location_name(static_cast<int>(l)) + "->" + ctx.action_name(A[l]);
  }
  return s + "]";
}

}  // namespace

// ------------------------------------------------------------- generation

ContextPtr gen_context(const GenConfig& cfg) {
  if (cfg.alphabet_size < 2) throw UsageError("alphabet_size must be >= 2");
  if (cfg.location_count < 1) throw UsageError("location_count must be >= 1");
  if (cfg.alphabet_size > 26)
    throw UsageError("alphabet_size must be <= 26 (single-letter names)");
  std::vector<std::string> acts, locs;
  for (int i = 0; i < cfg.alphabet_size; ++i)
    acts.push_back(std::string(1, static_cast<char>('a' + i)));
  for (int i = 0; i < cfg.location_count; ++i)
    locs.push_back("l" + std::to_string(i + 1));
  return std::make_shared<const Context>(Context::make(acts, locs));
}

namespace {

struct GenState {
  std::mt19937_64& rng;
  const GenConfig& cfg;
  const Context& ctx;
  std::vector<std::string> trace_vars;
  // A recursion variable may only be referenced once a modality has been
  // passed inside its binder; that keeps every sample guarded.
  std::vector<std::pair<std::string, bool>> rec_vars;
  int fixpoints = 0;
  int next_trace = 1;
  int next_rec = 1;

  int roll(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }
  bool coin() { return roll(2) == 0; }
};

FormulaPtr gen_leaf(GenState& st) {
  std::vector<int> usable;
  for (size_t i = 0; i < st.rec_vars.size(); ++i)
    if (st.rec_vars[i].second) usable.push_back(static_cast<int>(i));
  int options = 2;
  if (!st.trace_vars.empty()) options += 1;
  if (!usable.empty()) options += 1;
  int pick = st.roll(options);
  if (pick == 0) return fml::tt();
  if (pick == 1) return fml::ff();
  if (pick == 2 && !st.trace_vars.empty()) {
    int n = static_cast<int>(st.trace_vars.size());
    const std::string& p = st.trace_vars[st.roll(n)];
    const std::string& q = st.trace_vars[st.roll(n)];
    return st.coin() ? fml::eq(p, q) : fml::neq(p, q);
  }
  return fml::var(st.rec_vars[usable[st.roll(static_cast<int>(usable.size()))]]
                      .first);
}

FormulaPtr gen_rec(GenState& st, int depth, bool allow_quant) {
  if (depth <= 0) return gen_leaf(st);

  int w_mod = st.trace_vars.empty() ? 0 : 40;
  int w_bool = 24;
  int w_quant = allow_quant ? 14 : 0;
  int w_fix = st.fixpoints < st.cfg.max_fixpoints ? 12 : 0;
  int w_leaf = 10;
  int total = w_mod + w_bool + w_quant + w_fix + w_leaf;
  int pick = st.roll(total);

  if (pick < w_mod) {
    std::string a =
        st.ctx.action_name(st.roll(st.ctx.num_actions()));
    // copy: generating the body may grow trace_vars and reallocate
    std::string p =
        st.trace_vars[st.roll(static_cast<int>(st.trace_vars.size()))];
    std::vector<bool> saved;
    for (auto& rv : st.rec_vars) {
      saved.push_back(rv.second);
      rv.second = true;
    }
    FormulaPtr body = gen_rec(st, depth - 1, allow_quant);
    for (size_t i = 0; i < saved.size(); ++i) st.rec_vars[i].second = saved[i];
    return st.coin() ? fml::box(a, p, body) : fml::diamond(a, p, body);
  }
  pick -= w_mod;
  if (pick < w_bool) {
    FormulaPtr a = gen_rec(st, depth - 1, allow_quant);
    FormulaPtr b = gen_rec(st, depth - 1, allow_quant);
    return st.coin() ? fml::and_(std::move(a), std::move(b))
                     : fml::or_(std::move(a), std::move(b));
  }
  pick -= w_bool;
  if (pick < w_quant) {
    std::string p = "p" + std::to_string(st.next_trace++);
    st.trace_vars.push_back(p);
    FormulaPtr body = gen_rec(st, depth - 1, allow_quant);
    st.trace_vars.pop_back();
    return st.coin() ? fml::exists(p, std::move(body))
                     : fml::forall(p, std::move(body));
  }
  pick -= w_quant;
  if (pick < w_fix) {
    std::string x = "X" + std::to_string(st.next_rec++);
    st.fixpoints++;
    st.rec_vars.emplace_back(x, false);
    FormulaPtr body = gen_rec(st, depth - 1, allow_quant);
    st.rec_vars.pop_back();
    bool use_min = st.cfg.allow_min && st.coin();
    return use_min ? fml::min(x, std::move(body))
                   : fml::max(x, std::move(body));
  }
  return gen_leaf(st);
}

}  // namespace

FormulaPtr gen_formula(std::mt19937_64& rng, const GenConfig& cfg,
                       const Context& ctx) {
  GenState st{rng, cfg, ctx, {}, {}, 0, 1, 1};
  if (!cfg.quantifier_prefix_only)
    return gen_rec(st, cfg.max_formula_depth, true);

  // Quantifier prefix, then a quantifier-free body over the bound variables.
  int k = st.roll(10) == 0 ? 0 : 1 + st.roll(3);
  std::vector<std::pair<bool, std::string>> prefix;  // (is_exists, var)
  for (int i = 0; i < k; ++i) {
    std::string p = "p" + std::to_string(st.next_trace++);
    prefix.emplace_back(st.coin(), p);
    st.trace_vars.push_back(p);
  }
  FormulaPtr f = gen_rec(st, cfg.max_formula_depth - k, false);
  for (int i = k - 1; i >= 0; --i)
    f = prefix[i].first ? fml::exists(prefix[i].second, std::move(f))
                        : fml::forall(prefix[i].second, std::move(f));
  return f;
}

Trace gen_trace(std::mt19937_64& rng, const GenConfig& cfg, ContextPtr ctx) {
  auto roll = [&](int n) {
    return static_cast<int>(rng() % static_cast<uint64_t>(n));
  };
  int p = roll(cfg.max_prefix + 1);
  int q = 1 + roll(cfg.max_loop);
  auto rand_map = [&]() {
    ActionMap A(ctx->num_locations());
    for (auto& a : A) a = roll(ctx->num_actions());
    return A;
  };
  Trace t;
  for (int i = 0; i < p; ++i) t.prefix.push_back(rand_map());
  for (int i = 0; i < q; ++i) t.loop.push_back(rand_map());
  t.ctx = std::move(ctx);
  return t;
}

namespace {

int count_nodes(const FormulaPtr& f) {
  int n = 1;
  if (f->a) n += count_nodes(f->a);
  if (f->b) n += count_nodes(f->b);
  return n;
}

FormulaPtr node_at(const FormulaPtr& f, int target, int& counter) {
  if (counter++ == target) return f;
  if (f->a)
    if (auto r = node_at(f->a, target, counter)) return r;
  if (f->b)
    if (auto r = node_at(f->b, target, counter)) return r;
  return nullptr;
}

FormulaPtr rebuild(const FormulaPtr& f, FormulaPtr a, FormulaPtr b) {
  switch (f->kind) {
    case FK::And: return fml::and_(std::move(a), std::move(b));
    case FK::Or: return fml::or_(std::move(a), std::move(b));
    case FK::Max: return fml::max(f->var, std::move(a));
    case FK::Min: return fml::min(f->var, std::move(a));
    case FK::Exists: return fml::exists(f->var, std::move(a));
    case FK::Forall: return fml::forall(f->var, std::move(a));
    case FK::Box: return fml::box(f->action, f->var, std::move(a));
    case FK::Diamond: return fml::diamond(f->action, f->var, std::move(a));
    default: return f;
  }
}

FormulaPtr replace_at(const FormulaPtr& f, int target, int& counter,
                      const FormulaPtr& sub) {
  if (counter++ == target) return sub;
  FormulaPtr a = f->a, b = f->b;
  if (f->a) a = replace_at(f->a, target, counter, sub);
  if (f->b) b = replace_at(f->b, target, counter, sub);
  return rebuild(f, std::move(a), std::move(b));
}

}  // namespace

FormulaPtr shrink_formula(
    const FormulaPtr& f,
    const std::function<bool(const FormulaPtr&)>& fails) {
  FormulaPtr cur = f;
  bool improved = true;
  while (improved) {
    improved = false;
    int n = count_nodes(cur);
    for (int i = 0; i < n && !improved; ++i) {
      int c = 0;
      FormulaPtr node = node_at(cur, i, c);
      if (node->kind == FK::True || node->kind == FK::False) continue;
      std::vector<FormulaPtr> cands = {fml::tt(), fml::ff()};
      if (node->a) cands.push_back(node->a);
      if (node->b) cands.push_back(node->b);
      for (const auto& cand : cands) {
        c = 0;
        FormulaPtr whole = replace_at(cur, i, c, cand);
        // Each accepted step shrinks (node count, non-verdict leaf count)
        // lexicographically, so the loop terminates.
        if (fails(whole)) {
          cur = whole;
          improved = true;
          break;
        }
      }
    }
  }
  return cur;
}

// ------------------------------------------------ shared exploration memo

namespace {

// Interns monitor terms of both kinds and memoizes the relations the
// checkers keep asking for: sends, communication closures, action steps
// (skipping states that still have to communicate), verdict sets, and
// end-dominance-pruned centralized steps.
void flat_op(MK op, const MonPtr& m, std::vector<MonPtr>& out) {
  if (m->kind == op) {
    flat_op(op, m->a, out);
    flat_op(op, m->b, out);
  } else {
    out.push_back(m);
  }
}

MonPtr fold_op(MK op, std::vector<MonPtr> cs) {
  MonPtr acc = cs.back();
  for (int i = static_cast<int>(cs.size()) - 2; i >= 0; --i)
    acc = op == MK::Choice   ? mon::choice(cs[i], acc)
          : op == MK::ParAnd ? mon::par_and(cs[i], acc)
                             : mon::par_or(cs[i], acc);
  return acc;
}

Verdict only_verdict(VerdictSet v) {
  if (v.has(Verdict::Yes)) return Verdict::Yes;
  if (v.has(Verdict::No)) return Verdict::No;
  return Verdict::End;
}

// Rewrites a local term by the identities that preserve all three local
// transition relations exactly (actions, sends, receives): products and
// choices are flattened and sorted, duplicate choice branches merged,
// verdict components of a product merged into one (they all self-loop on
// every action and never communicate), neutral verdict components dropped,
// rec bodies that are verdicts collapsed. Unlike normalize_mon this never
// absorbs a whole product into a verdict while a non-verdict component
// remains: that component might still act or communicate differently.
// Without this quotient the explored spaces are infinite: every unfolding
// of a recursive product accretes another settled verdict component.
MonPtr normalize_local_mon(const MonPtr& m) {
  switch (m->kind) {
    case MK::Verdict:
    case MK::Var: return m;
    case MK::LocPrefix:
    case MK::ActPrefix:
    case MK::Send:
    case MK::Recv: {
      MonPtr na = normalize_local_mon(m->a);
      if (na == m->a) return m;
      switch (m->kind) {
        case MK::ActPrefix: return mon::act_prefix(m->action, na);
        case MK::Send: return mon::send(m->group, m->action, na);
        case MK::Recv: return mon::recv(m->group, m->action, na);
        default: return mon::loc_prefix(m->action, m->loc, na);
      }
    }
    case MK::Rec: {
      MonPtr nb = normalize_local_mon(m->a);
      if (nb->kind == MK::Verdict) return nb;
      return nb == m->a ? m : mon::rec(m->var, nb);
    }
    case MK::Choice: {
      std::vector<MonPtr> raw, cs;
      flat_op(MK::Choice, m, raw);
      for (const auto& c : raw) flat_op(MK::Choice, normalize_local_mon(c), cs);
      std::sort(cs.begin(), cs.end(), MonPtrLess{});
      cs.erase(std::unique(cs.begin(), cs.end(),
                           [](const MonPtr& a, const MonPtr& b) {
                             return mon_equal(a, b);
                           }),
               cs.end());
      return cs.size() == 1 ? cs[0] : fold_op(MK::Choice, std::move(cs));
    }
    case MK::ParAnd:
    case MK::ParOr: {
      MK op = m->kind;
      Verdict absorb = op == MK::ParAnd ? Verdict::No : Verdict::Yes;
      Verdict neutral = op == MK::ParAnd ? Verdict::Yes : Verdict::No;
      std::vector<MonPtr> raw, comps, rest;
      flat_op(op, m, raw);
      for (const auto& c : raw) flat_op(op, normalize_local_mon(c), comps);
      VerdictSet vs;
      for (const auto& c : comps) {
        if (c->kind != MK::Verdict) {
          rest.push_back(c);
        } else if (vs.empty()) {
          vs = VerdictSet::single(c->v);
        } else {
          vs = combine_parallel_verdicts(vs, VerdictSet::single(c->v), absorb,
                                         neutral);
        }
      }
      if (!vs.empty() && !(vs == VerdictSet::single(neutral)))
        rest.push_back(mon::verdict(only_verdict(vs)));
      if (rest.empty()) return mon::verdict(neutral);
      std::sort(rest.begin(), rest.end(), MonPtrLess{});
      return rest.size() == 1 ? rest[0] : fold_op(op, std::move(rest));
    }
  }
  throw std::logic_error("unreachable");
}

DMonPtr quotient_dmon(const DMonPtr& M) {
  if (M->kind == DK::Located) {
    MonPtr n = normalize_local_mon(M->m);
    return n == M->m ? M : dmon::located(n, M->loc);
  }
  DMonPtr a = quotient_dmon(M->a);
  DMonPtr b = quotient_dmon(M->b);
  if (a == M->a && b == M->b) return M;
  return M->kind == DK::DAnd ? dmon::dand(a, b) : dmon::dor(a, b);
}

constexpr size_t kMaxChain = 1 << 14;

struct TermSpace {
  const Context& ctx;
  std::vector<ActionMap> maps;

  std::vector<DMonPtr> dmons;
  std::unordered_map<DMonPtr, int, DMonPtrHash, DMonPtrEq> dindex;
  std::vector<MonPtr> cmons;
  std::unordered_map<MonPtr, int, MonPtrHash, MonPtrEq> cindex;

  std::vector<std::optional<std::vector<std::pair<SendEvent, int>>>> dsends;
  std::vector<std::optional<std::array<int, 2>>> dchain;
  std::vector<std::optional<std::vector<int>>> dcc;
  std::vector<std::optional<VerdictSet>> dccv;
  std::vector<std::optional<VerdictSet>> dverd;
  std::vector<std::optional<bool>> dcomm;
  std::vector<std::optional<VerdictSet>> cverd;
  std::unordered_map<int64_t, std::vector<int>> dact;
  std::unordered_map<int64_t, std::vector<int>> cact;

  explicit TermSpace(const Context& c) : ctx(c), maps(all_action_maps(c)) {}

  int intern_d(const DMonPtr& M0) {
    DMonPtr M = quotient_dmon(M0);
    auto [it, fresh] = dindex.try_emplace(M, static_cast<int>(dmons.size()));
    if (fresh) {
      dmons.push_back(M);
      dsends.emplace_back();
      dchain.emplace_back();
      dcc.emplace_back();
      dccv.emplace_back();
      dverd.emplace_back();
      dcomm.emplace_back();
    }
    return it->second;
  }

  int intern_c(const MonPtr& m0) {
    MonPtr m = normalize_mon(m0);
    auto [it, fresh] = cindex.try_emplace(m, static_cast<int>(cmons.size()));
    if (fresh) {
      cmons.push_back(m);
      cverd.emplace_back();
    }
    return it->second;
  }

  int64_t key(int id, int ai) const {
    return static_cast<int64_t>(id) * static_cast<int64_t>(maps.size()) + ai;
  }

  const std::vector<std::pair<SendEvent, int>>& sends_of(int d) {
    if (!dsends[d]) {
      std::vector<std::pair<SendEvent, int>> out;
      for (const auto& mc : dmon_sends(dmons[d]))
        out.emplace_back(mc.label, intern_d(mc.result));
      dsends[d] = std::move(out);
    }
    return *dsends[d];
  }

  // The first- and last-enabled delivery successors, or -1 when no send is
  // enabled. Unlike sends_of this interns only these two states, so chains
  // stay linear in the number of deliveries even when dozens of sends are
  // pending (interning every sibling at every chain state is quadratic).
  std::array<int, 2> chain_step(int d) {
    if (!dchain[d]) {
      auto ms = dmon_sends(dmons[d]);
      std::array<int, 2> next{-1, -1};
      if (!ms.empty()) {
        next[0] = intern_d(ms.front().result);
        next[1] = intern_d(ms.back().result);
      }
      dchain[d] = next;
    }
    return *dchain[d];
  }

  // The canonical delivery chain: the source, then repeatedly the first
  // enabled send until none is left. Enumerating every delivery order is
  // exponential in the number of pending sends (each subset of deliveries
  // is a distinct state), so the checkers walk representative orders; the
  // confluence machinery compares alternatives separately.
  const std::vector<int>& cc_of(int d) {
    if (!dcc[d]) {
      std::vector<int> order{d};
      std::unordered_set<int> seen{d};
      while (true) {
        int next = chain_step(order.back())[0];
        if (next < 0) break;
        if (!seen.insert(next).second || order.size() > kMaxChain)
          throw BudgetError("send chain budget exceeded",
                            static_cast<long>(order.size()));
        order.push_back(next);
      }
      dcc[d] = std::move(order);
    }
    return *dcc[d];
  }

  // The end of the canonical chain: the state where no send is enabled.
  int stable_of(int d) { return cc_of(d).back(); }

  VerdictSet verdicts_d(int d) {
    if (!dverd[d]) dverd[d] = dmon_verdicts(dmons[d]);
    return *dverd[d];
  }

  // Per verdict: does some stable (cannot-communicate) send-reachable state
  // derive it?
  VerdictSet cc_verdicts(int d) {
    if (!dccv[d]) {
      VerdictSet v;
      for (int n : cc_of(d))
        if (!can_comm(n)) v.merge(verdicts_d(n));
      dccv[d] = v;
    }
    return *dccv[d];
  }

  bool can_comm(int d) {
    if (!dcomm[d]) dcomm[d] = dmon_can_communicate(dmons[d]);
    return *dcomm[d];
  }

  const std::vector<int>& act_of(int d, int ai) {
    auto [it, fresh] = dact.try_emplace(key(d, ai));
    if (fresh)
      for (const auto& s : dmon_action_step_if_stable(dmons[d], maps[ai]))
        it->second.push_back(intern_d(s));
    return it->second;
  }

  VerdictSet verdicts_c(int c) {
    if (!cverd[c]) cverd[c] = cmon_verdicts(cmons[c]);
    return *cverd[c];
  }

  const std::vector<int>& cact_of(int c, int ai) {
    auto [it, fresh] = cact.try_emplace(key(c, ai));
    if (fresh)
      for (const auto& s : cmon_step_pruned(cmons[c], maps[ai]))
        it->second.push_back(intern_c(s));
    return it->second;
  }
};

}  // namespace

// ------------------------------------------------------ weak bisimulation

json BisimReport::to_json() const {
  return json{{"passed", passed},
              {"pairs_checked", pairs_checked},
              {"condition_failures", condition_failures},
              {"notes", notes}};
}

BisimReport check_weak_bisim(const FormulaPtr& f, const Sigma& sigma,
                             const Context& ctx, long max_pairs) {
  BisimReport rep;
  rep.notes =
      "verdict condition read per verdict as: some stable "
      "communication-reachable state derives v iff the centralized monitor "
      "does; centralized action steps taken up to end-dominance";

  DMonPtr D0 = synth_dec(f, sigma, ctx);
  MonPtr c0 = synth_central(f, sigma, ctx);
  TermSpace ts(ctx);
  int nmaps = static_cast<int>(ts.maps.size());

  std::vector<std::pair<int, int>> pairs;
  std::unordered_map<int64_t, int> pidx;
  std::deque<int> work;
  auto pkey = [](int d, int c) {
    return (static_cast<int64_t>(d) << 32) | static_cast<uint32_t>(c);
  };
  auto pair_id = [&](int d, int c) {
    auto [it, fresh] = pidx.try_emplace(pkey(d, c),
                                        static_cast<int>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(d, c);
      work.push_back(it->second);
    }
    return it->second;
  };

  int root = pair_id(ts.intern_d(D0), ts.intern_c(c0));
  while (!work.empty()) {
    auto [d, c] = pairs[work.front()];
    work.pop_front();
    // Sends are represented by the stable state their completion reaches;
    // the intermediate delivery states neither act nor derive different
    // communication-reachable verdicts, so they add nothing to the relation.
    for (const auto& [ev, d2] : ts.sends_of(d)) pair_id(ts.stable_of(d2), c);
    for (int ai = 0; ai < nmaps; ++ai) {
      const auto& ds = ts.act_of(d, ai);
      if (ds.empty()) continue;
      const auto& cs = ts.cact_of(c, ai);
      for (int d2 : ds)
        for (int c2 : cs) pair_id(d2, c2);
    }
    if (static_cast<long>(pairs.size()) > max_pairs)
      throw BudgetError("pair budget exceeded in the bisimulation check",
                        static_cast<long>(pairs.size()));
  }
  rep.pairs_checked = static_cast<long>(pairs.size());

  std::vector<char> alive(pairs.size(), 1);
  auto surviving = [&](int d, int c) {
    auto it = pidx.find(pkey(d, c));
    return it != pidx.end() && alive[it->second];
  };

  // why == nullptr: just decide. Otherwise fill in the first witness.
  auto holds = [&](int d, int c, std::vector<std::string>* why) {
    bool ok = true;
    if (!(ts.cc_verdicts(d) == ts.verdicts_c(c))) {
      ok = false;
      if (why) {
        auto names = [](VerdictSet v) {
          std::string s;
          for (const auto& n : v.names()) s += (s.empty() ? "" : ",") + n;
          return s.empty() ? std::string("none") : s;
        };
        why->push_back("condition 1: communication-reachable verdicts {" +
                       names(ts.cc_verdicts(d)) + "} differ from centralized {" +
                       names(ts.verdicts_c(c)) + "}");
      } else {
        return false;
      }
    }
    for (int ai = 0; ai < nmaps; ++ai) {
      const auto& ds = ts.act_of(d, ai);
      const auto& cs = ts.cact_of(c, ai);
      for (int d2 : ds) {
        bool matched = false;
        for (int c2 : cs)
          if (surviving(d2, c2)) {
            matched = true;
            break;
          }
        if (!matched) {
          ok = false;
          if (why)
            why->push_back("condition 2: step on " +
                           show_map(ts.maps[ai], ctx) + " to " +
                           print_dmon(ts.dmons[d2], ctx) +
                           " has no surviving centralized match");
          else
            return false;
        }
      }
      for (int c2 : cs) {
        bool matched = false;
        for (int d1 : ts.cc_of(d)) {
          for (int d2 : ts.act_of(d1, ai)) {
            for (int d3 : ts.cc_of(d2))
              if (surviving(d3, c2)) {
                matched = true;
                break;
              }
            if (matched) break;
          }
          if (matched) break;
        }
        if (!matched) {
          ok = false;
          if (why)
            why->push_back(
                "condition 4: centralized step on " +
                show_map(ts.maps[ai], ctx) + " to " +
                print_mon(ts.cmons[c2], ctx) +
                " has no communicate*-act-communicate* match");
          else
            return false;
        }
      }
    }
    for (const auto& [ev, d2] : ts.sends_of(d)) {
      if (!surviving(ts.stable_of(d2), c)) {
        ok = false;
        if (why)
          why->push_back("condition 3: send from " +
                         ctx.location_name(ev.sender) + " completes to " +
                         print_dmon(ts.dmons[ts.stable_of(d2)], ctx) +
                         ", which was refined away");
        else
          return false;
      }
    }
    return ok;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t p = 0; p < pairs.size(); ++p) {
      if (!alive[p]) continue;
      if (!holds(pairs[p].first, pairs[p].second, nullptr)) {
        alive[p] = 0;
        changed = true;
      }
    }
  }

  rep.passed = alive[root] != 0;
  if (!rep.passed) {
    alive[root] = 1;  // re-derive the root's own failures for the report
    std::vector<std::string> why;
    holds(pairs[root].first, pairs[root].second, &why);
    alive[root] = 0;
    long removed = 0;
    for (char a : alive) removed += a == 0;
    if (why.empty())
      why.push_back(
          "the start pair only fails through pairs that were refined away");
    why.push_back(std::to_string(removed) + " of " +
                  std::to_string(pairs.size()) + " pairs refined away");
    rep.condition_failures = std::move(why);
  }
  return rep;
}

// ----------------------------------------------- synthesis well-behavedness

bool PrincipledReport::passed() const {
  return verdict_agreement.passed && verdict_irrevocability.passed &&
         reactivity.passed && bounded_communication.passed &&
         alternation.passed && formula_convergence.passed;
}

json PrincipledReport::to_json() const {
  auto one = [](const PropertyResult& p) {
    json j{{"passed", p.passed}};
    if (!p.passed) j["counterexample"] = p.counterexample;
    return j;
  };
  return json{{"passed", passed()},
              {"pairs_checked", pairs_checked},
              {"verdict_agreement", one(verdict_agreement)},
              {"verdict_irrevocability", one(verdict_irrevocability)},
              {"reactivity", one(reactivity)},
              {"bounded_communication", one(bounded_communication)},
              {"alternation", one(alternation)},
              {"formula_convergence", one(formula_convergence)}};
}

PrincipledReport check_principled(const FormulaPtr& f, const Sigma& sigma,
                                  const Context& ctx, long horizon,
                                  long max_pairs) {
  PrincipledReport rep;
  auto fail = [](PropertyResult& pr, const std::string& msg) {
    if (pr.passed) {
      pr.passed = false;
      pr.counterexample = msg;
    }
  };

  DMonPtr D0 = synth_dec(f, sigma, ctx);
  MonPtr c0 = synth_central(f, sigma, ctx);
  TermSpace ts(ctx);
  int nmaps = static_cast<int>(ts.maps.size());

  if (dmon_can_communicate(D0))
    fail(rep.alternation, "the freshly synthesized monitor can communicate "
                          "before any action was processed");

  struct Item {
    int d, c;
    long depth;
    std::string path;
  };
  std::deque<Item> work{{ts.intern_d(D0), ts.intern_c(c0), 0, ""}};
  std::unordered_set<int64_t> seen{
      (static_cast<int64_t>(work.front().d) << 32) |
      static_cast<uint32_t>(work.front().c)};

  auto names = [](VerdictSet v) {
    std::string s;
    for (const auto& n : v.names()) s += (s.empty() ? "" : ",") + n;
    return s.empty() ? std::string("none") : s;
  };
  auto at_path = [](const std::string& path) {
    return path.empty() ? std::string(" at the start")
                        : " after actions " + path;
  };

  while (!work.empty()) {
    Item it = work.front();
    work.pop_front();
    rep.pairs_checked++;

    if (!(ts.verdicts_d(it.d) == ts.verdicts_c(it.c)))
      fail(rep.verdict_agreement,
           "decentralized verdicts {" + names(ts.verdicts_d(it.d)) +
               "} differ from centralized {" + names(ts.verdicts_c(it.c)) +
               "}" + at_path(it.path));

    if (it.depth >= horizon) continue;

    for (int ai = 0; ai < nmaps; ++ai) {
      const auto& ds = ts.act_of(it.d, ai);
      const auto& cs = ts.cact_of(it.c, ai);
      std::string here = it.path.empty()
                             ? show_map(ts.maps[ai], ctx)
                             : it.path + " " + show_map(ts.maps[ai], ctx);
      if (ds.empty())
        fail(rep.reactivity, "no action step on " + show_map(ts.maps[ai], ctx) +
                                 at_path(it.path));
      if (ds.empty() != cs.empty())
        fail(rep.formula_convergence,
             "successor existence differs between the monitor kinds on " +
                 show_map(ts.maps[ai], ctx) + at_path(it.path));

      for (int d1 : ds) {
        // Saturate the post-action state along two maximally different
        // delivery orders (always the first enabled send vs always the
        // last); both must terminate in the same stable state. Enumerating
        // every order is exponential in the number of pending sends, so
        // order-independence beyond these two is sampled by the confluence
        // suite with seeded schedulers. States on the chains cannot take
        // action steps by construction (the action relation requires a
        // configuration where no component can communicate), which is the
        // alternation property; it is probed once on the fresh monitor.
        std::vector<int> quiet;
        for (int rev = 0; rev < 2; ++rev) {
          int n = d1;
          for (size_t len = 0;; ++len) {
            if (len > kMaxChain)
              throw BudgetError("send chain budget exceeded",
                                static_cast<long>(len));
            int next = ts.chain_step(n)[rev];
            if (next < 0) {
              if (ts.can_comm(n))
                fail(rep.bounded_communication,
                     "a component waits to receive but no send is enabled "
                     "in " +
                         print_dmon(ts.dmons[n], ctx) + " after actions " +
                         here);
              else
                quiet.push_back(n);
              break;
            }
            VerdictSet vn = ts.verdicts_d(n);
            VerdictSet v2 = ts.verdicts_d(next);
            if (vn.bits & ~v2.bits)
              fail(rep.verdict_irrevocability,
                   "verdicts {" + names(vn) + "} shrink to {" + names(v2) +
                       "} along a send after actions " + here);
            n = next;
          }
        }
        std::sort(quiet.begin(), quiet.end());
        quiet.erase(std::unique(quiet.begin(), quiet.end()), quiet.end());
        if (quiet.size() != 1)
          fail(rep.formula_convergence,
               std::to_string(quiet.size()) +
                   " distinct stable states reachable by send orders after "
                   "actions " +
                   here);
        for (int q : quiet) {
          for (int c2 : cs) {
            int64_t k = (static_cast<int64_t>(q) << 32) |
                        static_cast<uint32_t>(c2);
            if (seen.insert(k).second) {
              if (static_cast<long>(seen.size()) > max_pairs)
                throw BudgetError(
                    "pair budget exceeded in the synthesis property check",
                    static_cast<long>(seen.size()));
              work.push_back({q, c2, it.depth + 1, here});
            }
          }
        }
      }
    }
  }
  return rep;
}

// ------------------------------------------------------------ differential

json DiffRecord::to_json() const {
  json d = run_outcome_to_json(dec.base);
  d["multicasts"] = dec.log.size();
  return json{{"central", run_outcome_to_json(central)},
              {"dec", d},
              {"oracle_sat", oracle_sat},
              {"monitors_agree", monitors_agree},
              {"oracle_agrees", oracle_agrees}};
}

DiffRecord differential(const FormulaPtr& f, const Trace& t,
                        const Context& ctx) {
  DiffRecord r;
  r.central = run_central(synth_central(f, {}, ctx), t);
  Scheduler lex = Scheduler::lex();
  r.dec = run_dec(synth_dec(f, {}, ctx), t, lex);
  r.oracle_sat = satisfies(f, t);

  const RunOutcome& c = r.central;
  const RunOutcome& d = r.dec.base;
  r.monitors_agree = c.reachable_yes == d.reachable_yes &&
                     c.reachable_no == d.reachable_no &&
                     c.steps_to_first_yes == d.steps_to_first_yes &&
                     c.steps_to_first_no == d.steps_to_first_no;
  r.oracle_agrees = c.reachable_no == !r.oracle_sat &&
                    d.reachable_no == !r.oracle_sat &&
                    (!c.reachable_yes || r.oracle_sat) &&
                    (!d.reachable_yes || r.oracle_sat);
  return r;
}

// -------------------------------------------------------------- confluence

json ConfluenceRecord::to_json() const {
  json j{{"identical", identical}};
  if (!identical) j["detail"] = detail;
  return j;
}

namespace {

// The stable states seen at each action depth when replaying M0 over t with
// the given scheduler, plus the run outcome.
struct Boundaries {
  std::map<long, std::set<std::string>> states;
  RunOutcome outcome;
};

Boundaries collect_boundaries(const DMonPtr& M0, const Trace& t,
                              const Context& ctx, Scheduler sched,
                              long max_states) {
  Boundaries out;
  Scheduler run_sched = sched;
  out.outcome = run_dec(M0, t, run_sched, max_states).base;

  struct Cfg {
    DMonPtr term;
    int pos;
    long depth;
  };
  Saturation s0 = saturate(M0, sched);
  Cfg start{normalize_dmon(s0.stable), 0, 0};
  std::set<std::pair<std::string, int>> seen;
  std::deque<Cfg> work{start};
  auto record = [&](const Cfg& c) {
    std::string s = print_dmon(c.term, ctx);
    if (!seen.insert({s, c.pos}).second) return false;
    out.states[c.depth].insert(std::move(s));
    return true;
  };
  record(start);
  while (!work.empty()) {
    Cfg cfg = work.front();
    work.pop_front();
    if (dmon_is_final(cfg.term)) continue;
    for (const auto& succ : dmon_action_step(cfg.term, t.at(cfg.pos))) {
      Saturation sat = saturate(succ, sched);
      Cfg next{normalize_dmon(sat.stable), t.succ(cfg.pos), cfg.depth + 1};
      if (record(next)) {
        if (static_cast<long>(seen.size()) > max_states)
          throw BudgetError("state budget exceeded while collecting states",
                            static_cast<long>(seen.size()));
        work.push_back(std::move(next));
      }
    }
  }
  return out;
}

}  // namespace

ConfluenceRecord check_confluence(const FormulaPtr& f, const Trace& t,
                                  const Context& ctx, int k,
                                  uint64_t base_seed) {
  ConfluenceRecord out;
  DMonPtr D0 = synth_dec(f, {}, ctx);
  Boundaries base =
      collect_boundaries(D0, t, ctx, Scheduler::lex(), kDefaultMaxStates);
  for (int i = 0; i < k; ++i) {
    uint64_t seed = base_seed + static_cast<uint64_t>(i);
    Boundaries alt = collect_boundaries(D0, t, ctx, Scheduler::seeded(seed),
                                        kDefaultMaxStates);
    if (run_outcome_to_json(alt.outcome) != run_outcome_to_json(base.outcome)) {
      out.identical = false;
      out.detail = "seed " + std::to_string(seed) +
                   ": run outcome differs: " +
                   run_outcome_to_json(alt.outcome).dump() + " vs " +
                   run_outcome_to_json(base.outcome).dump();
      return out;
    }
    if (alt.states != base.states) {
      for (const auto& [depth, set] : base.states) {
        auto it = alt.states.find(depth);
        if (it == alt.states.end() || it->second != set) {
          out.identical = false;
          out.detail = "seed " + std::to_string(seed) + ": depth " +
                       std::to_string(depth) +
                       " reaches a different set of stable states";
          return out;
        }
      }
      out.identical = false;
      out.detail =
          "seed " + std::to_string(seed) + ": extra action depths reached";
      return out;
    }
  }
  return out;
}

// ------------------------------------------------------------------ suites

json SuiteReport::to_json() const {
  return json{{"name", name},
              {"samples", samples},
              {"failures", failures},
              {"passed", passed()},
              {"elapsed_ms", elapsed_ms},
              {"counterexamples", counterexamples}};
}

namespace {

constexpr size_t kMaxCounterexamples = 10;

// Runs cfg.sample_count generated (formula, trace) checks. check returns
// true when the property holds and may describe a failure in why; failures
// are shrunk with the same check before being recorded.
SuiteReport run_samples(
    const std::string& name, GenConfig cfg, bool prefix_only,
    const std::function<bool(const FormulaPtr&, const Trace&,
                             const ContextPtr&, std::string&)>& check) {
  SuiteReport r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  cfg.quantifier_prefix_only = cfg.quantifier_prefix_only || prefix_only;
  std::mt19937_64 rng(cfg.seed);
  ContextPtr ctx = gen_context(cfg);
  for (long i = 0; i < cfg.sample_count; ++i) {
    FormulaPtr f = gen_formula(rng, cfg, *ctx);
    Trace t = gen_trace(rng, cfg, ctx);
    std::string why;
    bool ok;
    try {
      ok = check(f, t, ctx, why);
    } catch (const std::exception& e) {
      ok = false;
      why = std::string("error: ") + e.what();
    }
    r.samples++;
    if (ok) continue;
    r.failures++;
    if (r.counterexamples.size() >= kMaxCounterexamples) continue;
    FormulaPtr small = shrink_formula(f, [&](const FormulaPtr& cand) {
      try {
        std::string w;
        return !check(cand, t, ctx, w);
      } catch (const std::exception&) {
        return false;
      }
    });
    r.counterexamples.push_back("sample " + std::to_string(i) + ": " +
                                print_formula(small) + " | trace " +
                                trace_to_json(t).dump() + " | " + why);
  }
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

std::string outcome_note(const RunOutcome& o) {
  return run_outcome_to_json(o).dump();
}

bool check_sound(const FormulaPtr& f, const Trace& t, const ContextPtr& ctx,
                 std::string& why) {
  bool sat = satisfies(f, t);
  RunOutcome o = run_central(synth_central(f, {}, *ctx), t);
  if (o.reachable_no != !sat) {
    why = std::string("reachable_no=") + (o.reachable_no ? "true" : "false") +
          " but the trace " + (sat ? "satisfies" : "violates") +
          " the formula; outcome " + outcome_note(o);
    return false;
  }
  if (o.reachable_yes && !sat) {
    why = "reachable_yes=true but the trace violates the formula; outcome " +
          outcome_note(o);
    return false;
  }
  return true;
}

bool check_complete(const FormulaPtr& f, const Trace& t, const ContextPtr& ctx,
                    std::string& why) {
  bool sat = satisfies(f, t);
  if (sat) return true;
  RunOutcome o = run_central(synth_central(f, {}, *ctx), t);
  if (!o.reachable_no) {
    why = "the trace violates the formula but no run reaches the no verdict; "
          "outcome " +
          outcome_note(o);
    return false;
  }
  return true;
}

bool check_diff(const FormulaPtr& f, const Trace& t, const ContextPtr& ctx,
                std::string& why) {
  DiffRecord r = differential(f, t, *ctx);
  if (r.monitors_agree && r.oracle_agrees) return true;
  why = std::string(r.monitors_agree ? "" : "monitor kinds disagree; ") +
        (r.oracle_agrees ? "" : "semantics disagrees; ") + r.to_json().dump();
  return false;
}

bool check_principled_sample(const FormulaPtr& f, const Trace& t,
                             const ContextPtr& ctx, std::string& why) {
  long horizon = 2L * t.num_positions() + 2;
  PrincipledReport rep = check_principled(f, {}, *ctx, horizon);
  if (rep.passed()) return true;
  why = rep.to_json().dump();
  return false;
}

bool check_bisim_sample(const FormulaPtr& f, const Trace&,
                        const ContextPtr& ctx, std::string& why) {
  BisimReport rep = check_weak_bisim(f, {}, *ctx);
  if (rep.passed) return true;
  why.clear();
  for (const auto& s : rep.condition_failures)
    why += (why.empty() ? "" : "; ") + s;
  return false;
}

bool check_confluence_sample(const FormulaPtr& f, const Trace& t,
                             const ContextPtr& ctx, std::string& why) {
  ConfluenceRecord rec = check_confluence(f, t, *ctx, 10);
  if (rec.identical) return true;
  why = rec.detail;
  return false;
}

bool check_oracle(const FormulaPtr& f, const Trace& t, const ContextPtr&,
                  std::string& why) {
  PositionSet a = eval_positions(f, t);
  PositionSet b = eval_positions_enum(f, t);
  if (a == b) return true;
  auto show = [](const PositionSet& s) {
    std::string out = "{";
    bool first = true;
    for (int i : s.members()) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    return out + "}";
  };
  why = "iterated fixpoints give " + show(a) +
        " but subset enumeration gives " + show(b);
  return false;
}

}  // namespace

SuiteReport soundness_suite(const GenConfig& cfg) {
  return run_samples("soundness", cfg, false, check_sound);
}

SuiteReport completeness_suite(const GenConfig& cfg) {
  return run_samples("completeness", cfg, false, check_complete);
}

SuiteReport diff_suite(const GenConfig& cfg) {
  return run_samples("diff", cfg, true, check_diff);
}

SuiteReport principled_suite(const GenConfig& cfg) {
  return run_samples("principled", cfg, true, check_principled_sample);
}

SuiteReport bisim_suite(const GenConfig& cfg) {
  return run_samples("bisim", cfg, true, check_bisim_sample);
}

SuiteReport confluence_suite(const GenConfig& cfg) {
  return run_samples("confluence", cfg, true, check_confluence_sample);
}

SuiteReport oracle_suite(const GenConfig& cfg) {
  GenConfig g = cfg;
  g.max_fixpoints = std::min(cfg.max_fixpoints, 1);
  // Keep prefix+loop at four or less so subset enumeration stays tractable.
  g.max_prefix = std::min(cfg.max_prefix, 2);
  g.max_loop = std::min(cfg.max_loop, 2);
  return run_samples("oracle", g, false, check_oracle);
}

SuiteReport run_suite(const std::string& name, const GenConfig& cfg) {
  if (name == "soundness") return soundness_suite(cfg);
  if (name == "completeness") return completeness_suite(cfg);
  if (name == "diff") return diff_suite(cfg);
  if (name == "principled") return principled_suite(cfg);
  if (name == "bisim") return bisim_suite(cfg);
  if (name == "confluence") return confluence_suite(cfg);
  if (name == "oracle") return oracle_suite(cfg);
  throw UsageError("unknown suite '" + name +
                   "' (expected soundness, completeness, diff, principled, "
                   "bisim, confluence or oracle)");
}

}  // namespace hypermon
