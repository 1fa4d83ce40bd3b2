#include "hypermon/central.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace hypermon {

namespace {

MonPtr synth_rec(const FormulaPtr& f, const Sigma& sigma, const Context& ctx) {
  switch (f->kind) {
    case FK::True: return mon::yes();
    case FK::False: return mon::no();
    case FK::Var: return mon::var(f->var);
    case FK::Max: return mon::rec(f->var, synth_rec(f->a, sigma, ctx));
    case FK::Min:
      throw UsageError("least fixed point not monitorable");
    case FK::And:
      return mon::par_and(synth_rec(f->a, sigma, ctx),
                          synth_rec(f->b, sigma, ctx));
    case FK::Or:
      return mon::par_or(synth_rec(f->a, sigma, ctx),
                         synth_rec(f->b, sigma, ctx));
    case FK::Forall:
    case FK::Exists: {
      bool all = f->kind == FK::Forall;
      MonPtr acc;
      for (LocationId l = 0; l < ctx.num_locations(); ++l) {
        Sigma sigma2 = sigma;
        sigma2[f->var] = l;
        MonPtr part = synth_rec(f->a, sigma2, ctx);
        acc = !acc       ? part
              : all      ? mon::par_and(acc, part)
                         : mon::par_or(acc, part);
      }
      return acc;
    }
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
      LocationId l = it->second;
      // Matching action continues; every other action settles the modality:
      // vacuously true for a box, false for a diamond.
      MonPtr other =
          f->kind == FK::Box ? mon::yes() : mon::no();
      MonPtr sum = mon::loc_prefix(a, l, synth_rec(f->a, sigma, ctx));
      for (Action b = 0; b < ctx.num_actions(); ++b)
        if (b != a) sum = mon::choice(sum, mon::loc_prefix(b, l, other));
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

MonPtr synth_central(const FormulaPtr& f, const Sigma& sigma,
                     const Context& ctx) {
  if (!classify(f).count(Fragment::HyperMaxHML))
    throw UsageError("least fixed point not monitorable");
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
  return synth_rec(f, sigma, ctx);
}

namespace {

void dedup_sort(std::vector<MonPtr>& v) {
  std::sort(v.begin(), v.end(), MonPtrLess{});
  v.erase(std::unique(v.begin(), v.end(),
                      [](const MonPtr& a, const MonPtr& b) {
                        return mon_equal(a, b);
                      }),
          v.end());
}

// Drops end alternatives that sit next to a non-end alternative; see
// cmon_step_pruned.
void prune_dominated(std::vector<MonPtr>& v) {
  bool has_other = false;
  for (const auto& m : v)
    if (!(m->kind == MK::Verdict && m->v == Verdict::End)) {
      has_other = true;
      break;
    }
  if (!has_other) return;
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](const MonPtr& m) {
                           return m->kind == MK::Verdict &&
                                  m->v == Verdict::End;
                         }),
          v.end());
}

std::vector<MonPtr> step_rec(const MonPtr& m, const ActionMap& A, bool prune) {
  std::vector<MonPtr> out;
  switch (m->kind) {
    case MK::Verdict: out.push_back(m); break;
    case MK::LocPrefix: {
      if (m->loc < 0 || m->loc >= static_cast<int>(A.size()))
        throw UsageError("monitor watches a location outside the trace");
      out.push_back(A[m->loc] == m->action ? m->a : mon::end());
      break;
    }
    case MK::Choice: {
      out = step_rec(m->a, A, prune);
      auto r = step_rec(m->b, A, prune);
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case MK::ParAnd:
    case MK::ParOr: {
      auto sa = step_rec(m->a, A, prune);
      auto sb = step_rec(m->b, A, prune);
      for (const auto& x : sa)
        for (const auto& y : sb)
          out.push_back(m->kind == MK::ParAnd ? mon::par_and(x, y)
                                              : mon::par_or(x, y));
      break;
    }
    case MK::Rec:
      out = step_rec(substitute_mon(m->a, m->var, m), A, prune);
      break;
    case MK::Var:
      throw UsageError("cannot step an open monitor term");
    case MK::ActPrefix:
    case MK::Send:
    case MK::Recv:
      throw UsageError("not a centralized monitor term");
  }
  dedup_sort(out);
  if (prune) prune_dominated(out);
  return out;
}

}  // namespace

std::vector<MonPtr> cmon_step(const MonPtr& m, const ActionMap& A) {
  return step_rec(m, A, false);
}

std::vector<MonPtr> cmon_step_pruned(const MonPtr& m, const ActionMap& A) {
  return step_rec(m, A, true);
}

VerdictSet cmon_verdicts(const MonPtr& m) {
  auto bad = check_guarded_mon(m);
  if (!bad.empty())
    throw UsageError("verdict evaluation on unguarded monitor: " + bad.front());
  return mon_verdicts(m);
}

json run_outcome_to_json(const RunOutcome& r) {
  json j;
  j["reachable_yes"] = r.reachable_yes;
  j["reachable_no"] = r.reachable_no;
  j["steps_to_first_yes"] =
      r.steps_to_first_yes ? json(*r.steps_to_first_yes) : json(nullptr);
  j["steps_to_first_no"] =
      r.steps_to_first_no ? json(*r.steps_to_first_no) : json(nullptr);
  j["explored_states"] = r.explored_states;
  j["ambiguous_verdicts"] = r.ambiguous_verdicts;
  return j;
}

namespace {

struct Config {
  MonPtr term;
  int pos;
};
struct ConfigHash {
  size_t operator()(const Config& c) const {
    return c.term->hash * 1000003u + static_cast<size_t>(c.pos);
  }
};
struct ConfigEq {
  bool operator()(const Config& a, const Config& b) const {
    return a.pos == b.pos && mon_equal(a.term, b.term);
  }
};

}  // namespace

RunOutcome run_central(const MonPtr& m, const Trace& t, long max_states) {
  auto bad = check_guarded_mon(m);
  if (!bad.empty()) throw UsageError("cannot run unguarded monitor: " + bad.front());
  if (!free_mon_vars(m).empty())
    throw UsageError("cannot run an open monitor term");

  RunOutcome out;
  std::unordered_set<Config, ConfigHash, ConfigEq> seen;
  std::deque<std::pair<Config, long>> queue;
  Config start{normalize_mon_run(m), 0};
  seen.insert(start);
  queue.push_back({start, 0});

  while (!queue.empty()) {
    auto [cfg, depth] = queue.front();
    queue.pop_front();

    VerdictSet v = mon_verdicts(cfg.term);
    if (v.size() > 1) out.ambiguous_verdicts = true;
    if (v.has(Verdict::Yes)) {
      out.reachable_yes = true;
      if (!out.steps_to_first_yes) out.steps_to_first_yes = depth;
    }
    if (v.has(Verdict::No)) {
      out.reachable_no = true;
      if (!out.steps_to_first_no) out.steps_to_first_no = depth;
    }
    // A lone verdict stays a verdict forever; no need to expand it.
    if (cfg.term->kind == MK::Verdict) continue;

    for (const auto& succ : cmon_step_pruned(cfg.term, t.at(cfg.pos))) {
      Config next{normalize_mon_run(succ), t.succ(cfg.pos)};
      if (seen.insert(next).second) {
        if (static_cast<long>(seen.size()) > max_states)
          throw BudgetError("state budget exceeded in run_central",
                            static_cast<long>(seen.size()));
        queue.push_back({next, depth + 1});
      }
    }
  }
  out.explored_states = static_cast<long>(seen.size());
  return out;
}

}  // namespace hypermon
