#pragma once
// Decentralized monitors: local monitors pinned to locations and composed
// with /\ and \/. Local monitors see only their own location's actions and
// exchange what they saw through multicast messages: !{G}:c sends constant c
// to the locations in G, ?{G}:c receives c from a sender in G. Between two
// trace actions a decentralized monitor first drains all enabled sends
// (saturation); components that can still communicate must not take trace
// actions.
//
// Concrete syntax: [m]@l composed with /\ and \/ (/\ binds tighter).

#include <random>
#include <set>
#include <utility>

#include "hypermon/central.hpp"
#include "hypermon/terms.hpp"

namespace hypermon {

enum class DK { Located, DAnd, DOr };

struct DMon;
using DMonPtr = std::shared_ptr<const DMon>;

struct DMon {
  DK kind;
  MonPtr m;             // Located
  LocationId loc = -1;  // Located
  DMonPtr a, b;
  size_t hash = 0;
};

namespace dmon {
DMonPtr located(MonPtr m, LocationId l);
DMonPtr dand(DMonPtr a, DMonPtr b);
DMonPtr dor(DMonPtr a, DMonPtr b);
}  // namespace dmon

bool dmon_equal(const DMonPtr& a, const DMonPtr& b);
int dmon_cmp(const DMonPtr& a, const DMonPtr& b);

struct DMonPtrHash {
  size_t operator()(const DMonPtr& m) const { return m->hash; }
};
struct DMonPtrEq {
  bool operator()(const DMonPtr& a, const DMonPtr& b) const {
    return dmon_equal(a, b);
  }
};

std::string print_dmon(const DMonPtr& m, const Context& ctx);
DMonPtr parse_dmon(const std::string& text, const Context& ctx);

// Local transitions. Action steps have no fallback: a prefix whose action
// does not match offers no step at all (the located level handles turning
// stuck components into end). Verdicts step on actions but never communicate.
std::vector<MonPtr> lmon_step_action(const MonPtr& m, Action a);

// Successors for receiving constant c from sender l; empty if m is not
// receptive to that message. In a parallel product both sides receive when
// they can; a side that cannot stays put.
std::vector<MonPtr> lmon_step_receive(const MonPtr& m, LocationId sender,
                                      Action c);

struct LocalSend {
  std::vector<LocationId> group;
  Action c;
  MonPtr result;  // the whole local term after the send
};
std::vector<LocalSend> lmon_step_sends(const MonPtr& m);

// All (sender, constant) messages m is receptive to. A receive prefix with
// an empty group enables nothing.
std::set<std::pair<LocationId, Action>> lmon_enabled_receives(const MonPtr& m);

bool lmon_can_communicate(const MonPtr& m);
bool dmon_can_communicate(const DMonPtr& M);

// Delivers the multicast (sender, group, c) to every located component:
// members of the group that are receptive take their (unique) receive
// transition, everything else stays put. Throws on an ambiguous receive.
DMonPtr dmon_receive(const DMonPtr& M, LocationId sender,
                     const std::vector<LocationId>& group, Action c);

struct SendEvent {
  LocationId sender;
  std::vector<LocationId> group;
  Action c;
};

struct Multicast {
  SendEvent label;
  DMonPtr result;
};

// All enabled multicasts: one component performs a send, all others receive
// it. Sorted by (sender, constant, group, result).
std::vector<Multicast> dmon_sends(const DMonPtr& M);

// Synchronous action step: every located component takes a local step on its
// own action A(l); a component that cannot act and cannot communicate
// becomes end. Throws "not in a stable state" if a component can communicate
// but not act (it must finish communicating first).
std::vector<DMonPtr> dmon_action_step(const DMonPtr& M, const ActionMap& A);

// Like dmon_action_step, but returns no successors instead of throwing when
// some component still has to communicate before it can act.
std::vector<DMonPtr> dmon_action_step_if_stable(const DMonPtr& M,
                                                const ActionMap& A);

VerdictSet dmon_verdicts(const DMonPtr& M);

// Rewrites every located component with the verdict-preserving term
// identities (verdict absorption in choices and parallel products,
// unfolding-stable cleanups); composition structure is untouched.
DMonPtr normalize_dmon(const DMonPtr& M);

// Every located component has resolved to a verdict.
bool dmon_is_final(const DMonPtr& M);

// Chooses among the (sorted) enabled sends during saturation. The
// lexicographic scheduler always picks the least; a seeded one picks
// pseudo-randomly but reproducibly.
struct Scheduler {
  enum class Kind { Lex, Seeded };
  Kind kind = Kind::Lex;
  std::mt19937_64 rng;

  static Scheduler lex() { return Scheduler{}; }
  static Scheduler seeded(uint64_t seed) {
    Scheduler s;
    s.kind = Kind::Seeded;
    s.rng.seed(seed);
    return s;
  }
  int pick(int n) {
    if (kind == Kind::Lex || n == 1) return 0;
    return static_cast<int>(rng() % static_cast<uint64_t>(n));
  }
};

struct Saturation {
  DMonPtr stable;
  std::vector<SendEvent> sends;
  std::vector<DMonPtr> chain;  // visited states, input first, stable last
};

// Applies scheduler-chosen sends until no component can communicate.
// Each send consumes a send prefix and never creates one, so the syntactic
// send count bounds the loop; exceeding it means the semantics is broken.
// Throws when sends run out while some component still waits to receive.
Saturation saturate(const DMonPtr& M, Scheduler& sched);

// Decentralized synthesis. Quantifiers split into /\ and \/ over locations;
// a maximal quantifier-free subformula psi becomes a disjunction of located
// monitors, one per location mentioned by sigma: the location that owns a
// modality observes it and broadcasts what it saw to the other mentioned
// locations, which act on any action and then await that message. When sigma
// is empty (a closed quantifier-free formula), psi already resolves to a
// verdict placed at the least location. Requirements as for synth_central,
// plus: no quantifiers under fixpoints or modalities ("not in
// PHyper-maxHML").
DMonPtr synth_dec(const FormulaPtr& f, const Sigma& sigma, const Context& ctx);

struct LoggedSend {
  long step;  // number of trace actions consumed when the send fired
  SendEvent ev;
};

struct DecRunOutcome {
  RunOutcome base;
  std::vector<LoggedSend> log;
};

json dec_run_outcome_to_json(const DecRunOutcome& r, const Context& ctx);

// Breadth-first exploration of the instrumented runs of M over t: states are
// saturated (stable) monitors paired with positions; each action step is
// followed by saturation, whose multicasts are logged with the step count.
DecRunOutcome run_dec(const DMonPtr& M, const Trace& t, Scheduler& sched,
                      long max_states = kDefaultMaxStates);

}  // namespace hypermon
