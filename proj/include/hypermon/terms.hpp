#pragma once
// Monitor terms. One node type covers both centralized monitors, whose
// prefixes name a location (a@l. m), and the local monitors of decentralized
// ones, whose prefixes are plain actions (a. m) or communications
// (!{l2,l3}:a. m sends constant a to the group, ?{l1}:a. m receives a from a
// member of the group).
//
// Concrete syntax:
//   yes no end  a@l. m  a. m  !{l1,l2}:a. m  ?{l1}:a. m
//   m + n  m (x) n  m (+) n  rec X. m  X  ( m )
// (+) binds loosest, then (x), then +, then prefixes; rec extends maximally
// to the right.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hypermon/model.hpp"

namespace hypermon {

enum class MK {
  Verdict,
  LocPrefix,  // centralized action prefix a@l
  ActPrefix,  // local action prefix a
  Send,       // !{G}:c
  Recv,       // ?{G}:c
  Choice,     // +
  ParAnd,     // (x)
  ParOr,      // (+)
  Rec,
  Var,
};

struct Mon;
using MonPtr = std::shared_ptr<const Mon>;

struct Mon {
  MK kind;
  Verdict v = Verdict::End;        // Verdict
  Action action = -1;              // prefix action / communication constant
  LocationId loc = -1;             // LocPrefix
  std::vector<LocationId> group;   // Send/Recv, sorted
  std::string var;                 // Rec binder / Var reference
  MonPtr a, b;
  size_t hash = 0;
};

namespace mon {
MonPtr verdict(Verdict v);
MonPtr yes();
MonPtr no();
MonPtr end();
MonPtr loc_prefix(Action a, LocationId l, MonPtr cont);
MonPtr act_prefix(Action a, MonPtr cont);
MonPtr send(std::vector<LocationId> group, Action c, MonPtr cont);
MonPtr recv(std::vector<LocationId> group, Action c, MonPtr cont);
MonPtr choice(MonPtr a, MonPtr b);
MonPtr par_and(MonPtr a, MonPtr b);
MonPtr par_or(MonPtr a, MonPtr b);
MonPtr rec(std::string x, MonPtr body);
MonPtr var(std::string x);
}  // namespace mon

bool mon_equal(const MonPtr& a, const MonPtr& b);
// Total structural order; used to sort alternatives deterministically.
int mon_cmp(const MonPtr& a, const MonPtr& b);

struct MonPtrHash {
  size_t operator()(const MonPtr& m) const { return m->hash; }
};
struct MonPtrEq {
  bool operator()(const MonPtr& a, const MonPtr& b) const {
    return mon_equal(a, b);
  }
};
struct MonPtrLess {
  bool operator()(const MonPtr& a, const MonPtr& b) const {
    return mon_cmp(a, b) < 0;
  }
};

std::string print_mon(const MonPtr& m, const Context& ctx);
MonPtr parse_mon(const std::string& text, const Context& ctx);

std::set<std::string> free_mon_vars(const MonPtr& m);

// Capture-avoiding substitution of recursion variable x by g.
MonPtr substitute_mon(const MonPtr& m, const std::string& x, const MonPtr& g);

// One message per recursion variable not guarded by a prefix inside its
// binder. Guarded terms are exactly those whose verdict derivation and
// unfolding terminate.
std::vector<std::string> check_guarded_mon(const MonPtr& m);

// The set of verdicts derivable from m: a verdict for itself; end for a
// parallel product of ends; yes absorbs in (+) and is neutral in (x); no
// absorbs in (x) and is neutral in (+); + passes verdicts of either branch
// through; rec unfolds. Computed as a least fixpoint per rec binder, so it
// terminates on unguarded terms too.
VerdictSet mon_verdicts(const MonPtr& m);

// Verdicts of a parallel product given the operands' verdicts: the absorbing
// verdict wins outright, the neutral one passes the other side through, and
// two ends make an end. ParAnd absorbs no / passes yes; ParOr dually.
VerdictSet combine_parallel_verdicts(VerdictSet l, VerdictSet r,
                                     Verdict absorb, Verdict neutral);

// Quotients a term by verdict-preserving identities: yes / no dropped or
// absorbed in parallel products, duplicate ends collapsed, parallel and
// choice children flattened and sorted, duplicate choice branches merged,
// rec bodies that are verdicts collapsed. The result derives the same
// verdicts and has matching transitions; the runners use it to keep the
// explored state space small.
MonPtr normalize_mon(const MonPtr& m);

// normalize_mon plus merging of duplicate parallel components. Combining a
// verdict with itself gives that verdict back and combining two verdicts
// always yields one of them, so a run reaches the same verdicts; the
// branching structure is not preserved step for step, which is why only the
// runner uses it. Without the merge, a recursion variable under two
// quantifiers multiplies the term by the location count at every unfolding.
MonPtr normalize_mon_run(const MonPtr& m);

bool alpha_equal_mon(const MonPtr& a, const MonPtr& b);

}  // namespace hypermon
