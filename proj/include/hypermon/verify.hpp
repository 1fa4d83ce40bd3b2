#pragma once
// Desk-scale checking of the monitor theory: weak bisimulation between the
// two monitor kinds, the six synthesis well-behavedness properties,
// central-vs-decentralized differentials, scheduler confluence, and
// randomized soundness/completeness suites against the formula semantics.

#include <cstdint>
#include <random>

#include "hypermon/central.hpp"
#include "hypermon/decentral.hpp"
#include "hypermon/semantics.hpp"

namespace hypermon {

// ------------------------------------------------------------- generation

struct GenConfig {
  int max_formula_depth = 6;
  int max_fixpoints = 2;
  int alphabet_size = 2;   // >= 2
  int location_count = 3;  // >= 1
  int max_prefix = 2;
  int max_loop = 3;  // >= 1
  long sample_count = 100;
  uint64_t seed = 0;
  // When set, quantifiers only appear as an outer prefix (never under a
  // fixpoint or modality), so every sample admits decentralized synthesis.
  bool quantifier_prefix_only = false;
  bool allow_min = false;
};

// Actions a, b, c, ... and locations l1, l2, ... of the configured sizes.
ContextPtr gen_context(const GenConfig& cfg);

// A random closed formula. Guardedness holds by construction: a recursion
// variable only becomes eligible for reference once a modality has been
// passed inside its binder. With quantifier_prefix_only the result admits
// decentralized synthesis; otherwise quantifiers may appear anywhere.
FormulaPtr gen_formula(std::mt19937_64& rng, const GenConfig& cfg,
                       const Context& ctx);

// A random lasso trace over ctx with prefix <= max_prefix, loop in
// [1, max_loop].
Trace gen_trace(std::mt19937_64& rng, const GenConfig& cfg, ContextPtr ctx);

// Greedily shrinks f while still_fails(candidate) stays true. Candidates
// replace a subformula by tt, ff, or one of its children; the predicate is
// expected to return false (not throw) for candidates it cannot process.
FormulaPtr shrink_formula(const FormulaPtr& f,
                          const std::function<bool(const FormulaPtr&)>& fails);

// ------------------------------------------------------ weak bisimulation

struct BisimReport {
  long pairs_checked = 0;
  // Human-readable "condition N failed at pair (..., ...): witness" entries
  // for the start pair after refinement has stabilized.
  std::vector<std::string> condition_failures;
  bool passed = false;
  // Names the reading used for the verdict condition and for central steps.
  std::string notes;
  json to_json() const;
};

// Decides whether the synthesized decentralized and centralized monitors for
// f under sigma are weakly bisimilar. Explores the reachable pair graph
// (a send successor is represented by the stable state its delivery chain
// completes to, keeping the centralized side fixed; action successors pair
// every decentralized step with every centralized step) and then refines it
// to the largest relation satisfying, for every pair (M, m):
//   1. for each verdict v: some communication-reachable M' derives v
//      if and only if m derives v;
//   2. every action step of M is matched by an action step of m into a
//      surviving pair;
//   3. every send of M completes to a stable state that survives with the
//      same m;
//   4. every action step of m is matched by
//      communicate*-act-communicate* on M into a surviving pair.
// The start pair must survive. Centralized action steps are taken up to
// end-dominance (an end alternative next to a non-end one is dropped): the
// dominated steps only ever reach end and no decentralized behavior mirrors
// them, while the synthesized correspondence holds for the dominant ones.
BisimReport check_weak_bisim(const FormulaPtr& f, const Sigma& sigma,
                             const Context& ctx, long max_pairs = 200000);

// ----------------------------------------------- synthesis well-behavedness

struct PropertyResult {
  bool passed = true;
  std::string counterexample;  // A-map path and detail for the first failure
};

struct PrincipledReport {
  PropertyResult verdict_agreement;
  PropertyResult verdict_irrevocability;
  PropertyResult reactivity;
  PropertyResult bounded_communication;
  PropertyResult alternation;
  PropertyResult formula_convergence;
  long pairs_checked = 0;
  bool passed() const;
  json to_json() const;
};

// Checks six properties of the synthesized pair for f under sigma, walking
// all action maps from all reachable stable states up to `horizon` action
// steps (states are memoized, so the horizon is a safety cap):
//   VerdictAgreement          reached pairs derive identical verdict sets;
//   VerdictIrrevocability     along communication, derivable verdicts are
//                             never lost;
//   Reactivity                every stable state steps on every action map;
//   BoundedCommunication      after an action step, every maximal chain of
//                             sends ends in a state that cannot communicate;
//   Alternation               a state with an enabled send never takes an
//                             action step;
//   FormulaConvergence        all send orders converge to a single stable
//                             state, and the lockstep centralized successor
//                             exists exactly when the decentralized one does
//                             (the stable state re-enters the pair walk).
// Delivery orders are covered without enumerating the exponential order
// lattice: each post-action state is saturated along two maximally
// different orders (always the first enabled send vs always the last),
// which must reach the same stable state; further orders are sampled by
// the confluence suite with seeded schedulers.
PrincipledReport check_principled(const FormulaPtr& f, const Sigma& sigma,
                                  const Context& ctx, long horizon,
                                  long max_pairs = 200000);

// ------------------------------------------------------------ differential

struct DiffRecord {
  RunOutcome central;
  DecRunOutcome dec;
  bool oracle_sat = false;
  bool monitors_agree = false;  // identical reachable_yes / reachable_no
  bool oracle_agrees = false;   // reachable_no == !sat, reachable_yes => sat
  json to_json() const;
};

// Runs both monitor kinds for closed f over t (lexicographic scheduler) and
// cross-checks them against the semantics.
DiffRecord differential(const FormulaPtr& f, const Trace& t,
                        const Context& ctx);

// -------------------------------------------------------------- confluence

struct ConfluenceRecord {
  bool identical = true;
  std::string detail;  // first divergence, when any
  json to_json() const;
};

// Replays the decentralized run of f over t with the lexicographic scheduler
// and k seeded ones (seeds base_seed .. base_seed+k-1); requires the same
// set of stable states at every action depth and the same outcome.
ConfluenceRecord check_confluence(const FormulaPtr& f, const Trace& t,
                                  const Context& ctx, int k,
                                  uint64_t base_seed = 1);

// ------------------------------------------------------------------ suites

struct SuiteReport {
  std::string name;
  long samples = 0;
  long failures = 0;
  std::vector<std::string> counterexamples;  // capped, shrunk where possible
  long elapsed_ms = 0;
  bool passed() const { return failures == 0; }
  json to_json() const;
};

// Random closed formulas x traces, centralized runner vs semantics:
// reachable_no <=> not satisfied, and reachable_yes => satisfied.
SuiteReport soundness_suite(const GenConfig& cfg);
// Same sampling, reported as the completeness direction only
// (not satisfied => reachable_no).
SuiteReport completeness_suite(const GenConfig& cfg);
// Random quantifier-prefix formulas x traces: centralized and decentralized
// outcomes must match, and both must agree with the semantics.
SuiteReport diff_suite(const GenConfig& cfg);
// check_principled over random quantifier-prefix formulas, horizon
// 2*(prefix+loop)+2 of a trace sampled alongside.
SuiteReport principled_suite(const GenConfig& cfg);
// check_weak_bisim over random quantifier-prefix formulas.
SuiteReport bisim_suite(const GenConfig& cfg);
// check_confluence with the lexicographic plus 10 seeded schedulers.
SuiteReport confluence_suite(const GenConfig& cfg);
// Fixpoint evaluation self-check: Kleene iteration vs subset enumeration on
// formulas with at most one fixpoint and traces with prefix+loop <= 4.
SuiteReport oracle_suite(const GenConfig& cfg);

// Dispatch by suite name ("soundness", "completeness", "diff", "principled",
// "bisim", "confluence", "oracle"). Throws UsageError on unknown names.
SuiteReport run_suite(const std::string& name, const GenConfig& cfg);

}  // namespace hypermon
