#pragma once
// Centralized monitor synthesis and execution. A centralized monitor
// observes whole action maps; its prefixes name the location they watch.

#include <optional>

#include "hypermon/formula.hpp"
#include "hypermon/terms.hpp"

namespace hypermon {

// Builds the centralized monitor for f under the trace-variable assignment
// sigma: conjunction becomes (x), disjunction (+); a universal quantifier
// expands to an (x)-product over all locations (existential dually, both in
// location order); [a@p] f becomes a@sigma(p). M(f) + a sum of b@sigma(p). yes
// for every other action b (diamonds use no); equality tests resolve to
// verdicts. Requires: no least fixpoints ("least fixed point not
// monitorable"), free trace variables within dom(sigma), no free recursion
// variables, guarded recursion.
MonPtr synth_central(const FormulaPtr& f, const Sigma& sigma,
                     const Context& ctx);

// All successors of m under action map A: a verdict steps to itself; a@l. m'
// steps to m' if A(l) = a and to end otherwise; + offers both branches;
// (x) and (+) step both sides (cross product of the branch successors);
// rec unfolds. Sorted and deduplicated.
std::vector<MonPtr> cmon_step(const MonPtr& m, const ActionMap& A);

// Same relation with dominated alternatives removed: whenever a choice point
// offers end next to another successor, the end branch is dropped. An end
// component never contributes to a later yes or no derivation (it only ever
// derives end, and no verdict rule turns an end premise into yes or no), so
// this preserves yes/no reachability exactly while avoiding the exponential
// cross products that mismatch branches would otherwise create.
std::vector<MonPtr> cmon_step_pruned(const MonPtr& m, const ActionMap& A);

// Verdicts derivable from m. Errors on unguarded recursion.
VerdictSet cmon_verdicts(const MonPtr& m);

inline constexpr long kDefaultMaxStates = 1'000'000;

struct RunOutcome {
  bool reachable_yes = false;
  bool reachable_no = false;
  std::optional<long> steps_to_first_yes;
  std::optional<long> steps_to_first_no;
  long explored_states = 0;
  // Some reachable state derived more than one verdict.
  bool ambiguous_verdicts = false;
};

json run_outcome_to_json(const RunOutcome& r);

// Exhaustive breadth-first exploration of the instrumented runs of m over t,
// from position 0. States are (term, position) pairs with terms kept in
// normalized form; verdicts are recorded at every state; step counts are
// action steps. Throws BudgetError when more than max_states distinct states
// are visited.
RunOutcome run_central(const MonPtr& m, const Trace& t,
                       long max_states = kDefaultMaxStates);

}  // namespace hypermon
