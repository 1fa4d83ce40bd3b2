#pragma once
// Actions, locations, action maps, and lasso-shaped hypertraces.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypermon {

using json = nlohmann::ordered_json;

// Raised for bad input: malformed files, unknown names, violated
// preconditions. The CLI maps it to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a state-space search exceeds its configured budget.
// The CLI maps it to exit code 3.
struct BudgetError : std::runtime_error {
  long explored;
  explicit BudgetError(const std::string& what, long explored_states)
      : std::runtime_error(what), explored(explored_states) {}
};

using Action = int;      // index into Context::actions
using LocationId = int;  // index into Context::locations

// A finite alphabet of actions and a finite set of locations. Both lists are
// kept sorted and unique, so an id doubles as the name's lexicographic rank.
// Every formula, trace and monitor in one invocation shares a single Context.
struct Context {
  std::vector<std::string> actions;
  std::vector<std::string> locations;

  // Sorts, dedups and validates. Requires at least two actions (a one-action
  // alphabet makes every modality trivially total) and at least one location.
  static Context make(std::vector<std::string> actions,
                      std::vector<std::string> locations);

  int action_id(const std::string& name) const;    // -1 if unknown
  int location_id(const std::string& name) const;  // -1 if unknown
  const std::string& action_name(Action a) const { return actions.at(a); }
  const std::string& location_name(LocationId l) const {
    return locations.at(l);
  }
  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_locations() const { return static_cast<int>(locations.size()); }
};

using ContextPtr = std::shared_ptr<const Context>;

// One action per location index; totality holds by construction.
using ActionMap = std::vector<Action>;

// A finitely represented infinite hypertrace: every location's trace is the
// ultimately periodic word prefix(loop)^omega, all sharing one prefix length
// p >= 0 and one loop length q >= 1. Position i < p+q denotes the suffix
// starting at step i; the successor of the last position wraps back to p.
struct Trace {
  ContextPtr ctx;
  std::vector<ActionMap> prefix;
  std::vector<ActionMap> loop;

  int prefix_len() const { return static_cast<int>(prefix.size()); }
  int loop_len() const { return static_cast<int>(loop.size()); }
  int num_positions() const { return prefix_len() + loop_len(); }

  const ActionMap& at(int pos) const {
    return pos < prefix_len() ? prefix[pos] : loop[pos - prefix_len()];
  }
  int succ(int pos) const {
    return pos + 1 < num_positions() ? pos + 1 : prefix_len();
  }
};

// The unique A and T' with T --A--> T': the action map at pos and the
// successor position.
std::pair<ActionMap, int> head_tail(const Trace& t, int pos);

// Returns one message per violated invariant; empty means valid.
// Checks the object shape, alphabet and location sets, map totality,
// action membership and q >= 1.
std::vector<std::string> validate_trace(const json& j);

// Parses a trace, throwing UsageError with all validation messages joined.
Trace trace_from_json(const json& j);
json trace_to_json(const Trace& t);

// All |Act|^|L| total action maps in lexicographic order (location indices
// are already sorted by name, so tuple order is name order).
std::vector<ActionMap> all_action_maps(const Context& ctx);

enum class Verdict : uint8_t { Yes = 0, No = 1, End = 2 };

const char* verdict_name(Verdict v);

// A subset of {yes, no, end} as a 3-bit mask.
struct VerdictSet {
  uint8_t bits = 0;

  static VerdictSet single(Verdict v) { return VerdictSet{bit(v)}; }
  static uint8_t bit(Verdict v) {
    return static_cast<uint8_t>(1u << static_cast<uint8_t>(v));
  }
  bool has(Verdict v) const { return bits & bit(v); }
  void add(Verdict v) { bits |= bit(v); }
  void merge(VerdictSet o) { bits |= o.bits; }
  bool empty() const { return bits == 0; }
  int size() const;
  bool operator==(const VerdictSet&) const = default;
  // Names in the fixed order yes, no, end.
  std::vector<std::string> names() const;
};

}  // namespace hypermon
