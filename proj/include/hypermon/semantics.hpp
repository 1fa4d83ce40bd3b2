#pragma once
// Denotational semantics of formulas over lasso hypertraces. A formula
// denotes a set of positions; the trace satisfies it when position 0 is in
// that set.

#include <map>

#include "hypermon/formula.hpp"
#include "hypermon/model.hpp"

namespace hypermon {

struct PositionSet {
  std::vector<char> bits;

  static PositionSet none(int n) { return PositionSet{std::vector<char>(n, 0)}; }
  static PositionSet full(int n) { return PositionSet{std::vector<char>(n, 1)}; }
  int size() const { return static_cast<int>(bits.size()); }
  bool has(int i) const { return bits[i] != 0; }
  void add(int i) { bits[i] = 1; }
  PositionSet intersect(const PositionSet& o) const;
  PositionSet unite(const PositionSet& o) const;
  bool subset_of(const PositionSet& o) const;
  bool operator==(const PositionSet&) const = default;
  std::vector<int> members() const;
};

using RecEnv = std::map<std::string, PositionSet>;

// The set of positions of t whose suffixes satisfy f. Fixpoints are computed
// by Kleene iteration over the finite position space: greatest fixpoints
// start from the full set, least fixpoints from the empty set.
PositionSet eval_positions(const FormulaPtr& f, const Trace& t,
                           const Sigma& sigma = {}, const RecEnv& rho = {});

// Same result with fixpoints computed from their defining property by
// enumerating all 2^(p+q) subsets: a greatest fixpoint is the union of all
// post-fixpoints, a least fixpoint the intersection of all pre-fixpoints.
// Exponential; exists purely to cross-check eval_positions.
PositionSet eval_positions_enum(const FormulaPtr& f, const Trace& t,
                                const Sigma& sigma = {}, const RecEnv& rho = {});

// Whether t satisfies the closed formula f (position 0 is in its denotation).
bool satisfies(const FormulaPtr& f, const Trace& t);

}  // namespace hypermon
