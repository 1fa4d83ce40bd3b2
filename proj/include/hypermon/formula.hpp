#pragma once
// Formula AST over hypertraces: parsing, printing, and static checks.
//
// Concrete syntax:
//   tt ff  /\  \/  max X. f  min X. f  exists p. f  forall p. f
//   p = q  p != q  [a@p] f  <a@p> f  ( f )  # line comment
// Conjunction binds tighter than disjunction; fixpoint and quantifier
// binders extend maximally to the right; modalities bind tightest.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hypermon/model.hpp"

namespace hypermon {

enum class FK {
  True,
  False,
  And,
  Or,
  Max,
  Min,
  Var,     // recursion variable reference
  Exists,  // trace quantifier
  Forall,
  Eq,  // trace variable equality test
  Neq,
  Box,  // [a@p]
  Diamond,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FK kind;
  std::string action;  // Box/Diamond
  std::string var;     // binder name, Var reference, Eq/Neq lhs, modality trace var
  std::string var2;    // Eq/Neq rhs
  FormulaPtr a, b;     // children (unary body in a)
};

// Construction helpers, used by the parser, the generators and tests.
namespace fml {
FormulaPtr tt();
FormulaPtr ff();
FormulaPtr and_(FormulaPtr a, FormulaPtr b);
FormulaPtr or_(FormulaPtr a, FormulaPtr b);
FormulaPtr max(std::string x, FormulaPtr body);
FormulaPtr min(std::string x, FormulaPtr body);
FormulaPtr var(std::string x);
FormulaPtr exists(std::string p, FormulaPtr body);
FormulaPtr forall(std::string p, FormulaPtr body);
FormulaPtr eq(std::string p, std::string q);
FormulaPtr neq(std::string p, std::string q);
FormulaPtr box(std::string a, std::string p, FormulaPtr body);
FormulaPtr diamond(std::string a, std::string p, FormulaPtr body);
}  // namespace fml

struct ParseError : UsageError {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : UsageError(std::to_string(line_) + ":" + std::to_string(col_) + ": " +
                   msg),
        line(line_),
        col(col_) {}
};

// Parses and alpha-normalizes: binders that shadow an earlier binder or a
// free variable are renamed to fresh names (p1, p2, ... for trace variables,
// X1, X2, ... for recursion variables), so all binders end up distinct.
// When ctx is non-null, modality actions are checked against its alphabet.
FormulaPtr parse_formula(const std::string& text, const Context* ctx = nullptr);

std::string print_formula(const FormulaPtr& f);

struct FreeVars {
  std::set<std::string> trace_vars;
  std::set<std::string> rec_vars;
};
FreeVars free_vars(const FormulaPtr& f);

// One message per recursion variable with an occurrence that is not under a
// modality inside its binding fixpoint ("unguarded variable X"). Empty means
// well formed.
std::vector<std::string> check_well_formed(const FormulaPtr& f);

enum class Fragment {
  HyperRecHML,
  HyperMaxHML,
  PHyperRecHML,
  PHyperMaxHML,
  Qf,
};
const char* fragment_name(Fragment fr);

// The fragments f belongs to. Membership is structural: HyperMaxHML excludes
// least fixpoints; the P-fragments forbid quantifiers under modalities or
// fixpoints; Qf forbids quantifiers altogether.
std::set<Fragment> classify(const FormulaPtr& f);

// Capture-avoiding substitution of recursion variable x by g.
FormulaPtr substitute(const FormulaPtr& f, const std::string& x,
                      const FormulaPtr& g);

bool alpha_equal(const FormulaPtr& f, const FormulaPtr& g);

// Trace-variable assignment, e.g. parsed from "p=l1,q=l2".
using Sigma = std::map<std::string, LocationId>;
Sigma parse_sigma(const std::string& text, const Context& ctx);

}  // namespace hypermon
