#include "hypermon/semantics.hpp"

namespace hypermon {

PositionSet PositionSet::intersect(const PositionSet& o) const {
  PositionSet r = *this;
  for (size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] && o.bits[i];
  return r;
}

PositionSet PositionSet::unite(const PositionSet& o) const {
  PositionSet r = *this;
  for (size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] || o.bits[i];
  return r;
}

bool PositionSet::subset_of(const PositionSet& o) const {
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i] && !o.bits[i]) return false;
  return true;
}

std::vector<int> PositionSet::members() const {
  std::vector<int> out;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

LocationId sigma_at(const Sigma& sigma, const std::string& v) {
  auto it = sigma.find(v);
  if (it == sigma.end())
    throw UsageError("unbound trace variable '" + v + "'");
  return it->second;
}

Action action_of(const Context& ctx, const std::string& name) {
  int a = ctx.action_id(name);
  if (a < 0) throw UsageError("unknown action '" + name + "'");
  return a;
}

// Shared recursion for both evaluators; `enumerate` picks the fixpoint
// strategy.
PositionSet eval_rec(const FormulaPtr& f, const Trace& t, const Sigma& sigma,
                     const RecEnv& rho, bool enumerate) {
  int n = t.num_positions();
  switch (f->kind) {
    case FK::True: return PositionSet::full(n);
    case FK::False: return PositionSet::none(n);
    case FK::And:
      return eval_rec(f->a, t, sigma, rho, enumerate)
          .intersect(eval_rec(f->b, t, sigma, rho, enumerate));
    case FK::Or:
      return eval_rec(f->a, t, sigma, rho, enumerate)
          .unite(eval_rec(f->b, t, sigma, rho, enumerate));
    case FK::Var: {
      auto it = rho.find(f->var);
      if (it == rho.end())
        throw UsageError("free recursion variable '" + f->var + "'");
      return it->second;
    }
    case FK::Max:
    case FK::Min: {
      bool greatest = f->kind == FK::Max;
      if (!enumerate) {
        // Kleene iteration: the chain from the top (resp. bottom) element is
        // monotone over a finite lattice, so it stabilizes within n+1 steps.
        PositionSet s = greatest ? PositionSet::full(n) : PositionSet::none(n);
        while (true) {
          RecEnv rho2 = rho;
          rho2[f->var] = s;
          PositionSet s2 = eval_rec(f->a, t, sigma, rho2, enumerate);
          if (s2 == s) return s;
          s = std::move(s2);
        }
      }
      if (n > 20) throw UsageError("trace too long for subset enumeration");
      // Union of post-fixpoints (greatest) or intersection of pre-fixpoints
      // (least), straight from the defining property.
      PositionSet acc = greatest ? PositionSet::none(n) : PositionSet::full(n);
      for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) {
        PositionSet s = PositionSet::none(n);
        for (int i = 0; i < n; ++i)
          if (m & (uint64_t{1} << i)) s.add(i);
        RecEnv rho2 = rho;
        rho2[f->var] = s;
        PositionSet fs = eval_rec(f->a, t, sigma, rho2, enumerate);
        if (greatest && s.subset_of(fs)) acc = acc.unite(s);
        if (!greatest && fs.subset_of(s)) acc = acc.intersect(s);
      }
      return acc;
    }
    case FK::Exists:
    case FK::Forall: {
      bool ex = f->kind == FK::Exists;
      PositionSet acc = ex ? PositionSet::none(n) : PositionSet::full(n);
      for (LocationId l = 0; l < t.ctx->num_locations(); ++l) {
        Sigma sigma2 = sigma;
        sigma2[f->var] = l;
        PositionSet s = eval_rec(f->a, t, sigma2, rho, enumerate);
        acc = ex ? acc.unite(s) : acc.intersect(s);
      }
      return acc;
    }
    case FK::Eq:
    case FK::Neq: {
      bool same = sigma_at(sigma, f->var) == sigma_at(sigma, f->var2);
      bool holds = f->kind == FK::Eq ? same : !same;
      return holds ? PositionSet::full(n) : PositionSet::none(n);
    }
    case FK::Box:
    case FK::Diamond: {
      Action a = action_of(*t.ctx, f->action);
      LocationId l = sigma_at(sigma, f->var);
      PositionSet body = eval_rec(f->a, t, sigma, rho, enumerate);
      PositionSet out = PositionSet::none(n);
      for (int i = 0; i < n; ++i) {
        bool heads = t.at(i)[l] == a;
        bool cont = body.has(t.succ(i));
        bool in = f->kind == FK::Box ? (!heads || cont) : (heads && cont);
        if (in) out.add(i);
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

PositionSet eval_positions(const FormulaPtr& f, const Trace& t,
                           const Sigma& sigma, const RecEnv& rho) {
  return eval_rec(f, t, sigma, rho, false);
}

PositionSet eval_positions_enum(const FormulaPtr& f, const Trace& t,
                                const Sigma& sigma, const RecEnv& rho) {
  return eval_rec(f, t, sigma, rho, true);
}

bool satisfies(const FormulaPtr& f, const Trace& t) {
  FreeVars fv = free_vars(f);
  if (!fv.trace_vars.empty() || !fv.rec_vars.empty())
    throw UsageError("satisfies requires a closed formula");
  return eval_positions(f, t).has(0);
}

}  // namespace hypermon
