#pragma once

// Dynamic evaluation against a world model, plausibility, and context update.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incr/error.hpp"
#include "incr/ground.hpp"
#include "incr/reduce.hpp"
#include "incr/scoper.hpp"
#include "incr/term.hpp"
#include "incr/world.hpp"

namespace incr {

struct EvalOptions {
  /// Reject predicates the world never mentions; otherwise they are false.
  bool strict = true;
};

namespace detail {

inline std::string world_constant(const WorldModel& m, const std::string& c) {
  if (!m.has_entity(c)) throw UnknownSymbol("unknown entity '" + c + "'");
  return c;
}

inline void check_arity(const WorldModel& m, const std::string& pred, std::size_t n) {
  auto a = m.arity(pred);
  if (a && *a != n)
    throw Error("predicate " + pred + " has arity " + std::to_string(*a) + ", used with " + std::to_string(n));
}

}  // namespace detail

namespace detail {

/// Non-owning reference to a callable, for continuations.
template <class Sig>
class FnRef;

template <class R, class... A>
class FnRef<R(A...)> {
 public:
  template <class F>
  FnRef(const F& f) : obj_(&f), call_([](const void* o, A... a) -> R { return (*static_cast<const F*>(o))(a...); }) {}
  R operator()(A... a) const { return call_(obj_, a...); }

 private:
  const void* obj_;
  R (*call_)(const void*, A...);
};

/// Dynamic evaluation over a total world. Mirrors the grounder's threading
/// with booleans; bindings live on a stack so continuations see them.
class DirectEval {
 public:
  using Cont = FnRef<bool()>;

  DirectEval(const WorldModel& m, const Assignment& g, EvalOptions opts) : m_(m), opts_(opts) {
    for (const auto& [v, d] : g) env_.emplace_back(v, d);
  }

  bool holds(const Term& f) {
    return run(f, [] { return true; });
  }

 private:
  bool run(const Term& f, Cont k) {
    using K = Term::Kind;
    switch (f.kind()) {
      case K::True: return k();
      case K::Const: return atomic(f.name(), {}) && k();
      case K::App: {
        if (!f.fun().is(K::Const)) throw Error("cannot evaluate application of " + print_lf(f.fun()));
        Tuple args;
        args.reserve(f.arity());
        for (std::size_t i = 0; i < f.arity(); ++i) args.push_back(individual(f.arg(i)));
        return atomic(f.fun().name(), args) && k();
      }
      case K::And: return run(f.left(), [&] { return run(f.right(), k); });
      case K::Impl: {
        bool counter = run(f.left(), [&] { return !holds(f.right()); });
        return !counter && k();
      }
      case K::Scoped: {
        const VarName& v = f.bound_var();
        switch (f.quant()) {
          case Quant::Exists:
          case Quant::The:
            for (const auto& d : m_.entities()) {
              Bind b(env_, v, d);
              if (run(f.restrictor(), [&] { return run(f.body(), k); })) return true;
            }
            return false;
          case Quant::Forall:
            for (const auto& d : m_.entities()) {
              Bind b(env_, v, d);
              if (run(f.restrictor(), [&] { return !holds(f.body()); })) return false;
            }
            return k();
          case Quant::No:
            for (const auto& d : m_.entities()) {
              Bind b(env_, v, d);
              if (run(f.restrictor(), [&] { return holds(f.body()); })) return false;
            }
            return k();
        }
        break;
      }
      case K::Var: throw Error("variable " + f.name() + " used as a formula");
      case K::Lam:
      case K::QTerm:
      case K::Pro: throw Error("cannot evaluate unscoped term " + print_lf(f));
    }
    throw Error("cannot evaluate " + print_lf(f));
  }

  struct Bind {
    Bind(std::vector<std::pair<VarName, EntityId>>& env, const VarName& v, const EntityId& d) : env_(env) {
      env_.emplace_back(v, d);
    }
    ~Bind() { env_.pop_back(); }
    std::vector<std::pair<VarName, EntityId>>& env_;
  };

  const EntityId* lookup(const VarName& v) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == v) return &it->second;
    return nullptr;
  }

  EntityId individual(const Term& a) const {
    if (a.is(Term::Kind::Var)) {
      if (const EntityId* d = lookup(a.name())) return *d;
      throw UnboundVariable("unbound variable " + a.name());
    }
    if (a.is(Term::Kind::Const)) return world_constant(m_, a.name());
    if (a.is(Term::Kind::Lam) || a.is(Term::Kind::QTerm) || a.is(Term::Kind::Pro))
      throw Error("argument is not an individual: " + print_lf(a));
    Term inst = a;
    for (const auto& v : free_vars(a)) {
      const EntityId* d = lookup(v);
      if (!d) throw UnboundVariable("unbound variable " + v);
      inst = substitute(inst, v, Term::constant(*d));
    }
    return "[" + print_lf(inst) + "]";
  }

  bool atomic(const std::string& pred, const Tuple& args) const {
    if (pred == "eq" && args.size() == 2) return args[0] == args[1];
    if (!m_.declares(pred)) {
      if (opts_.strict) throw UnknownSymbol("unknown predicate '" + pred + "'");
      return false;
    }
    check_arity(m_, pred, args.size());
    return m_.holds(pred, args);
  }

  const WorldModel& m_;
  EvalOptions opts_;
  std::vector<std::pair<VarName, EntityId>> env_;
};

}  // namespace detail

/// Truth of a scoped formula in the world under `g`. Unlisted tuples are
/// false.
inline bool evaluate(const Term& f, const WorldModel& m, const Assignment& g = {}, EvalOptions opts = {}) {
  return detail::DirectEval(m, g, opts).holds(f);
}

/// Gives every quantifier term its narrowest scope: each atomic formula
/// discharges the quantifier terms among its arguments, leftmost widest.
inline Term narrow_scope(const Term& t) {
  return map_bottom_up(t, [](const Term& n) {
    if (!n.is(Term::Kind::App)) return n;
    std::vector<Term> qs;
    std::vector<Term> args = n.args();
    for (auto& a : args)
      if (a.is(Term::Kind::QTerm)) {
        qs.push_back(a);
        a = Term::var(a.bound_var());
      }
    Term body = Term::app(n.fun(), args);
    for (auto it = qs.rbegin(); it != qs.rend(); ++it)
      body = Term::scoped(it->quant(), it->bound_var(), it->restrictor(), body);
    return body;
  });
}

struct PlausibilityVerdict {
  bool plausible = true;
  /// Name of the violated constraint when implausible. Empty if the
  /// proposition is inconsistent with the facts alone.
  std::string constraint;
};

/// Consistency of `p` with the world's facts and constraints. Facts hold;
/// other ground atoms are open, so only a constraint (or a contradiction
/// with a listed fact) makes a proposition implausible.
inline PlausibilityVerdict plausible(const Term& p, const WorldModel& m) {
  PropArena arena;
  AtomPolicy policy{
      [&](const std::string& c) { return detail::world_constant(m, c); },
      [&](const std::string& pred, const std::vector<std::string>& args) -> std::optional<bool> {
        detail::check_arity(m, pred, args.size());
        if (m.holds(pred, args)) return true;
        return std::nullopt;
      }};
  Grounder gr(arena, m.entities(), policy);
  PropArena::Ref acc = gr.holds(p);
  if (!arena.solve(acc)) return {false, ""};
  for (const auto& c : m.constraints()) {
    acc = arena.conj(acc, gr.holds(c.formula));
    if (!arena.solve(acc)) return {false, c.name};
  }
  return {true, ""};
}

/// The discourse so far: a chain of context existentials over a body. The
/// printed form is exists(v1,true,...exists(vn,true,body)).
struct ContextLF {
  std::vector<VarName> binders;
  Term body = Term::true_();

  Term formula() const {
    Term f = body;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) f = Term::scoped(Quant::Exists, *it, Term::true_(), f);
    return f;
  }
  bool empty() const { return binders.empty() && body.is(Term::Kind::True); }
};

/// Inserts a scoped sentence into the context. The sentence's leading
/// existentials may be lifted to context binders; one result per lift depth,
/// deepest first.
inline std::vector<ContextLF> update_context(const ContextLF& ctx, const Term& sentence) {
  std::set<VarName> known(ctx.binders.begin(), ctx.binders.end());
  for (const auto& v : free_vars(sentence))
    if (!known.count(v)) throw UnboundVariable("free variable " + v + " names no context binder");

  std::vector<Term> lead;
  Term core = sentence;
  while (core.is(Term::Kind::Scoped) && core.quant() == Quant::Exists) {
    lead.push_back(core);
    core = core.body();
  }

  std::set<std::string> used = all_names(ctx.formula());
  std::vector<ContextLF> out;
  for (std::size_t d = lead.size() + 1; d-- > 0;) {
    ContextLF next = ctx;
    std::vector<Term> conjuncts{ctx.body};
    std::map<VarName, VarName> renames;
    for (std::size_t i = 0; i < d; ++i) {
      VarName v = lead[i].bound_var();
      if (known.count(v)) {
        std::set<std::string> taken = used;
        for (const auto& n : all_names(sentence)) taken.insert(n);
        VarName nv = first_unused(SemType::e(), taken);
        renames[v] = nv;
        used.insert(nv);
        v = nv;
      }
      next.binders.push_back(v);
      conjuncts.push_back(lead[i].restrictor());
    }
    Term rest = core;
    for (std::size_t i = lead.size(); i-- > d;)
      rest = Term::scoped(lead[i].quant(), lead[i].bound_var(), lead[i].restrictor(), rest);
    conjuncts.push_back(rest);
    Term body = Term::true_();
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
      Term c = conjuncts[i];
      if (i > 0)
        for (const auto& [from, to] : renames) c = rename_free(c, from, to);
      body = conj_simplified(body, c);
    }
    next.body = body;
    out.push_back(std::move(next));
  }
  return out;
}

/// Renames binders from position `from` onward into the context pool.
inline ContextLF rename_into_pool(const ContextLF& ctx, std::size_t from) {
  ContextLF out = ctx;
  std::set<std::string> used = all_names(ctx.formula());
  for (std::size_t i = 0; i < from && i < ctx.binders.size(); ++i) used.insert(ctx.binders[i]);
  for (std::size_t i = from; i < out.binders.size(); ++i) {
    const VarName old = out.binders[i];
    std::size_t k = 0;
    VarName nv = context_pool_name(k);
    while (nv != old && used.count(nv)) nv = context_pool_name(++k);
    if (nv == old) continue;
    out.body = rename_free(out.body, old, nv);
    out.binders[i] = nv;
    used.insert(nv);
  }
  return out;
}

}  // namespace incr
