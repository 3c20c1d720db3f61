#pragma once

// Simple-type inference for logical forms by unification. Predicates applied
// to arguments yield t; bare constants are entities unless context forces t
// (nullary propositions); quantifier terms and pronouns are entities.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incr/error.hpp"
#include "incr/sem_type.hpp"
#include "incr/term.hpp"

namespace incr {

struct TypeInfo {
  SemType type;
  /// Types of lambda-bound variables, keyed by binder name (binder names are
  /// assumed distinct, as they are after hygienic instantiation).
  std::map<VarName, SemType> binder_types;
  /// Types at which free variables are used.
  std::map<VarName, SemType> free_types;
};

namespace detail {

class Unifier {
 public:
  enum class Tag { Var, E, T, Fn };
  struct Node {
    Tag tag;
    int a = -1, b = -1;
    int parent;
  };

  int fresh() { return push({Tag::Var, -1, -1, 0}); }
  int e() { return push({Tag::E, -1, -1, 0}); }
  int t() { return push({Tag::T, -1, -1, 0}); }
  int fn(int a, int b) { return push({Tag::Fn, a, b, 0}); }

  int from(const SemType& s) {
    switch (s.kind()) {
      case SemType::Kind::E: return e();
      case SemType::Kind::T: return t();
      case SemType::Kind::Fn: return fn(from(s.arg()), from(s.result()));
    }
    return e();
  }

  int find(int x) {
    while (nodes_[x].parent != x) x = nodes_[x].parent = nodes_[nodes_[x].parent].parent;
    return x;
  }

  void unify(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    Node& nx = nodes_[x];
    Node& ny = nodes_[y];
    if (nx.tag == Tag::Var) {
      if (occurs(x, y)) throw TypeError("type clash: infinite type");
      nx.parent = y;
      return;
    }
    if (ny.tag == Tag::Var) {
      unify(y, x);
      return;
    }
    if (nx.tag != ny.tag) throw TypeError("type clash: " + show(x) + " vs " + show(y));
    if (nx.tag == Tag::Fn) {
      int xa = nx.a, xb = nx.b, ya = ny.a, yb = ny.b;
      unify(xa, ya);
      unify(xb, yb);
    }
  }

  SemType resolve(int x) {
    x = find(x);
    switch (nodes_[x].tag) {
      case Tag::Var:
      case Tag::E: return SemType::e();
      case Tag::T: return SemType::t();
      case Tag::Fn: {
        int a = nodes_[x].a, b = nodes_[x].b;
        return SemType::fn(resolve(a), resolve(b));
      }
    }
    return SemType::e();
  }

  std::string show(int x) {
    x = find(x);
    switch (nodes_[x].tag) {
      case Tag::Var: return "?";
      case Tag::E: return "e";
      case Tag::T: return "t";
      case Tag::Fn: return "(" + show(nodes_[x].a) + "->" + show(nodes_[x].b) + ")";
    }
    return "?";
  }

 private:
  int push(Node n) {
    n.parent = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    return n.parent;
  }
  bool occurs(int v, int in) {
    in = find(in);
    if (in == v) return true;
    if (nodes_[in].tag != Tag::Fn) return false;
    int a = nodes_[in].a, b = nodes_[in].b;
    return occurs(v, a) || occurs(v, b);
  }

  std::vector<Node> nodes_;
};

class Inferencer {
 public:
  int infer(const Term& t, std::map<VarName, int>& env) {
    using K = Term::Kind;
    switch (t.kind()) {
      case K::True: return u.t();
      case K::Const: return u.fresh();
      case K::Var: {
        auto it = env.find(t.name());
        if (it != env.end()) return it->second;
        auto f = free.find(t.name());
        if (f != free.end()) return f->second;
        int v = u.fresh();
        free[t.name()] = v;
        return v;
      }
      case K::App: {
        if (t.fun().is(K::Const)) {
          for (const auto& a : t.args()) infer(a, env);
          return u.t();
        }
        int ft = infer(t.fun(), env);
        for (const auto& a : t.args()) {
          int at = infer(a, env);
          int r = u.fresh();
          u.unify(ft, u.fn(at, r));
          ft = r;
        }
        return ft;
      }
      case K::Lam: {
        int a = u.fresh();
        auto saved = env.find(t.bound_var()) != env.end() ? std::optional<int>(env[t.bound_var()]) : std::nullopt;
        env[t.bound_var()] = a;
        binders[t.bound_var()] = a;
        int b = infer(t.body(), env);
        if (saved) env[t.bound_var()] = *saved; else env.erase(t.bound_var());
        return u.fn(a, b);
      }
      case K::QTerm: {
        u.unify(infer(t.restrictor(), env), u.t());
        return u.e();
      }
      case K::Pro: return u.e();
      case K::Scoped: {
        auto saved = env.find(t.bound_var()) != env.end() ? std::optional<int>(env[t.bound_var()]) : std::nullopt;
        env[t.bound_var()] = u.e();
        u.unify(infer(t.restrictor(), env), u.t());
        u.unify(infer(t.body(), env), u.t());
        if (saved) env[t.bound_var()] = *saved; else env.erase(t.bound_var());
        return u.t();
      }
      case K::And:
      case K::Impl:
        u.unify(infer(t.left(), env), u.t());
        u.unify(infer(t.right(), env), u.t());
        return u.t();
    }
    return u.fresh();
  }

  Unifier u;
  std::map<VarName, int> binders;
  std::map<VarName, int> free;
};

}  // namespace detail

/// Infers the type of `t`, optionally checked against `expected`.
/// Throws TypeError on a clash.
inline TypeInfo infer_type(const Term& t, const std::optional<SemType>& expected = std::nullopt) {
  detail::Inferencer inf;
  std::map<VarName, int> env;
  for (const auto& v : qterm_vars(t)) env[v] = inf.u.e();
  int ty = inf.infer(t, env);
  if (expected) inf.u.unify(ty, inf.u.from(*expected));
  TypeInfo info{inf.u.resolve(ty), {}, {}};
  for (const auto& [name, id] : inf.binders) info.binder_types.emplace(name, inf.u.resolve(id));
  for (const auto& [name, id] : inf.free) info.free_types.emplace(name, inf.u.resolve(id));
  return info;
}

inline SemType type_of(const Term& t) { return infer_type(t).type; }

inline bool has_type(const Term& t, const SemType& expected) {
  try {
    infer_type(t, expected);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace incr
