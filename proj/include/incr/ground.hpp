#pragma once

// Grounding of scoped formulas over a finite domain into propositional
// formulas, and a small DPLL satisfiability check. Grounding follows the
// dynamic truth conditions: existentials in a restrictor or left conjunct
// stay visible to the body or right conjunct.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <tuple>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "incr/error.hpp"
#include "incr/term.hpp"

namespace incr {

using Assignment = std::map<VarName, std::string>;

/// Hash-consed propositional formulas with constant folding.
class PropArena {
 public:
  enum class Op { True, False, Atom, Not, And, Or };
  using Ref = int;
  static constexpr Ref kTrue = 0, kFalse = 1;

  PropArena() {
    nodes_.push_back({Op::True, -1, {}});
    nodes_.push_back({Op::False, -1, {}});
  }

  Ref atom(const std::string& key) {
    auto [it, inserted] = atom_ids_.emplace(key, static_cast<int>(atom_names_.size()));
    if (inserted) atom_names_.push_back(key);
    return add({Op::Atom, it->second, {}});
  }
  Ref constant(bool b) { return b ? kTrue : kFalse; }
  Ref neg(Ref a) {
    if (a == kTrue) return kFalse;
    if (a == kFalse) return kTrue;
    if (nodes_[a].op == Op::Not) return nodes_[a].kids[0];
    return add({Op::Not, -1, {a}});
  }
  Ref conj(const std::vector<Ref>& xs) { return nary(Op::And, xs); }
  Ref disj(const std::vector<Ref>& xs) { return nary(Op::Or, xs); }
  Ref conj(Ref a, Ref b) { return conj(std::vector<Ref>{a, b}); }

  std::size_t atom_count() const { return atom_names_.size(); }
  const std::string& atom_name(int id) const { return atom_names_[id]; }

  /// A satisfying assignment of the atoms, or nullopt.
  std::optional<std::vector<bool>> solve(Ref root) const;

 private:
  struct Node {
    Op op;
    int atom;
    std::vector<Ref> kids;
    bool operator<(const Node& o) const {
      return std::tie(op, atom, kids) < std::tie(o.op, o.atom, o.kids);
    }
  };

  Ref add(Node n) {
    auto it = index_.find(n);
    if (it != index_.end()) return it->second;
    Ref r = static_cast<Ref>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(std::move(n), r);
    return r;
  }

  Ref nary(Op op, const std::vector<Ref>& xs) {
    Ref unit = op == Op::And ? kTrue : kFalse;
    Ref zero = op == Op::And ? kFalse : kTrue;
    std::set<Ref> kids;
    for (Ref x : xs) {
      if (x == zero) return zero;
      if (x == unit) continue;
      if (nodes_[x].op == op)
        kids.insert(nodes_[x].kids.begin(), nodes_[x].kids.end());
      else
        kids.insert(x);
    }
    if (kids.empty()) return unit;
    if (kids.size() == 1) return *kids.begin();
    return add({op, -1, {kids.begin(), kids.end()}});
  }

  std::vector<Node> nodes_;
  std::map<Node, Ref> index_;
  std::map<std::string, int> atom_ids_;
  std::vector<std::string> atom_names_;
};

namespace detail {

/// Conflict-driven clause learning over clauses of literals (+/-var, vars
/// numbered from 1): two watched literals, first-UIP learning, activity-based
/// branching.
class Dpll {
 public:
  Dpll(std::vector<std::vector<int>> clauses, std::size_t vars)
      : value_(vars + 1, 0), level_(vars + 1, 0), reason_(vars + 1, -1), activity_(vars + 1, 0.0),
        seen_(vars + 1, false), watches_(2 * (vars + 1)) {
    for (std::size_t v = vars; v >= 1; --v) order_.push({0.0, static_cast<int>(v)});
    for (auto& c : clauses) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool taut = false;
      for (std::size_t i = 0; i + 1 < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) taut = taut || c[i] == -c[j];
      if (taut) continue;
      if (c.empty()) {
        unsat_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      add_clause(std::move(c));
    }
  }

  bool run() {
    if (unsat_) return false;
    for (int u : units_) {
      if (lit_value(u) < 0) return false;
      if (lit_value(u) == 0) enqueue(u, -1);
    }
    for (;;) {
      int conflict = propagate();
      if (conflict >= 0) {
        if (decisions_.empty()) return false;
        auto [learnt, back] = analyze(conflict);
        backtrack(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int ci = add_clause(learnt);
          enqueue(learnt[0], ci);
        }
        decay_ *= 1.05;
        continue;
      }
      int pick = 0;
      while (!order_.empty()) {
        auto [act, v] = order_.top();
        order_.pop();
        if (value_[v] == 0 && act == activity_[v]) {
          pick = v;
          break;
        }
      }
      if (pick == 0) return true;
      decisions_.push_back(trail_.size());
      enqueue(-pick, -1);
    }
  }

  bool value(std::size_t var) const { return value_[var] > 0; }

 private:
  static std::size_t idx(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0); }

  int lit_value(int lit) const {
    int v = value_[std::abs(lit)];
    return lit > 0 ? v : -v;
  }

  int add_clause(std::vector<int> c) {
    int ci = static_cast<int>(clauses_.size());
    watches_[idx(c[0])].push_back(ci);
    watches_[idx(c[1])].push_back(ci);
    clauses_.push_back(std::move(c));
    return ci;
  }

  void enqueue(int lit, int reason) {
    int v = std::abs(lit);
    value_[v] = lit > 0 ? 1 : -1;
    level_[v] = static_cast<int>(decisions_.size());
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  int propagate() {
    while (head_ < trail_.size()) {
      int falsified = -trail_[head_++];
      auto& ws = watches_[idx(falsified)];
      for (std::size_t i = 0; i < ws.size();) {
        int ci = ws[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) > 0) {
          ++i;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (lit_value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[idx(c[1])].push_back(ci);
            ws[i] = ws.back();
            ws.pop_back();
            moved = true;
            break;
          }
        if (moved) continue;
        if (lit_value(c[0]) < 0) {
          head_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
        ++i;
      }
    }
    return -1;
  }

  std::pair<std::vector<int>, std::size_t> analyze(int conflict) {
    std::vector<int> learnt{0};
    int current = static_cast<int>(decisions_.size());
    int open = 0;
    int lit = 0;
    std::size_t t = trail_.size();
    int ci = conflict;
    do {
      for (int q : clauses_[ci]) {
        if (q == lit) continue;
        int v = std::abs(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = true;
        activity_[v] += decay_;
        order_.push({activity_[v], v});
        if (level_[v] == current) ++open;
        else learnt.push_back(q);
      }
      while (!seen_[std::abs(trail_[--t])]) {
      }
      lit = trail_[t];
      seen_[std::abs(lit)] = false;
      ci = reason_[std::abs(lit)];
      --open;
    } while (open > 0);
    learnt[0] = -lit;
    std::size_t back = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      seen_[std::abs(learnt[i])] = false;
      if (static_cast<std::size_t>(level_[std::abs(learnt[i])]) > back) {
        back = static_cast<std::size_t>(level_[std::abs(learnt[i])]);
        std::swap(learnt[1], learnt[i]);
      }
    }
    return {learnt, back};
  }

  void backtrack(std::size_t level) {
    if (decisions_.size() <= level) return;
    std::size_t keep = decisions_[level];
    for (std::size_t i = trail_.size(); i-- > keep;) {
      int v = std::abs(trail_[i]);
      value_[v] = 0;
      reason_[v] = -1;
      order_.push({activity_[v], v});
    }
    trail_.resize(keep);
    decisions_.resize(level);
    head_ = keep;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<int> units_;
  std::vector<int> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<bool> seen_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> trail_;
  std::vector<std::size_t> decisions_;
  // Max-heap on activity, ties to the lower variable; stale entries are
  // skipped when popped.
  struct ByActivity {
    bool operator()(const std::pair<double, int>& a, const std::pair<double, int>& b) const {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    }
  };
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, ByActivity> order_;
  std::size_t head_ = 0;
  double decay_ = 1.0;
  bool unsat_ = false;
};

}  // namespace detail

inline std::optional<std::vector<bool>> PropArena::solve(Ref root) const {
  if (root == kTrue) return std::vector<bool>(atom_count(), false);
  if (root == kFalse) return std::nullopt;
  // Tseitin encoding: one variable per node, atoms first.
  std::map<Ref, int> var;
  int next = static_cast<int>(atom_count());
  std::vector<std::vector<int>> clauses;
  std::function<int(Ref)> enc = [&](Ref r) -> int {
    const Node& n = nodes_[r];
    if (n.op == Op::Atom) return n.atom + 1;
    if (n.op == Op::Not) return -enc(n.kids[0]);
    if (auto it = var.find(r); it != var.end()) return it->second;
    int me = ++next;
    var[r] = me;
    std::vector<int> ks;
    for (Ref k : n.kids) ks.push_back(enc(k));
    if (n.op == Op::And) {
      std::vector<int> big{me};
      for (int k : ks) {
        clauses.push_back({-me, k});
        big.push_back(-k);
      }
      clauses.push_back(big);
    } else {
      std::vector<int> big{-me};
      for (int k : ks) {
        clauses.push_back({me, -k});
        big.push_back(k);
      }
      clauses.push_back(big);
    }
    return me;
  };
  clauses.push_back({enc(root)});
  detail::Dpll solver(std::move(clauses), static_cast<std::size_t>(next));
  if (!solver.run()) return std::nullopt;
  std::vector<bool> model(atom_count());
  for (std::size_t i = 0; i < atom_count(); ++i) model[i] = solver.value(i + 1);
  return model;
}

/// How ground atoms are interpreted: a fixed truth value, or an open atom.
struct AtomPolicy {
  /// Maps an individual constant to a domain element.
  std::function<std::string(const std::string&)> constant;
  /// Fixed value of pred(args), or nullopt for an open atom.
  std::function<std::optional<bool>(const std::string&, const std::vector<std::string>&)> fixed;
};

inline std::string ground_atom_key(const std::string& pred, const std::vector<std::string>& args) {
  std::string k = pred;
  if (!args.empty()) {
    k += "(";
    for (std::size_t i = 0; i < args.size(); ++i) k += (i ? "," : "") + args[i];
    k += ")";
  }
  return k;
}

class Grounder {
 public:
  using Ref = PropArena::Ref;
  using Cont = std::function<Ref(const Assignment&)>;

  Grounder(PropArena& arena, std::vector<std::string> domain, AtomPolicy policy, std::size_t atom_budget = 0)
      : arena_(arena), domain_(std::move(domain)), policy_(std::move(policy)), budget_(atom_budget) {}

  /// Propositional condition for `f` to have an output under `g`.
  Ref holds(const Term& f, const Assignment& g = {}) { return run(f, g, trivial_, &none_); }

  /// Propositional condition for `f` to have an output under `g` that
  /// satisfies the continuation.
  Ref ground(const Term& f, const Assignment& g, const Cont& k) { return run(f, g, k, nullptr); }

 private:
  using Vars = std::set<VarName>;

  /// Variables that `f` binds for what follows it.
  static void exported(const Term& f, Vars& out) {
    if (f.is(Term::Kind::And)) {
      exported(f.left(), out);
      exported(f.right(), out);
    } else if (f.is(Term::Kind::Scoped) && (f.quant() == Quant::Exists || f.quant() == Quant::The)) {
      out.insert(f.bound_var());
      exported(f.restrictor(), out);
      exported(f.body(), out);
    }
  }

  static Vars with(const Vars* needed, const Term& t) {
    Vars out = free_vars(t);
    if (needed) out.insert(needed->begin(), needed->end());
    return out;
  }

  /// `needed`: variables the continuation reads, or null if unknown.
  Ref run(const Term& f, const Assignment& g, const Cont& k, const Vars* needed) {
    using K = Term::Kind;
    if (&k != &trivial_ && needed) {
      Vars ex;
      exported(f, ex);
      bool independent = true;
      for (const auto& v : ex) independent = independent && !needed->count(v);
      if (independent) {
        Ref first = run(f, g, trivial_, &none_);
        return first == PropArena::kFalse ? first : arena_.conj(first, k(g));
      }
    }
    switch (f.kind()) {
      case K::True: return k(g);
      case K::Const: return arena_.conj(atomic(f.name(), {}), k(g));
      case K::App: {
        if (!f.fun().is(K::Const)) throw Error("cannot evaluate application of " + print_lf(f.fun()));
        std::vector<std::string> args;
        args.reserve(f.arity());
        for (std::size_t i = 0; i < f.arity(); ++i) args.push_back(individual(f.arg(i), g));
        return arena_.conj(atomic(f.fun().name(), args), k(g));
      }
      case K::And: {
        Vars rn = with(needed, f.right());
        return run(f.left(), g, [&](const Assignment& h) { return run(f.right(), h, k, needed); }, &rn);
      }
      case K::Impl: {
        Vars rn = free_vars(f.right());
        Ref ok = arena_.neg(run(f.left(), g, [&](const Assignment& h) { return arena_.neg(holds(f.right(), h)); }, &rn));
        return arena_.conj(ok, k(g));
      }
      case K::Scoped: {
        const VarName v = f.bound_var();
        std::vector<Ref> parts;
        bool dynamic = f.quant() == Quant::Exists || f.quant() == Quant::The;
        Vars bn = dynamic ? with(needed, f.body()) : free_vars(f.body());
        const Vars* bnp = dynamic && !needed ? nullptr : &bn;
        switch (f.quant()) {
          case Quant::Exists:
          case Quant::The:
            for (const auto& d : domain_) {
              Assignment h = g;
              h[v] = d;
              parts.push_back(run(f.restrictor(), h, [&](const Assignment& r) { return run(f.body(), r, k, needed); }, bnp));
            }
            return arena_.disj(parts);
          case Quant::Forall:
            for (const auto& d : domain_) {
              Assignment h = g;
              h[v] = d;
              parts.push_back(arena_.neg(run(f.restrictor(), h, [&](const Assignment& r) {
                return arena_.neg(holds(f.body(), r));
              }, bnp)));
            }
            return arena_.conj(arena_.conj(parts), k(g));
          case Quant::No:
            for (const auto& d : domain_) {
              Assignment h = g;
              h[v] = d;
              parts.push_back(arena_.neg(run(f.restrictor(), h, [&](const Assignment& r) { return holds(f.body(), r); }, bnp)));
            }
            return arena_.conj(arena_.conj(parts), k(g));
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

  std::string individual(const Term& a, const Assignment& g) {
    if (a.is(Term::Kind::Var)) {
      auto it = g.find(a.name());
      if (it == g.end()) throw UnboundVariable("unbound variable " + a.name());
      return it->second;
    }
    if (a.is(Term::Kind::Const)) return policy_.constant(a.name());
    if (a.is(Term::Kind::Lam) || a.is(Term::Kind::QTerm) || a.is(Term::Kind::Pro))
      throw Error("argument is not an individual: " + print_lf(a));
    // A propositional argument names itself, with the assignment applied.
    Term inst = a;
    for (const auto& v : free_vars(a)) {
      auto it = g.find(v);
      if (it == g.end()) throw UnboundVariable("unbound variable " + v);
      inst = substitute(inst, v, Term::constant(it->second));
    }
    return "[" + print_lf(inst) + "]";
  }

  Ref atomic(const std::string& pred, const std::vector<std::string>& args) {
    if (pred == "eq" && args.size() == 2) return arena_.constant(args[0] == args[1]);
    if (auto v = policy_.fixed(pred, args)) return arena_.constant(*v);
    Ref r = arena_.atom(ground_atom_key(pred, args));
    if (budget_ && arena_.atom_count() > budget_)
      throw SignatureTooLarge("more than " + std::to_string(budget_) + " ground atoms");
    return r;
  }

  const Vars none_;
  Cont trivial_ = [](const Assignment&) { return PropArena::kTrue; };
  PropArena& arena_;
  std::vector<std::string> domain_;
  AtomPolicy policy_;
  std::size_t budget_;
};

}  // namespace incr
