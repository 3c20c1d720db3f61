#pragma once

// Logical forms: lambda terms extended with in-situ quantifier terms,
// pronoun placeholders and scoped quantifier nodes.

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "incr/error.hpp"

namespace incr {

enum class Quant { Forall, Exists, No, The };

inline std::string_view quant_name(Quant q) {
  switch (q) {
    case Quant::Forall: return "forall";
    case Quant::Exists: return "exists";
    case Quant::No: return "no";
    case Quant::The: return "the";
  }
  return "?";
}

inline std::optional<Quant> parse_quant(std::string_view s) {
  if (s == "forall") return Quant::Forall;
  if (s == "exists") return Quant::Exists;
  if (s == "no") return Quant::No;
  if (s == "the") return Quant::The;
  return std::nullopt;
}

using VarName = std::string;

class Term {
 public:
  enum class Kind { Const, Var, App, Lam, QTerm, Pro, Scoped, And, Impl, True };

  Term() : Term(true_()) {}

  static Term constant(std::string name) { return make(Kind::Const, std::move(name), {}, {}); }
  static Term var(VarName name) { return make(Kind::Var, std::move(name), {}, {}); }
  static Term true_() {
    static const Term t = make(Kind::True, "", {}, {});
    return t;
  }
  /// Nested applications are flattened: app(app(f,a),b) == app(f,a,b).
  static Term app(const Term& fun, std::vector<Term> args) {
    if (args.empty()) return fun;
    std::vector<Term> kids;
    if (fun.kind() == Kind::App) {
      kids = fun.node_->kids;
    } else {
      kids.push_back(fun);
    }
    for (auto& a : args) kids.push_back(std::move(a));
    return make(Kind::App, "", {}, std::move(kids));
  }
  static Term lam(VarName v, Term body) { return make(Kind::Lam, std::move(v), {}, {std::move(body)}); }
  static Term qterm(Quant q, VarName v, Term restrictor) {
    return make(Kind::QTerm, std::move(v), q, {std::move(restrictor)});
  }
  static Term pro(VarName v) { return make(Kind::Pro, std::move(v), {}, {}); }
  static Term scoped(Quant q, VarName v, Term restrictor, Term body) {
    return make(Kind::Scoped, std::move(v), q, {std::move(restrictor), std::move(body)});
  }
  static Term conj(Term l, Term r) { return make(Kind::And, "", {}, {std::move(l), std::move(r)}); }
  static Term impl(Term a, Term c) { return make(Kind::Impl, "", {}, {std::move(a), std::move(c)}); }

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  /// Constant or variable name; the bound variable for binders.
  const std::string& name() const { return node_->name; }
  const VarName& bound_var() const { return node_->name; }
  Quant quant() const { return *node_->quant; }

  // App
  const Term& fun() const { return node_->kids[0]; }
  std::vector<Term> args() const { return {node_->kids.begin() + 1, node_->kids.end()}; }
  std::size_t arity() const { return node_->kids.size() - 1; }
  const Term& arg(std::size_t i) const { return node_->kids[i + 1]; }
  // Lam
  const Term& body() const { return node_->kind == Kind::Scoped ? node_->kids[1] : node_->kids[0]; }
  // QTerm / Scoped
  const Term& restrictor() const { return node_->kids[0]; }
  // And / Impl
  const Term& left() const { return node_->kids[0]; }
  const Term& right() const { return node_->kids[1]; }

  const std::vector<Term>& children() const { return node_->kids; }
  /// Same node with replaced children.
  Term with_children(std::vector<Term> kids) const {
    if (kind() == Kind::App) return app(kids[0], {kids.begin() + 1, kids.end()});
    return make(node_->kind, node_->name, node_->quant, std::move(kids));
  }
  Term with_name(std::string n) const { return make(node_->kind, std::move(n), node_->quant, node_->kids); }

  bool binds() const {
    return is(Kind::Lam) || is(Kind::QTerm) || is(Kind::Scoped) || is(Kind::Pro);
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->kind != b.node_->kind || a.node_->name != b.node_->name ||
        a.node_->quant != b.node_->quant || a.node_->kids.size() != b.node_->kids.size())
      return false;
    for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
      if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
    return true;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<Quant> quant;
    std::vector<Term> kids;
  };

  static Term make(Kind k, std::string name, std::optional<Quant> q, std::vector<Term> kids) {
    Term t(nullptr);
    t.node_ = std::make_shared<const Node>(Node{k, std::move(name), q, std::move(kids)});
    return t;
  }
  explicit Term(std::nullptr_t) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

inline void print_to(const Term& t, std::string& out) {
  using K = Term::Kind;
  auto list = [&](const std::vector<Term>& ts, std::size_t from) {
    for (std::size_t i = from; i < ts.size(); ++i) {
      if (i > from) out += ',';
      print_to(ts[i], out);
    }
  };
  switch (t.kind()) {
    case K::Const:
    case K::Var: out += t.name(); break;
    case K::True: out += "true"; break;
    case K::App:
      print_to(t.fun(), out);
      out += '(';
      list(t.children(), 1);
      out += ')';
      break;
    case K::Lam:
      out += "lam(" + t.bound_var() + ",";
      print_to(t.body(), out);
      out += ')';
      break;
    case K::QTerm:
      out += "q(";
      out += quant_name(t.quant());
      out += "," + t.bound_var() + ",";
      print_to(t.restrictor(), out);
      out += ')';
      break;
    case K::Pro: out += "pro(" + t.bound_var() + ")"; break;
    case K::Scoped:
      out += quant_name(t.quant());
      out += "(" + t.bound_var() + ",";
      print_to(t.restrictor(), out);
      out += ',';
      print_to(t.body(), out);
      out += ')';
      break;
    case K::And:
    case K::Impl:
      out += t.is(K::And) ? "and(" : "impl(";
      list(t.children(), 0);
      out += ')';
      break;
  }
}

/// Canonical ASCII text of a term; see the LF grammar in README.md.
inline std::string print_lf(const Term& t) {
  std::string s;
  print_to(t, s);
  return s;
}

// ---------------------------------------------------------------------------
// Traversal helpers

/// Pre-order visit of every node.
inline void visit(const Term& t, const std::function<void(const Term&)>& f) {
  f(t);
  for (const auto& k : t.children()) visit(k, f);
}

/// Bottom-up rebuild; `f` sees the node with already-mapped children.
inline Term map_bottom_up(const Term& t, const std::function<Term(const Term&)>& f) {
  if (t.children().empty()) return f(t);
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  bool changed = false;
  for (const auto& k : t.children()) {
    kids.push_back(map_bottom_up(k, f));
    changed = changed || !(kids.back() == k);
  }
  return f(changed ? t.with_children(std::move(kids)) : t);
}

/// Every identifier appearing anywhere (constants, variables, binders).
inline std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  visit(t, [&](const Term& n) {
    if (!n.name().empty()) out.insert(n.name());
  });
  return out;
}

/// Variables introduced by quantifier terms. They may be referenced outside
/// their restrictor (pronoun coindexing), so they count as bound wherever
/// they occur in the enclosing formula.
inline std::vector<VarName> qterm_vars(const Term& t) {
  std::vector<VarName> out;
  visit(t, [&](const Term& n) {
    if (n.is(Term::Kind::QTerm)) out.push_back(n.bound_var());
  });
  return out;
}

namespace detail {
inline void free_vars_rec(const Term& t, std::set<VarName>& bound, std::set<VarName>& out) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case K::Lam:
    case K::QTerm:
    case K::Scoped: {
      bool fresh = bound.insert(t.bound_var()).second;
      for (const auto& k : t.children()) free_vars_rec(k, bound, out);
      if (fresh) bound.erase(t.bound_var());
      return;
    }
    default:
      for (const auto& k : t.children()) free_vars_rec(k, bound, out);
  }
}
}  // namespace detail

/// Exact free-variable set. Pronoun placeholders are not variables of the
/// formula; quantifier-term variables are bound throughout the formula.
inline std::set<VarName> free_vars(const Term& t) {
  std::set<VarName> bound;
  for (auto& v : qterm_vars(t)) bound.insert(v);
  std::set<VarName> out;
  detail::free_vars_rec(t, bound, out);
  return out;
}

inline bool occurs_free(const Term& t, const VarName& v) { return free_vars(t).count(v) > 0; }

// ---------------------------------------------------------------------------
// Fresh names and substitution

/// Placeholder names start with '_' and never survive into printed output:
/// they are renamed by `assign_names` (naming.hpp).
inline bool is_placeholder(std::string_view name) { return !name.empty() && name.front() == '_'; }

inline VarName fresh_placeholder() {
  static std::atomic<unsigned long> counter{0};
  return "_" + std::to_string(++counter);
}

/// Renames every free occurrence of `from` to `to` (no capture checks; `to`
/// must be fresh).
inline Term rename_free(const Term& t, const VarName& from, const VarName& to) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var: return t.name() == from ? Term::var(to) : t;
    case K::Lam:
    case K::Scoped:
      if (t.bound_var() == from) return t;
      [[fallthrough]];
    default: {
      if (t.children().empty()) return t;
      std::vector<Term> kids;
      for (const auto& k : t.children()) kids.push_back(rename_free(k, from, to));
      return t.with_children(std::move(kids));
    }
  }
}

/// Renames a binder and all occurrences it binds.
inline Term rename_binder(const Term& binder, const VarName& to) {
  std::vector<Term> kids;
  for (const auto& k : binder.children()) kids.push_back(rename_free(k, binder.bound_var(), to));
  return binder.with_name(to).with_children(std::move(kids));
}

/// Capture-avoiding substitution of `value` for free occurrences of `v`.
inline Term substitute(const Term& t, const VarName& v, const Term& value,
                       const std::set<VarName>& value_fv) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var: return t.name() == v ? value : t;
    case K::Const:
    case K::True:
    case K::Pro: return t;
    case K::Lam:
    case K::Scoped:
    case K::QTerm: {
      if (t.bound_var() == v) return t;
      Term cur = t;
      if (value_fv.count(t.bound_var())) cur = rename_binder(t, fresh_placeholder());
      std::vector<Term> kids;
      for (const auto& k : cur.children()) kids.push_back(substitute(k, v, value, value_fv));
      return cur.with_children(std::move(kids));
    }
    default: {
      std::vector<Term> kids;
      for (const auto& k : t.children()) kids.push_back(substitute(k, v, value, value_fv));
      return t.with_children(std::move(kids));
    }
  }
}

inline Term substitute(const Term& t, const VarName& v, const Term& value) {
  return substitute(t, v, value, free_vars(value));
}

/// Replaces every pronoun placeholder `pro(v)` by `value`.
inline Term replace_pronoun(const Term& t, const VarName& v, const Term& value) {
  return map_bottom_up(t, [&](const Term& n) {
    return n.is(Term::Kind::Pro) && n.bound_var() == v ? value : n;
  });
}

/// Renames every binder to a fresh placeholder (hygienic instantiation of
/// lexical semantics).
inline Term freshen(const Term& t) {
  std::map<VarName, VarName> global;
  for (const auto& v : qterm_vars(t)) global.emplace(v, fresh_placeholder());
  visit(t, [&](const Term& n) {
    if (n.is(Term::Kind::Pro)) global.emplace(n.bound_var(), fresh_placeholder());
  });
  std::function<Term(const Term&, std::map<VarName, VarName>&)> rec =
      [&](const Term& n, std::map<VarName, VarName>& env) -> Term {
    using K = Term::Kind;
    switch (n.kind()) {
      case K::Var: {
        if (auto it = env.find(n.name()); it != env.end()) return Term::var(it->second);
        if (auto it = global.find(n.name()); it != global.end()) return Term::var(it->second);
        return n;
      }
      case K::QTerm:
      case K::Pro: {
        Term renamed = n.with_name(global.at(n.bound_var()));
        if (n.children().empty()) return renamed;
        return renamed.with_children({rec(n.restrictor(), env)});
      }
      case K::Lam:
      case K::Scoped: {
        auto saved = env;
        VarName nv = fresh_placeholder();
        env[n.bound_var()] = nv;
        std::vector<Term> kids;
        for (const auto& k : n.children()) kids.push_back(rec(k, env));
        env = saved;
        return n.with_name(nv).with_children(std::move(kids));
      }
      default: {
        if (n.children().empty()) return n;
        std::vector<Term> kids;
        for (const auto& k : n.children()) kids.push_back(rec(k, env));
        return n.with_children(std::move(kids));
      }
    }
  };
  std::map<VarName, VarName> env;
  return rec(t, env);
}

// ---------------------------------------------------------------------------
// Alpha equivalence

/// Renames all bound variables to `#0`, `#1`, ... in traversal order.
/// Quantifier-term and pronoun variables are numbered first, in order of
/// their binder's occurrence. Alpha-equivalent terms have equal canonical
/// forms.
inline Term alpha_canonical(const Term& t) {
  std::map<VarName, VarName> global;
  std::size_t next = 0;
  visit(t, [&](const Term& n) {
    if (n.is(Term::Kind::QTerm) || n.is(Term::Kind::Pro))
      global.emplace(n.bound_var(), "#" + std::to_string(next++));
  });
  std::function<Term(const Term&, std::map<VarName, VarName>&)> rec =
      [&](const Term& n, std::map<VarName, VarName>& env) -> Term {
    using K = Term::Kind;
    switch (n.kind()) {
      case K::Var: {
        if (auto it = env.find(n.name()); it != env.end()) return Term::var(it->second);
        if (auto it = global.find(n.name()); it != global.end()) return Term::var(it->second);
        return n;
      }
      case K::QTerm:
      case K::Pro: {
        Term renamed = n.with_name(global.at(n.bound_var()));
        if (n.children().empty()) return renamed;
        return renamed.with_children({rec(n.restrictor(), env)});
      }
      case K::Lam:
      case K::Scoped: {
        auto saved = env;
        env[n.bound_var()] = "#" + std::to_string(next++);
        VarName nv = env[n.bound_var()];
        std::vector<Term> kids;
        for (const auto& k : n.children()) kids.push_back(rec(k, env));
        env = saved;
        return n.with_name(nv).with_children(std::move(kids));
      }
      default: {
        if (n.children().empty()) return n;
        std::vector<Term> kids;
        for (const auto& k : n.children()) kids.push_back(rec(k, env));
        return n.with_children(std::move(kids));
      }
    }
  };
  std::map<VarName, VarName> env;
  return rec(t, env);
}

inline bool alpha_equal(const Term& a, const Term& b) { return alpha_canonical(a) == alpha_canonical(b); }

/// Conjunction that drops trivially true conjuncts.
inline Term conj_simplified(const Term& l, const Term& r) {
  if (l.is(Term::Kind::True)) return r;
  if (r.is(Term::Kind::True)) return l;
  return Term::conj(l, r);
}

}  // namespace incr
