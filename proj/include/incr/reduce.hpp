#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incr/sem_type.hpp"
#include "incr/term.hpp"
#include "incr/typing.hpp"

namespace incr {

namespace detail {

inline Term normalize(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::App: {
      Term f = normalize(t.fun());
      std::vector<Term> args = t.args();
      if (f.is(K::Lam)) {
        Term r = substitute(f.body(), f.bound_var(), args.front());
        if (args.size() == 1) return normalize(r);
        return normalize(Term::app(r, {args.begin() + 1, args.end()}));
      }
      for (auto& a : args) a = normalize(a);
      return Term::app(f, std::move(args));
    }
    default: {
      if (t.children().empty()) return t;
      std::vector<Term> kids;
      for (const auto& k : t.children()) kids.push_back(normalize(k));
      return t.with_children(std::move(kids));
    }
  }
}

}  // namespace detail

// Variable name pools by type. Context discourse referents use their own pool
// so sentence-internal names stay x, y, z, ...
inline std::string pool_name(const SemType& ty, std::size_t i) {
  static const std::vector<std::string> e{"x", "y", "z", "w", "v", "u"};
  static const std::vector<std::string> t{"p", "r", "s"};
  static const std::vector<std::string> f{"P", "Q", "R", "S", "U", "V"};
  const auto& pool = ty.kind() == SemType::Kind::E ? e : ty.kind() == SemType::Kind::T ? t : f;
  std::string base = pool[i % pool.size()];
  std::size_t round = i / pool.size();
  return round == 0 ? base : base + std::to_string(round);
}

inline std::string context_pool_name(std::size_t i) {
  static const std::vector<std::string> pool{"w", "v", "u"};
  std::string base = pool[i % pool.size()];
  std::size_t round = i / pool.size();
  return round == 0 ? base : base + std::to_string(round);
}

inline std::string first_unused(const SemType& ty, const std::set<std::string>& used) {
  for (std::size_t i = 0;; ++i) {
    std::string n = pool_name(ty, i);
    if (!used.count(n)) return n;
  }
}

/// Gives every placeholder-named binder a readable name: the first name of
/// its type's pool not already used in the term or in `reserved`. Binders are
/// named in pre-order.
inline Term assign_names(const Term& t, const std::set<std::string>& reserved = {},
                         const std::optional<SemType>& expected = std::nullopt) {
  std::set<std::string> used = reserved;
  bool any = false;
  for (const auto& n : all_names(t)) {
    if (is_placeholder(n)) any = true;
    else used.insert(n);
  }
  if (!any) return t;
  TypeInfo info = infer_type(t, expected);
  std::vector<std::pair<VarName, SemType>> order;
  visit(t, [&](const Term& n) {
    if (!n.binds() || !is_placeholder(n.bound_var())) return;
    SemType ty = SemType::e();
    if (n.is(Term::Kind::Lam)) {
      auto it = info.binder_types.find(n.bound_var());
      if (it != info.binder_types.end()) ty = it->second;
    }
    order.emplace_back(n.bound_var(), ty);
  });
  std::map<VarName, VarName> renames;
  for (const auto& [ph, ty] : order) {
    if (renames.count(ph)) continue;
    std::string nm = first_unused(ty, used);
    used.insert(nm);
    renames[ph] = nm;
  }
  return map_bottom_up(t, [&](const Term& n) {
    if (n.name().empty() || !is_placeholder(n.name())) return n;
    auto it = renames.find(n.name());
    if (it == renames.end()) return n;
    if (n.is(Term::Kind::Var)) return Term::var(it->second);
    return n.with_name(it->second);
  });
}

/// Beta-normal form. Checks simple typability first (TypeError on a clash);
/// variables renamed to avoid capture get readable names.
inline Term beta_reduce(const Term& t) {
  infer_type(t);
  return assign_names(detail::normalize(t));
}

/// Normalization without the naming pass, for pipelines that name later.
inline Term beta_reduce_raw(const Term& t) { return detail::normalize(t); }

}  // namespace incr
